#include <gtest/gtest.h>

#include "edgedel/factor.hpp"

using namespace edgedel;

TEST(Factor, ProductAlignsSharedVariables) {
  const Factor f({0, 1}, {2, 2}, {0.1, 0.2, 0.3, 0.4});
  const Factor g({1, 2}, {2, 3}, {1, 2, 3, 4, 5, 6});
  const auto h = multiply_factors(f, g);
  ASSERT_EQ(h.scope(), (std::vector<VarId>{0, 1, 2}));
  const std::size_t s[] = {1, 0, 2};  // a=1 b=0 c=2
  EXPECT_DOUBLE_EQ(h.at(s), 0.3 * 3);
  const std::size_t t[] = {0, 1, 1};
  EXPECT_DOUBLE_EQ(h.at(t), 0.2 * 5);
}

TEST(Factor, CardinalityMismatchRejected) {
  const Factor f({0}, {2}, {1, 1});
  const Factor g({0}, {3}, {1, 1, 1});
  EXPECT_THROW(multiply_factors(f, g), InvalidArgument);
}

TEST(Factor, SumOutAndMarginalizeAgree) {
  const Factor f({3, 5, 7}, {2, 3, 2}, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
  const auto a = sum_out(sum_out(f, 5), 3);
  const VarId keep[] = {7};
  const auto b = marginalize_factor(f, keep);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_DOUBLE_EQ(a[0], b[0]);
  EXPECT_DOUBLE_EQ(a[1], b[1]);
  EXPECT_DOUBLE_EQ(a[0], 1 + 3 + 5 + 7 + 9 + 11);
  EXPECT_DOUBLE_EQ(f.sum(), 78);
}

TEST(Factor, MaxOutBreaksTiesTowardLowestState) {
  const Factor f({0, 1}, {2, 3}, {0.5, 0.5, 0.1, 0.2, 0.7, 0.7});
  std::vector<std::size_t> arg;
  const auto m = max_out(f, 1, &arg);
  EXPECT_DOUBLE_EQ(m[0], 0.5);
  EXPECT_DOUBLE_EQ(m[1], 0.7);
  EXPECT_EQ(arg, (std::vector<std::size_t>{0, 1}));
}

TEST(Factor, PermuteReordersScope) {
  const Factor f({0, 1}, {2, 3}, {1, 2, 3, 4, 5, 6});
  const VarId order[] = {1, 0};
  const auto p = permute(f, order);
  const std::size_t s[] = {2, 1};
  EXPECT_DOUBLE_EQ(p.at(s), 6);
  const std::size_t t[] = {1, 0};
  EXPECT_DOUBLE_EQ(p.at(t), 2);
}

TEST(Factor, NormalizeRejectsZeroMass) {
  std::vector<double> v{0, 0};
  EXPECT_THROW(normalize_in_place(v), NumericalError);
  std::vector<double> w{1, 3};
  normalize_in_place(w);
  EXPECT_DOUBLE_EQ(w[1], 0.75);
}
