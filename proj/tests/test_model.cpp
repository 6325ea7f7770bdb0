#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace edgedel;

namespace {
bool has_rule(const std::vector<Violation>& vs, const std::string& rule) {
  for (const auto& v : vs)
    if (v.rule == rule) return true;
  return false;
}
}  // namespace

TEST(Model, CounterexampleIsValid) {
  const auto c = fixtures::counterexample();
  EXPECT_TRUE(validate_network(c.net).empty());
}

TEST(Model, NormalizationViolationNamed) {
  auto c = fixtures::counterexample();
  c.net.cpts[c.u1].table = {0.5, 0.6};
  const auto vs = validate_network(c.net);
  ASSERT_TRUE(has_rule(vs, "normalization"));
  EXPECT_EQ(vs.front().variable, "U1");
}

TEST(Model, CycleReportedOnce) {
  Network n;
  const auto a = n.add_variable("A", {"0", "1"});
  const auto b = n.add_variable("B", {"0", "1"});
  n.cpts[a].parents = {b};
  n.cpts[a].table = {1, 0, 0, 1};
  n.cpts[b].parents = {a};
  n.cpts[b].table = {1, 0, 0, 1};
  const auto vs = validate_network(n);
  std::size_t cycles = 0;
  for (const auto& v : vs) cycles += v.rule == "acyclic";
  EXPECT_EQ(cycles, 1u);
}

TEST(Model, TableLengthAndDuplicateParent) {
  Network n;
  const auto a = n.add_variable("A", {"0", "1"});
  const auto b = n.add_variable("B", {"0", "1"});
  n.cpts[a].table = {0.5, 0.5};
  n.cpts[b].parents = {a, a};
  n.cpts[b].table = {1, 0};
  const auto vs = validate_network(n);
  EXPECT_TRUE(has_rule(vs, "duplicate-parent"));
}

TEST(Model, EnumerateJointMatchesOracle) {
  Rng rng(11);
  for (int t = 0; t < 5; ++t) {
    const auto net = random_network(rng, 6);
    const auto ev = fixtures::random_evidence(net, rng);
    const auto j = enumerate_joint(net, ev);
    EXPECT_NEAR(j.sum(), oracle::pr_evidence(net, ev), 1e-14);
  }
}

TEST(Model, EnumerationCapEnforced) {
  Rng rng(3);
  const auto net = random_network(rng, 8, 2);
  EXPECT_THROW(enumerate_joint(net, {}, 16.0), CapacityError);
}

TEST(Model, EvidenceOutOfRangeRejected) {
  const auto c = fixtures::counterexample();
  Evidence ev;
  ev.set(c.u1, 5);
  EXPECT_THROW(check_evidence(c.net, ev), SemanticError);
}
