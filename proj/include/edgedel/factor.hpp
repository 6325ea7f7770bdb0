#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "edgedel/error.hpp"

namespace edgedel {

using VarId = std::size_t;

// Dense nonnegative table over an ordered scope. Entries are laid out
// lexicographically with the last scope variable varying fastest.
class Factor {
 public:
  Factor() : values_{1.0} {}

  Factor(std::vector<VarId> scope, std::vector<std::size_t> cards, std::vector<double> values)
      : scope_(std::move(scope)), cards_(std::move(cards)), values_(std::move(values)) {
    if (scope_.size() != cards_.size()) throw InvalidArgument("factor scope and cardinalities differ in length");
    for (std::size_t i = 0; i < scope_.size(); ++i) {
      if (cards_[i] == 0) throw InvalidArgument("factor variable with zero states");
      for (std::size_t j = i + 1; j < scope_.size(); ++j)
        if (scope_[i] == scope_[j]) throw InvalidArgument("factor scope lists a variable twice");
    }
    if (values_.size() != table_size(cards_))
      throw InvalidArgument("factor table has " + std::to_string(values_.size()) + " entries, expected " +
                            std::to_string(table_size(cards_)));
  }

  // Constant factor with empty scope.
  static Factor scalar(double v) { return Factor({}, {}, {v}); }

  // Factor filled with a single value.
  static Factor filled(std::vector<VarId> scope, std::vector<std::size_t> cards, double v) {
    const std::size_t n = table_size(cards);
    return Factor(std::move(scope), std::move(cards), std::vector<double>(n, v));
  }

  const std::vector<VarId>& scope() const noexcept { return scope_; }
  const std::vector<std::size_t>& cards() const noexcept { return cards_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  bool contains(VarId v) const { return position(v) != npos; }

  std::size_t position(VarId v) const {
    auto it = std::find(scope_.begin(), scope_.end(), v);
    return it == scope_.end() ? npos : static_cast<std::size_t>(it - scope_.begin());
  }

  // Row-major strides, last variable stride 1.
  std::vector<std::size_t> strides() const {
    std::vector<std::size_t> s(scope_.size());
    std::size_t acc = 1;
    for (std::size_t i = scope_.size(); i-- > 0;) {
      s[i] = acc;
      acc *= cards_[i];
    }
    return s;
  }

  // Entry for an assignment given in scope order.
  double at(std::span<const std::size_t> states) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < scope_.size(); ++i) idx = idx * cards_[i] + states[i];
    return values_[idx];
  }

  double sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

  static std::size_t table_size(std::span<const std::size_t> cards) {
    std::size_t n = 1;
    for (auto c : cards) n *= c;
    return n;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<VarId> scope_;
  std::vector<std::size_t> cards_;
  std::vector<double> values_;
};

namespace detail {

// Walks the result table in index order while tracking the matching offset
// into an operand whose variables are a subset of the result scope.
struct Odometer {
  std::vector<std::size_t> cards;
  std::vector<std::size_t> counter;

  explicit Odometer(std::vector<std::size_t> c) : cards(std::move(c)), counter(cards.size(), 0) {}

  // Advances one step; `offsets[k]` is updated using `strides[k][dim]`.
  template <std::size_t K>
  void step(std::size_t (&offsets)[K], const std::vector<std::size_t> (&strides)[K]) {
    for (std::size_t d = cards.size(); d-- > 0;) {
      if (++counter[d] < cards[d]) {
        for (std::size_t k = 0; k < K; ++k) offsets[k] += strides[k][d];
        return;
      }
      counter[d] = 0;
      for (std::size_t k = 0; k < K; ++k) offsets[k] -= strides[k][d] * (cards[d] - 1);
    }
  }
};

// Stride of each result dimension inside `f` (0 where `f` lacks the variable).
inline std::vector<std::size_t> embedded_strides(const Factor& f, std::span<const VarId> result_scope) {
  const auto fs = f.strides();
  std::vector<std::size_t> out(result_scope.size(), 0);
  for (std::size_t i = 0; i < result_scope.size(); ++i) {
    auto p = f.position(result_scope[i]);
    if (p != Factor::npos) out[i] = fs[p];
  }
  return out;
}

}  // namespace detail

// Product over the union scope: f's variables first, then g's new ones.
inline Factor multiply_factors(const Factor& f, const Factor& g) {
  std::vector<VarId> scope = f.scope();
  std::vector<std::size_t> cards = f.cards();
  for (std::size_t i = 0; i < g.scope().size(); ++i) {
    auto p = f.position(g.scope()[i]);
    if (p == Factor::npos) {
      scope.push_back(g.scope()[i]);
      cards.push_back(g.cards()[i]);
    } else if (f.cards()[p] != g.cards()[i]) {
      throw InvalidArgument("factors disagree on the cardinality of variable " + std::to_string(g.scope()[i]));
    }
  }
  const std::size_t n = Factor::table_size(cards);
  std::vector<double> out(n);
  const std::vector<std::size_t> strides[2] = {detail::embedded_strides(f, scope), detail::embedded_strides(g, scope)};
  std::size_t off[2] = {0, 0};
  detail::Odometer odo(cards);
  bool overflow = false;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = f[off[0]] * g[off[1]];
    overflow |= std::isinf(out[i]);
    if (i + 1 < n) odo.step(off, strides);
  }
  if (overflow) throw NumericalError("factor product overflowed to infinity");
  return Factor(std::move(scope), std::move(cards), std::move(out));
}

// Sums out every variable not in `keep`; surviving variables keep their order.
inline Factor marginalize_factor(const Factor& f, std::span<const VarId> keep) {
  std::vector<VarId> scope;
  std::vector<std::size_t> cards;
  for (std::size_t i = 0; i < f.scope().size(); ++i) {
    if (std::find(keep.begin(), keep.end(), f.scope()[i]) != keep.end()) {
      scope.push_back(f.scope()[i]);
      cards.push_back(f.cards()[i]);
    }
  }
  for (auto v : keep)
    if (!f.contains(v)) throw InvalidArgument("marginalize: variable " + std::to_string(v) + " not in scope");
  if (scope.size() == f.scope().size()) return f;
  Factor result = Factor::filled(scope, cards, 0.0);
  const std::vector<std::size_t> strides[1] = {detail::embedded_strides(result, f.scope())};
  std::size_t off[1] = {0};
  detail::Odometer odo(f.cards());
  for (std::size_t i = 0; i < f.size(); ++i) {
    result[off[0]] += f[i];
    if (i + 1 < f.size()) odo.step(off, strides);
  }
  return result;
}

inline Factor sum_out(const Factor& f, VarId v) {
  std::vector<VarId> keep;
  for (auto u : f.scope())
    if (u != v) keep.push_back(u);
  return marginalize_factor(f, keep);
}

// Max-marginal over `v`; `argmax` receives, per result entry, the lowest
// state index attaining the maximum.
inline Factor max_out(const Factor& f, VarId v, std::vector<std::size_t>* argmax = nullptr) {
  const auto pos = f.position(v);
  if (pos == Factor::npos) throw InvalidArgument("max_out: variable not in scope");
  std::vector<VarId> scope;
  std::vector<std::size_t> cards;
  for (std::size_t i = 0; i < f.scope().size(); ++i) {
    if (i == pos) continue;
    scope.push_back(f.scope()[i]);
    cards.push_back(f.cards()[i]);
  }
  Factor result = Factor::filled(scope, cards, -1.0);
  std::vector<std::size_t> best(result.size(), 0);
  const std::vector<std::size_t> strides[1] = {detail::embedded_strides(result, f.scope())};
  std::size_t off[1] = {0};
  detail::Odometer odo(f.cards());
  for (std::size_t i = 0; i < f.size(); ++i) {
    // States of v are visited in increasing order, so strict > keeps the lowest.
    if (f[i] > result[off[0]]) {
      result[off[0]] = f[i];
      best[off[0]] = odo.counter[pos];
    }
    if (i + 1 < f.size()) odo.step(off, strides);
  }
  if (argmax) *argmax = std::move(best);
  return result;
}

// Reorders the scope of `f` to `order` (a permutation of its scope).
inline Factor permute(const Factor& f, std::span<const VarId> order) {
  if (order.size() != f.scope().size()) throw InvalidArgument("permute: order is not a permutation of the scope");
  std::vector<std::size_t> cards;
  for (auto v : order) {
    auto p = f.position(v);
    if (p == Factor::npos) throw InvalidArgument("permute: order is not a permutation of the scope");
    cards.push_back(f.cards()[p]);
  }
  std::vector<double> out(f.size());
  const std::vector<std::size_t> strides[1] = {detail::embedded_strides(f, order)};
  std::size_t off[1] = {0};
  detail::Odometer odo(cards);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = f[off[0]];
    if (i + 1 < out.size()) odo.step(off, strides);
  }
  return Factor(std::vector<VarId>(order.begin(), order.end()), std::move(cards), std::move(out));
}

inline void normalize_in_place(std::vector<double>& v) {
  const double s = std::accumulate(v.begin(), v.end(), 0.0);
  if (!(s > 0.0) || !std::isfinite(s)) throw NumericalError("cannot normalize a vector with sum " + std::to_string(s));
  for (auto& x : v) x /= s;
}

}  // namespace edgedel
