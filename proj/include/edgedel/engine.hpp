#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "edgedel/error.hpp"
#include "edgedel/factor.hpp"
#include "edgedel/model.hpp"
#include "edgedel/ordering.hpp"

namespace edgedel {

struct EngineOptions {
  std::size_t width_cap = 25;
  // When set, every query eliminates variables in this relative order
  // instead of a fresh min-fill order. Must cover all variables.
  std::optional<std::vector<VarId>> fixed_order;
};

namespace detail {
inline std::atomic<std::size_t>& compile_counter() {
  static std::atomic<std::size_t> n{0};
  return n;
}
}  // namespace detail

// Number of compile() calls made by this process. Diagnostic only.
inline std::size_t compile_count() { return detail::compile_counter().load(); }

// Compiled (network, evidence) pair. Immutable; every query is read-only.
class EngineState {
 public:
  const Network& network() const noexcept { return net_; }
  const Evidence& evidence() const noexcept { return ev_; }
  const EliminationOrder& order() const noexcept { return order_; }
  double probability_of_evidence() const noexcept { return pr_e_; }

  // Unnormalized Pr(keep, e) as a factor whose scope is `keep` in the given
  // order. When `without_cpt` is set, that variable's CPT is left out of
  // the product (the evidence indicator on it stays).
  Factor eliminate_to(std::span<const VarId> keep, std::optional<VarId> without_cpt = std::nullopt,
                      double table_cap = kDefaultEnumerationCap) const {
    std::vector<Factor> pool;
    pool.reserve(factors_.size());
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (without_cpt && i == *without_cpt) continue;
      pool.push_back(factors_[i]);
    }
    std::vector<char> is_keep(net_.size(), 0);
    for (auto v : keep) is_keep.at(v) = 1;

    std::vector<VarId> order;
    if (options_.fixed_order) {
      for (auto v : *options_.fixed_order)
        if (!is_keep[v]) order.push_back(v);
    } else {
      std::vector<std::vector<VarId>> scopes;
      scopes.reserve(pool.size());
      for (const auto& f : pool) scopes.push_back(f.scope());
      auto g = InteractionGraph::from_scopes(net_.size(), scopes);
      std::vector<VarId> cand;
      for (VarId v = 0; v < net_.size(); ++v)
        if (!is_keep[v]) cand.push_back(v);
      min_fill_phase(g, std::move(cand), order);
    }

    for (auto v : order) {
      Factor prod;
      bool any = false;
      for (std::size_t i = 0; i < pool.size();) {
        if (pool[i].contains(v)) {
          prod = any ? multiply_factors(prod, pool[i]) : std::move(pool[i]);
          any = true;
          pool[i] = std::move(pool.back());
          pool.pop_back();
        } else {
          ++i;
        }
      }
      if (any) pool.push_back(sum_out(prod, v));
    }

    Factor result = Factor::scalar(1.0);
    for (const auto& f : pool) result = multiply_factors(result, f);
    for (auto v : keep) {
      if (!result.contains(v)) result = multiply_factors(result, Factor::filled({v}, {net_.cardinality(v)}, 1.0));
    }
    if (static_cast<double>(result.size()) > table_cap)
      throw CapacityError("joint table over " + std::to_string(keep.size()) + " variables exceeds cap",
                          static_cast<double>(result.size()));
    return permute(result, keep);
  }

  void require_consistent() const {
    if (!(pr_e_ > 0.0)) throw InconsistentEvidence("evidence has probability zero");
  }

 private:
  friend EngineState compile(const Network& net, const Evidence& ev, EngineOptions opts);

  Network net_;
  Evidence ev_;
  EngineOptions options_;
  EliminationOrder order_;
  std::vector<Factor> factors_;  // one CPT factor per variable, then evidence indicators
  double pr_e_ = 0.0;
};

inline EngineState compile(const Network& net, const Evidence& ev, EngineOptions opts = {}) {
  ++detail::compile_counter();
  check_evidence(net, ev);
  EngineState st;
  st.net_ = net;
  st.ev_ = ev;
  if (opts.fixed_order) {
    std::vector<VarId> sorted = *opts.fixed_order;
    std::sort(sorted.begin(), sorted.end());
    for (VarId v = 0; v < net.size(); ++v)
      if (v >= sorted.size() || sorted[v] != v) throw InvalidArgument("fixed elimination order is not a permutation");
    st.order_.order = *opts.fixed_order;
    st.order_.induced_width = induced_width(net, st.order_.order);
  } else {
    st.order_ = min_fill_order(net);
  }
  if (st.order_.induced_width > opts.width_cap)
    throw CapacityError("induced width " + std::to_string(st.order_.induced_width) + " exceeds cap " +
                            std::to_string(opts.width_cap),
                        static_cast<double>(st.order_.induced_width));
  st.options_ = std::move(opts);
  st.factors_.reserve(net.size() + ev.size());
  for (VarId v = 0; v < net.size(); ++v) st.factors_.push_back(net.cpt_factor(v));
  for (const auto& [v, s] : ev) {
    Factor ind = Factor::filled({v}, {net.cardinality(v)}, 0.0);
    ind[s] = 1.0;
    st.factors_.push_back(std::move(ind));
  }
  st.pr_e_ = st.eliminate_to({}).values().at(0);
  if (!std::isfinite(st.pr_e_)) throw NumericalError("Pr(e) is not finite");
  return st;
}

// Pr(keep, e), unnormalized, as a dense factor over `keep`.
inline Factor joint_marginal(const EngineState& st, std::span<const VarId> keep,
                             double table_cap = kDefaultEnumerationCap) {
  return st.eliminate_to(keep, std::nullopt, table_cap);
}

// Pr(v | e).
inline std::vector<double> posterior_marginal(const EngineState& st, VarId v) {
  st.require_consistent();
  const VarId keep[] = {v};
  auto f = st.eliminate_to(keep);
  auto out = f.values();
  normalize_in_place(out);
  return out;
}

// Joint posterior table over the states of (a, b), row-major in a.
struct PairwiseMarginal {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> p;

  double at(std::size_t i, std::size_t j) const { return p[i * cols + j]; }
};

// Pr(a, b | e); for a == b the diagonal matrix of the posterior.
inline PairwiseMarginal pairwise_marginal(const EngineState& st, VarId a, VarId b) {
  st.require_consistent();
  const std::size_t na = st.network().cardinality(a);
  const std::size_t nb = st.network().cardinality(b);
  if (a == b) {
    auto p = posterior_marginal(st, a);
    PairwiseMarginal out{na, na, std::vector<double>(na * na, 0.0)};
    for (std::size_t i = 0; i < na; ++i) out.p[i * na + i] = p[i];
    return out;
  }
  const VarId keep[] = {a, b};
  auto f = st.eliminate_to(keep);
  PairwiseMarginal out{na, nb, std::move(f.values())};
  normalize_in_place(out.p);
  return out;
}

// d[parents, child] = dPr(e)/d theta_{child | parents}, indexed like the CPT.
struct CptDerivatives {
  VarId child = 0;
  std::vector<VarId> parents;
  std::vector<double> table;
};

inline constexpr double kEulerTolerance = 1e-9;

// Derivatives by indicator replacement: the family marginal of every factor
// except the CPT itself. Exact at zero-valued parameters.
inline CptDerivatives cpt_derivatives(const EngineState& st, VarId child) {
  const Network& net = st.network();
  const Cpt& c = net.cpt(child);
  std::vector<VarId> fam = c.parents;
  fam.push_back(child);
  auto f = st.eliminate_to(fam, child);
  CptDerivatives d{child, c.parents, std::move(f.values())};
  double euler = 0.0;
  for (std::size_t i = 0; i < d.table.size(); ++i) euler += c.table[i] * d.table[i];
  const double pe = st.probability_of_evidence();
  if (std::abs(euler - pe) > kEulerTolerance * std::max(pe, 1e-300) && std::abs(euler - pe) > 1e-300)
    throw NumericalError("derivative table for '" + net.variables[child].name + "' violates the Euler identity");
  return d;
}

struct MapSolution {
  std::map<VarId, std::size_t> assignment;
  double value = 0.0;        // Pr(m*, e)
  bool degenerate = false;   // Pr(e) = 0; assignment arbitrary
};

// Max over the MAP variables of the sum over everything else. Decoding
// picks the lowest state index among maximizers, variable by variable in
// reverse elimination order.
inline MapSolution exact_map(const EngineState& st, std::span<const VarId> map_vars, std::size_t width_cap = 25) {
  const Network& net = st.network();
  MapSolution sol;
  if (!(st.probability_of_evidence() > 0.0)) {
    for (auto v : map_vars) sol.assignment[v] = st.evidence().get(v).value_or(0);
    sol.degenerate = true;
    return sol;
  }
  const auto ord = constrained_order(net, map_vars);
  if (ord.induced_width > width_cap)
    throw CapacityError("constrained width " + std::to_string(ord.induced_width) + " exceeds cap " +
                            std::to_string(width_cap),
                        static_cast<double>(ord.induced_width));

  std::vector<char> is_map(net.size(), 0);
  for (auto v : map_vars) is_map.at(v) = 1;

  // Sum out the non-MAP variables first (the order guarantees it), then
  // max out the MAP variables, remembering each product for decoding.
  std::vector<Factor> pool;
  for (VarId v = 0; v < net.size(); ++v) pool.push_back(net.cpt_factor(v));
  for (const auto& [v, s] : st.evidence()) {
    Factor ind = Factor::filled({v}, {net.cardinality(v)}, 0.0);
    ind[s] = 1.0;
    pool.push_back(std::move(ind));
  }
  auto take_product = [&](VarId v) {
    Factor prod;
    bool any = false;
    for (std::size_t i = 0; i < pool.size();) {
      if (pool[i].contains(v)) {
        prod = any ? multiply_factors(prod, pool[i]) : std::move(pool[i]);
        any = true;
        pool[i] = std::move(pool.back());
        pool.pop_back();
      } else {
        ++i;
      }
    }
    if (!any) prod = Factor::filled({v}, {net.cardinality(v)}, 1.0);
    return prod;
  };

  std::vector<std::pair<VarId, Factor>> trace;
  for (auto v : ord.order) {
    Factor prod = take_product(v);
    if (!is_map[v]) {
      pool.push_back(sum_out(prod, v));
    } else {
      pool.push_back(max_out(prod, v));
      trace.emplace_back(v, std::move(prod));
    }
  }
  double value = 1.0;
  for (const auto& f : pool) value *= f.values().at(0);
  sol.value = value;

  std::vector<std::size_t> state(net.size(), 0);
  for (auto it = trace.rbegin(); it != trace.rend(); ++it) {
    const auto& [v, f] = *it;
    const auto pos = f.position(v);
    std::vector<std::size_t> a(f.scope().size(), 0);
    for (std::size_t k = 0; k < f.scope().size(); ++k)
      if (k != pos) a[k] = state[f.scope()[k]];
    double best = -1.0;
    std::size_t arg = 0;
    for (std::size_t s = 0; s < f.cards()[pos]; ++s) {
      a[pos] = s;
      const double x = f.at(a);
      if (x > best) {
        best = x;
        arg = s;
      }
    }
    state[v] = arg;
    sol.assignment[v] = arg;
  }
  return sol;
}

}  // namespace edgedel
