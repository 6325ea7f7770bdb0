#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "edgedel/deletion.hpp"
#include "edgedel/engine.hpp"
#include "edgedel/error.hpp"
#include "edgedel/model.hpp"

namespace edgedel {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// sum_u p(u) * log(1 / (pm(u) * se(u))) with 0 log(.) = 0. Positive mass on
// a zero parameter gives +inf.
inline double edge_kl_term(std::span<const double> p, std::span<const double> pm, std::span<const double> se) {
  double t = 0.0;
  for (std::size_t u = 0; u < p.size(); ++u) {
    if (p[u] == 0.0) continue;
    if (pm[u] == 0.0 || se[u] == 0.0) return kInf;
    t -= p[u] * (std::log(pm[u]) + std::log(se[u]));
  }
  return t;
}

// KL(Pr(.|e), Pr'(.|e')) over all variables of the augmented network,
// split into per-edge terms and the log(Pr'(e')/Pr(e)) correction.
struct KlBreakdown {
  std::vector<double> edge_terms;
  double correction = 0.0;
  double total = 0.0;

  bool infinite() const { return std::isinf(total); }
};

inline KlBreakdown kl_bound(const EngineState& original, const EngineState& approximate, const Approximation& ap) {
  const double pe = original.probability_of_evidence();
  const double pe2 = approximate.probability_of_evidence();
  if (!(pe > 0.0)) throw InconsistentEvidence("kl_bound: Pr(e) = 0 in the augmented network");
  if (!(pe2 > 0.0)) throw InconsistentEvidence("kl_bound: Pr'(e') = 0 in the approximate network");
  KlBreakdown out;
  out.correction = std::log(pe2) - std::log(pe);
  out.total = out.correction;
  for (std::size_t i = 0; i < ap.plan.size(); ++i) {
    const auto& link = ap.link(i);
    // Pr(u u' | e) vanishes off the diagonal in the augmented network.
    const auto joint = pairwise_marginal(original, link.parent, link.clone);
    std::vector<double> diag(joint.rows);
    for (std::size_t u = 0; u < joint.rows; ++u) diag[u] = joint.at(u, u);
    const auto& prm = ap.plan.entries[i].params;
    out.edge_terms.push_back(edge_kl_term(diag, prm.pm, prm.se));
    out.total += out.edge_terms.back();
  }
  return out;
}

inline KlBreakdown kl_bound(const Network& augmented, const Approximation& ap, const Evidence& ev) {
  return kl_bound(compile(augmented, ev), compile(ap.network, ap.evidence), ap);
}

namespace detail {

inline double kl_of_tables(std::span<const double> p_unnorm, std::span<const double> q_unnorm) {
  double sp = 0.0, sq = 0.0;
  for (double x : p_unnorm) sp += x;
  for (double x : q_unnorm) sq += x;
  double kl = 0.0;
  for (std::size_t i = 0; i < p_unnorm.size(); ++i) {
    const double p = p_unnorm[i] / sp;
    if (p == 0.0) continue;
    const double q = q_unnorm[i] / sq;
    if (q == 0.0) return kInf;
    kl += p * std::log(p / q);
  }
  return kl;
}

}  // namespace detail

// KL(Pr(X|e), Pr'(X|e')) over the unobserved original variables X, with
// clones summed out of both sides; X's joint table is enumerated in full.
inline double exact_kl(const EngineState& original, const EngineState& approximate,
                       double cap = kDefaultEnumerationCap) {
  if (!(original.probability_of_evidence() > 0.0)) throw InconsistentEvidence("exact_kl: Pr(e) = 0");
  if (!(approximate.probability_of_evidence() > 0.0)) throw InconsistentEvidence("exact_kl: Pr'(e') = 0");
  const Network& net = original.network();
  std::vector<VarId> x;
  double space = 1.0;
  for (auto v : net.original_variables()) {
    if (original.evidence().contains(v)) continue;
    x.push_back(v);
    space *= static_cast<double>(net.cardinality(v));
  }
  if (space > cap) throw CapacityError("exact_kl: original state space exceeds enumeration cap", space);
  const auto p = joint_marginal(original, x, cap);
  const auto q = joint_marginal(approximate, x, cap);
  return detail::kl_of_tables(p.values(), q.values());
}

inline double exact_kl(const Network& augmented, const Approximation& ap, const Evidence& ev,
                       double cap = kDefaultEnumerationCap) {
  return exact_kl(compile(augmented, ev), compile(ap.network, ap.evidence), cap);
}

// Pr'(e') and its gradients for a single deleted equivalence edge,
// computed from dPr(e)/d theta_{u'|u} of the augmented network alone.
struct SingleEdgeQuantities {
  double pr_e = 0.0;
  std::vector<double> d_pm;  // dPr'(e')/d theta_{u'}
  std::vector<double> d_se;  // dPr'(e')/d theta_{s'|u}
};

// `equivalence_derivs` is indexed [u, u'] with u' fastest. Pure arithmetic.
inline SingleEdgeQuantities single_edge_evaluate(std::span<const double> equivalence_derivs, const EdgeParams& params) {
  const std::size_t n = params.pm.size();
  SingleEdgeQuantities q{0.0, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      const double d = equivalence_derivs[u * n + v];
      q.d_pm[v] += params.se[u] * d;
      q.d_se[u] += params.pm[v] * d;
      q.pr_e += params.se[u] * params.pm[v] * d;
    }
  return q;
}

inline SingleEdgeQuantities single_edge_evaluate(const CptDerivatives& d, const EdgeParams& params) {
  return single_edge_evaluate(d.table, params);
}

inline constexpr double kFloorDerivative = 1e-12;

// One ED-KL update of a parameter vector: new(u) ~ p(u) / d(u), normalized.
// Returns true when a zero derivative met positive mass and was floored.
inline bool kl_update(std::span<const double> p, std::span<const double> d, std::vector<double>& out) {
  bool floored = false;
  out.assign(p.size(), 0.0);
  for (std::size_t u = 0; u < p.size(); ++u) {
    if (p[u] == 0.0) continue;
    double du = d[u];
    if (!(du > 0.0)) {
      du = kFloorDerivative;
      floored = true;
    }
    out[u] = p[u] / du;
  }
  normalize_in_place(out);
  return floored;
}

struct EdgeScore {
  Edge edge;             // in the original network
  EdgeParams params;     // single-edge ED-KL parameters
  double score = 0.0;    // KL bound for deleting this edge alone
  std::size_t iterations = 0;
  bool converged = false;
  double stationarity_gap = 0.0;  // max |Pr'(u|e') - Pr(u|e)|, |Pr'(u'|e') - Pr(u|e)|
};

struct ScoreOptions {
  std::size_t max_iterations = 50;
  double tolerance = 1e-10;
  std::size_t width_cap = 25;
};

// Scores every edge in isolation from one compiled state of the fully
// augmented network, then sorts ascending (stable, so ties keep edge order).
inline std::vector<EdgeScore> score_edges(const Network& net, const Evidence& ev, const ScoreOptions& opt = {}) {
  Network augmented;
  if (net.aux_edges.empty()) {
    const auto all = net.edges();
    std::vector<Edge> edges;
    for (auto [p, c] : all) edges.push_back({p, c});
    augmented = augment(net, edges);
  } else {
    augmented = net;
  }
  const auto st = compile(augmented, ev, {.width_cap = opt.width_cap, .fixed_order = {}});
  st.require_consistent();
  const double pe = st.probability_of_evidence();

  std::vector<EdgeScore> scores;
  for (const auto& link : augmented.aux_edges) {
    if (link.deleted()) continue;
    const auto derivs = cpt_derivatives(st, link.clone);
    const auto p = posterior_marginal(st, link.parent);
    const std::size_t n = p.size();
    EdgeScore es;
    es.edge = {link.parent, link.child};
    es.params = EdgeParams::uniform(n);
    std::vector<double> next;
    for (std::size_t it = 0; it < opt.max_iterations; ++it) {
      double change = 0.0;
      auto q = single_edge_evaluate(derivs, es.params);
      kl_update(p, q.d_pm, next);
      for (std::size_t u = 0; u < n; ++u) change = std::max(change, std::abs(next[u] - es.params.pm[u]));
      es.params.pm = next;
      q = single_edge_evaluate(derivs, es.params);
      kl_update(p, q.d_se, next);
      for (std::size_t u = 0; u < n; ++u) change = std::max(change, std::abs(next[u] - es.params.se[u]));
      es.params.se = next;
      es.iterations = it + 1;
      if (change < opt.tolerance) {
        es.converged = true;
        break;
      }
    }
    const auto q = single_edge_evaluate(derivs, es.params);
    es.score = q.pr_e > 0.0 ? edge_kl_term(p, es.params.pm, es.params.se) + std::log(q.pr_e) - std::log(pe) : kInf;
    if (q.pr_e > 0.0)
      for (std::size_t u = 0; u < n; ++u) {
        es.stationarity_gap = std::max(es.stationarity_gap, std::abs(es.params.pm[u] * q.d_pm[u] / q.pr_e - p[u]));
        es.stationarity_gap = std::max(es.stationarity_gap, std::abs(es.params.se[u] * q.d_se[u] / q.pr_e - p[u]));
      }
    scores.push_back(std::move(es));
  }
  std::stable_sort(scores.begin(), scores.end(), [](const EdgeScore& a, const EdgeScore& b) { return a.score < b.score; });
  return scores;
}

struct EdgeRank {
  Edge edge;
  double value = 0.0;
};

// MI(U; X | e) for every edge U -> X, ascending (weakest dependency first).
inline std::vector<EdgeRank> mutual_information_scores(const Network& net, const Evidence& ev) {
  const auto st = compile(net, ev);
  st.require_consistent();
  std::vector<Edge> edges;
  if (net.aux_edges.empty()) {
    for (auto [p, c] : net.edges()) edges.push_back({p, c});
  } else {
    for (const auto& l : net.aux_edges) edges.push_back({l.parent, l.child});
  }
  std::vector<EdgeRank> out;
  for (const auto& e : edges) {
    const auto j = pairwise_marginal(st, e.parent, e.child);
    std::vector<double> pu(j.rows, 0.0), px(j.cols, 0.0);
    for (std::size_t a = 0; a < j.rows; ++a)
      for (std::size_t b = 0; b < j.cols; ++b) {
        pu[a] += j.at(a, b);
        px[b] += j.at(a, b);
      }
    double mi = 0.0;
    for (std::size_t a = 0; a < j.rows; ++a)
      for (std::size_t b = 0; b < j.cols; ++b) {
        const double pab = j.at(a, b);
        if (pab > 0.0) mi += pab * std::log(pab / (pu[a] * px[b]));
      }
    out.push_back({e, std::max(mi, 0.0)});
  }
  std::stable_sort(out.begin(), out.end(), [](const EdgeRank& a, const EdgeRank& b) { return a.value < b.value; });
  return out;
}

}  // namespace edgedel
