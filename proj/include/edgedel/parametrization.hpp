#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "edgedel/deletion.hpp"
#include "edgedel/divergence.hpp"
#include "edgedel/engine.hpp"
#include "edgedel/error.hpp"
#include "edgedel/model.hpp"
#include "edgedel/tags.hpp"

namespace edgedel {

struct IterationConfig {
  Method method = Method::ed_kl;
  std::size_t max_iterations = 200;
  double tolerance = 1e-8;  // max absolute change of any edge parameter in one sweep
  double damping = 0.0;     // in [0, 1)
  Schedule schedule = Schedule::sequential;
  Initialization initialization = Initialization::uniform;
  std::size_t width_cap = 25;

  void validate() const {
    if (!(damping >= 0.0 && damping < 1.0)) throw InvalidArgument("damping must lie in [0, 1)");
    if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  }
};

struct FixedPointReport {
  std::vector<double> residuals;  // per edge, last sweep
  std::vector<double> bp_gaps;   // parent/clone agreement and retracted-evidence condition
  std::vector<double> exactness_gaps;   // distance of parent and clone marginals from Pr(u|e)
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

struct SweepRecord {
  std::size_t sweep = 0;
  double residual = 0.0;
  std::optional<double> kl_bound;
};

struct RunResult {
  Approximation approximation;
  FixedPointReport report;
  std::vector<SweepRecord> trace;

  const DeletionPlan& plan() const { return approximation.plan; }
};

namespace detail {

// dPr'(e')/d theta_{u'} for plan entry i.
inline std::vector<double> clone_derivative(const EngineState& st, const AuxEdge& link) {
  return cpt_derivatives(st, link.clone).table;
}

// dPr'(e')/d theta_{s'|u} for the observed state of S'.
inline std::vector<double> soft_evidence_derivative(const EngineState& st, const AuxEdge& link) {
  const auto d = cpt_derivatives(st, *link.soft_evidence).table;
  std::vector<double> out(d.size() / 2);
  for (std::size_t u = 0; u < out.size(); ++u) out[u] = d[2 * u];
  return out;
}

// Geometric interpolation old^lambda * new^(1-lambda), renormalized.
inline std::vector<double> damp(const std::vector<double>& old_v, std::vector<double> new_v, double lambda) {
  if (lambda == 0.0) return new_v;
  for (std::size_t i = 0; i < new_v.size(); ++i)
    new_v[i] = std::pow(old_v[i], lambda) * std::pow(new_v[i], 1.0 - lambda);
  normalize_in_place(new_v);
  return new_v;
}

inline std::vector<double> normalized_or_throw(std::vector<double> v, const std::string& what) {
  double s = 0.0;
  for (double x : v) s += x;
  if (!(s > 0.0)) throw DegenerateUpdate("all-zero derivative vector for " + what);
  for (auto& x : v) x /= s;
  return v;
}

enum class Slot { pm, se };

struct StepContext {
  Method method;
  Schedule schedule;
  double damping;
  std::size_t width_cap;
  const std::vector<std::vector<double>>* true_marginals;
  std::vector<std::string>* warnings;
};

// New value of one parameter set computed from a compiled N'.
inline std::vector<double> update_slot(const EngineState& st, const Approximation& ap, std::size_t i, Slot slot,
                                       const StepContext& ctx) {
  const auto& link = ap.link(i);
  const auto& prm = ap.plan.entries[i].params;
  const auto label = edge_label(ap.network, ap.plan.entries[i].edge);
  std::vector<double> fresh;
  if (ctx.method == Method::ed_bp) {
    // Cross-paired: PM from the soft-evidence derivative and vice versa.
    fresh = slot == Slot::pm ? normalized_or_throw(soft_evidence_derivative(st, link), label + " (PM)")
                             : normalized_or_throw(clone_derivative(st, link), label + " (SE)");
  } else {
    if (!(st.probability_of_evidence() > 0.0))
      throw InconsistentEvidence("approximation has Pr'(e') = 0 while updating " + label);
    const auto& p = (*ctx.true_marginals)[i];
    const auto d = slot == Slot::pm ? clone_derivative(st, link) : soft_evidence_derivative(st, link);
    if (kl_update(p, d, fresh) && ctx.warnings)
      ctx.warnings->push_back("zero derivative floored at " + std::to_string(kFloorDerivative) + " on " + label);
  }
  return damp(slot == Slot::pm ? prm.pm : prm.se, std::move(fresh), ctx.damping);
}

inline DeletionPlan step(const Approximation& ap, const StepContext& ctx) {
  if (ap.plan.empty()) return ap.plan;
  const EngineOptions eo{.width_cap = ctx.width_cap, .fixed_order = {}};
  if (ctx.schedule == Schedule::simultaneous) {
    const auto st = compile(ap.network, ap.evidence, eo);
    DeletionPlan out = ap.plan;
    for (std::size_t i = 0; i < ap.plan.size(); ++i) {
      out.entries[i].params.pm = update_slot(st, ap, i, Slot::pm, ctx);
      out.entries[i].params.se = update_slot(st, ap, i, Slot::se, ctx);
    }
    return out;
  }
  // Sequential: one parameter set at a time, N' recompiled after each.
  Approximation work = ap;
  for (std::size_t i = 0; i < work.plan.size(); ++i) {
    for (Slot slot : {Slot::pm, Slot::se}) {
      const auto st = compile(work.network, work.evidence, eo);
      auto v = update_slot(st, work, i, slot, ctx);
      EdgeParams next = work.plan.entries[i].params;
      (slot == Slot::pm ? next.pm : next.se) = std::move(v);
      set_edge_params(work, i, next);
    }
  }
  return work.plan;
}

inline std::vector<std::vector<double>> true_marginals(const EngineState& original, const Approximation& ap) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < ap.plan.size(); ++i) out.push_back(posterior_marginal(original, ap.link(i).parent));
  return out;
}

inline double max_change(const EdgeParams& a, const EdgeParams& b) {
  double r = 0.0;
  for (std::size_t u = 0; u < a.pm.size(); ++u) {
    r = std::max(r, std::abs(a.pm[u] - b.pm[u]));
    r = std::max(r, std::abs(a.se[u] - b.se[u]));
  }
  return r;
}

}  // namespace detail

// One ED-BP sweep: PM(u') ~ dPr'(e')/d theta_{s'|u}, SE(u) ~ dPr'(e')/d theta_{u'}.
inline DeletionPlan edbp_step(const Approximation& ap, Schedule schedule = Schedule::sequential, double damping = 0.0,
                              std::size_t width_cap = 25) {
  return detail::step(ap, {Method::ed_bp, schedule, damping, width_cap, nullptr, nullptr});
}

// One ED-KL sweep: PM(u') ~ Pr(u|e) / dPr'(e')/d theta_{u'} and
// SE(u) ~ Pr(u|e) / dPr'(e')/d theta_{s'|u}. `true_marginals[i]` is
// Pr(u|e) for the parent of plan entry i, taken from the augmented network.
inline DeletionPlan edkl_step(const Approximation& ap, const std::vector<std::vector<double>>& true_marginals,
                              Schedule schedule = Schedule::sequential, double damping = 0.0,
                              std::vector<std::string>* warnings = nullptr, std::size_t width_cap = 25) {
  if (true_marginals.size() != ap.plan.size()) throw InvalidArgument("edkl_step: one true marginal per edge required");
  return detail::step(ap, {Method::ed_kl, schedule, damping, width_cap, &true_marginals, warnings});
}

// Compares N' against the fixed-point conditions. The BP-style gaps need only
// N'; the exactness gaps use Pr(u|e) from the augmented network.
inline FixedPointReport check_conditions(const EngineState& original, const Approximation& ap, std::size_t width_cap = 25) {
  FixedPointReport rep;
  const EngineOptions eo{.width_cap = width_cap, .fixed_order = {}};
  const auto st = compile(ap.network, ap.evidence, eo);
  st.require_consistent();
  for (std::size_t i = 0; i < ap.plan.size(); ++i) {
    const auto& link = ap.link(i);
    const auto pu = posterior_marginal(st, link.parent);
    const auto pc = posterior_marginal(st, link.clone);
    Evidence retracted = ap.evidence;
    retracted.erase(*link.soft_evidence);
    const auto pu_without = posterior_marginal(compile(ap.network, retracted, eo), link.parent);
    const auto truth = posterior_marginal(original, link.parent);
    const auto& pm = ap.plan.entries[i].params.pm;
    double g2 = 0.0, g4 = 0.0;
    for (std::size_t u = 0; u < pu.size(); ++u) {
      g2 = std::max({g2, std::abs(pu[u] - pc[u]), std::abs(pu_without[u] - pm[u])});
      g4 = std::max({g4, std::abs(pu[u] - truth[u]), std::abs(pc[u] - truth[u])});
    }
    rep.bp_gaps.push_back(g2);
    rep.exactness_gaps.push_back(g4);
  }
  return rep;
}

inline FixedPointReport check_conditions(const Network& augmented, const Approximation& ap, const Evidence& ev,
                                         std::size_t width_cap = 25) {
  return check_conditions(compile(augmented, ev, {.width_cap = width_cap, .fixed_order = {}}), ap, width_cap);
}

// Iterates the chosen update until the largest parameter change in a sweep
// falls below the tolerance or the sweep budget runs out. Non-convergence
// is reported, not thrown.
inline RunResult run(const Network& augmented, const Evidence& ev, DeletionPlan plan, const IterationConfig& cfg) {
  cfg.validate();
  if (cfg.initialization == Initialization::uniform)
    for (auto& e : plan.entries) e.params = EdgeParams::uniform(augmented.cardinality(e.edge.parent));

  RunResult res;
  res.approximation = delete_edges(augmented, plan, ev);
  auto& ap = res.approximation;
  const auto original = compile(augmented, ev, {.width_cap = cfg.width_cap, .fixed_order = {}});
  std::vector<std::vector<double>> truth;
  if (cfg.method == Method::ed_kl) {
    original.require_consistent();
    truth = detail::true_marginals(original, ap);
  }
  const detail::StepContext ctx{cfg.method, cfg.schedule, cfg.damping, cfg.width_cap,
                                &truth, &res.report.warnings};

  res.report.residuals.assign(ap.plan.size(), 0.0);
  for (std::size_t sweep = 1; sweep <= cfg.max_iterations; ++sweep) {
    const auto next = detail::step(ap, ctx);
    double residual = 0.0;
    for (std::size_t i = 0; i < ap.plan.size(); ++i) {
      res.report.residuals[i] = detail::max_change(ap.plan.entries[i].params, next.entries[i].params);
      residual = std::max(residual, res.report.residuals[i]);
      set_edge_params(ap, i, next.entries[i].params);
    }
    SweepRecord rec{sweep, residual, std::nullopt};
    if (cfg.method == Method::ed_kl) {
      const auto approx_state = compile(ap.network, ap.evidence, {.width_cap = cfg.width_cap, .fixed_order = {}});
      if (approx_state.probability_of_evidence() > 0.0) rec.kl_bound = kl_bound(original, approx_state, ap).total;
    }
    res.trace.push_back(rec);
    res.report.iterations = sweep;
    if (residual < cfg.tolerance) {
      res.report.converged = true;
      break;
    }
  }
  if (original.probability_of_evidence() > 0.0) {
    auto gaps = check_conditions(original, ap, cfg.width_cap);
    res.report.bp_gaps = std::move(gaps.bp_gaps);
    res.report.exactness_gaps = std::move(gaps.exactness_gaps);
  }
  return res;
}

}  // namespace edgedel
