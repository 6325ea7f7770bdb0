#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "edgedel/deletion.hpp"
#include "edgedel/engine.hpp"
#include "edgedel/error.hpp"

namespace edgedel {

using Instantiation = std::map<VarId, std::size_t>;

struct MapResult {
  Instantiation assignment;
  std::optional<double> value_in_approximation;  // Pr'(m, e')
  double p = 0.0;                                // Pr(m, e) in the original network
  std::optional<double> q;                       // Pr(m*, e); absent when exact MAP is out of reach
  std::optional<double> ratio;                   // p / q when q > 0
  bool q_zero = false;
};

// Exact MAP on N' conditioned on e'. Auxiliary variables may not be MAP variables.
inline Instantiation approximate_map(const Approximation& ap, std::span<const VarId> map_vars, std::size_t width_cap = 25) {
  for (auto v : map_vars)
    if (v >= ap.network.size() || ap.network.is_auxiliary(v))
      throw InvalidArgument("MAP variables must belong to the original network");
  const auto st = compile(ap.network, ap.evidence, {.width_cap = width_cap, .fixed_order = {}});
  return exact_map(st, map_vars, width_cap).assignment;
}

// Pr(m, e) evaluated in `net`; zero when m contradicts e.
inline double joint_probability(const Network& net, const Evidence& ev, const Instantiation& m, std::size_t width_cap = 25) {
  Evidence joint = ev;
  for (const auto& [v, s] : m) {
    if (auto o = ev.get(v); o && *o != s) return 0.0;
    joint.set(v, s);
  }
  return compile(net, joint, {.width_cap = width_cap, .fixed_order = {}}).probability_of_evidence();
}

// Scores an instantiation in the original network against the exact MAP.
inline MapResult map_quality(const Network& net, const Evidence& ev, const Instantiation& m,
                             std::span<const VarId> map_vars, std::size_t width_cap = 25) {
  MapResult r;
  r.assignment = m;
  r.p = joint_probability(net, ev, m, width_cap);
  try {
    const auto best = exact_map(compile(net, ev, {.width_cap = width_cap, .fixed_order = {}}), map_vars, width_cap);
    r.q = best.value;
  } catch (const CapacityError&) {
    return r;
  }
  if (*r.q > 0.0) {
    // p and q come from different elimination routes; equal values may
    // differ in the last bits.
    if (r.p > *r.q * (1.0 + 1e-9)) throw NumericalError("map_quality: Pr(m, e) exceeds the exact MAP value");
    r.ratio = std::min(1.0, r.p / *r.q);
  } else
    r.q_zero = true;
  return r;
}

}  // namespace edgedel
