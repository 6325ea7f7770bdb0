#pragma once
// Brute-force reference computations used by the tests. Deliberately naive:
// every quantity is a sum over complete worlds, with no factor algebra.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "edgedel.hpp"

namespace oracle {

using edgedel::Evidence;
using edgedel::Network;
using edgedel::VarId;
using World = std::vector<std::size_t>;

inline std::size_t family_index(const Network& net, VarId v, const World& w) {
  const auto& c = net.cpts[v];
  std::size_t idx = 0;
  for (auto p : c.parents) idx = idx * net.cardinality(p) + w[p];
  return idx * net.cardinality(v) + w[v];
}

inline double world_prob(const Network& net, const World& w, std::ptrdiff_t skip = -1) {
  double p = 1.0;
  for (VarId v = 0; v < net.size(); ++v)
    if (static_cast<std::ptrdiff_t>(v) != skip) p *= net.cpts[v].table[family_index(net, v, w)];
  return p;
}

// Calls f on every world consistent with ev.
inline void for_each_world(const Network& net, const Evidence& ev, const std::function<void(const World&)>& f) {
  World w(net.size(), 0);
  for (const auto& [v, s] : ev) w[v] = s;
  std::function<void(VarId)> rec = [&](VarId v) {
    if (v == net.size()) {
      f(w);
      return;
    }
    if (ev.contains(v)) {
      rec(v + 1);
      return;
    }
    for (std::size_t s = 0; s < net.cardinality(v); ++s) {
      w[v] = s;
      rec(v + 1);
    }
  };
  rec(0);
}

inline double pr_evidence(const Network& net, const Evidence& ev) {
  double z = 0.0;
  for_each_world(net, ev, [&](const World& w) { z += world_prob(net, w); });
  return z;
}

inline std::vector<double> marginal(const Network& net, const Evidence& ev, VarId v) {
  std::vector<double> m(net.cardinality(v), 0.0);
  double z = 0.0;
  for_each_world(net, ev, [&](const World& w) {
    const double p = world_prob(net, w);
    m[w[v]] += p;
    z += p;
  });
  for (auto& x : m) x /= z;
  return m;
}

// Pr(a, b | e), row-major with b fastest.
inline std::vector<double> pairwise(const Network& net, const Evidence& ev, VarId a, VarId b) {
  const std::size_t nb = net.cardinality(b);
  std::vector<double> m(net.cardinality(a) * nb, 0.0);
  double z = 0.0;
  for_each_world(net, ev, [&](const World& w) {
    const double p = world_prob(net, w);
    m[w[a] * nb + w[b]] += p;
    z += p;
  });
  for (auto& x : m) x /= z;
  return m;
}

// dPr(e)/d theta for every entry of v's CPT: the sum over worlds matching
// both e and the family instantiation of all other CPT entries.
inline std::vector<double> indicator_derivative(const Network& net, const Evidence& ev, VarId v) {
  std::vector<double> d(net.cpts[v].table.size(), 0.0);
  for_each_world(net, ev, [&](const World& w) {
    d[family_index(net, v, w)] += world_prob(net, w, static_cast<std::ptrdiff_t>(v));
  });
  return d;
}

// Central difference of Pr(e) in one raw CPT entry (no renormalization).
inline double finite_difference(Network net, const Evidence& ev, VarId v, std::size_t entry, double h) {
  const double t = net.cpts[v].table[entry];
  net.cpts[v].table[entry] = t + h;
  const double up = pr_evidence(net, ev);
  net.cpts[v].table[entry] = t - h;
  const double down = pr_evidence(net, ev);
  return (up - down) / (2.0 * h);
}

// KL(P(.|e), Q(.|e')) over every variable of `p_net`. `q_net` must contain
// p_net's variables under the same ids, plus extra variables that are all
// observed in `q_ev`.
inline double kl_full(const Network& p_net, const Evidence& p_ev, const Network& q_net, const Evidence& q_ev) {
  const double zp = pr_evidence(p_net, p_ev);
  const double zq = pr_evidence(q_net, q_ev);
  double kl = 0.0;
  World wq(q_net.size(), 0);
  for (const auto& [v, s] : q_ev) wq[v] = s;
  bool inf = false;
  for_each_world(p_net, p_ev, [&](const World& w) {
    const double p = world_prob(p_net, w) / zp;
    if (p == 0.0) return;
    for (VarId v = 0; v < w.size(); ++v) wq[v] = w[v];
    for (const auto& [v, s] : q_ev)
      if (v < w.size() && w[v] != s) {
        inf = true;
        return;
      }
    const double q = world_prob(q_net, wq) / zq;
    if (q == 0.0) {
      inf = true;
      return;
    }
    kl += p * std::log(p / q);
  });
  return inf ? std::numeric_limits<double>::infinity() : kl;
}

// KL over the listed variables only, everything else summed out.
inline double kl_marginal(const Network& p_net, const Evidence& p_ev, const Network& q_net, const Evidence& q_ev,
                          const std::vector<VarId>& vars) {
  std::size_t n = 1;
  for (auto v : vars) n *= p_net.cardinality(v);
  auto table = [&](const Network& net, const Evidence& ev) {
    std::vector<double> t(n, 0.0);
    double z = 0.0;
    for_each_world(net, ev, [&](const World& w) {
      std::size_t idx = 0;
      for (auto v : vars) idx = idx * net.cardinality(v) + w[v];
      const double p = world_prob(net, w);
      t[idx] += p;
      z += p;
    });
    for (auto& x : t) x /= z;
    return t;
  };
  const auto p = table(p_net, p_ev);
  const auto q = table(q_net, q_ev);
  double kl = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
    kl += p[i] * std::log(p[i] / q[i]);
  }
  return kl;
}

// Exact MAP by enumeration: best Pr(m, e) over instantiations of vars.
inline double map_value(const Network& net, const Evidence& ev, const std::vector<VarId>& vars) {
  std::size_t n = 1;
  for (auto v : vars) n *= net.cardinality(v);
  std::vector<double> t(n, 0.0);
  for_each_world(net, ev, [&](const World& w) {
    std::size_t idx = 0;
    for (auto v : vars) idx = idx * net.cardinality(v) + w[v];
    t[idx] += world_prob(net, w);
  });
  double best = 0.0;
  for (double x : t) best = std::max(best, x);
  return best;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace oracle
