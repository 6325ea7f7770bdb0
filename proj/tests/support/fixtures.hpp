#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "edgedel.hpp"

namespace fixtures {

using namespace edgedel;

// Two uniform roots U1, U2; X1 and X2 both have parents (U1, U2) and are
// certain to take state 0 exactly when U1 == U2. Evidence X1 = X2 = 0.
struct Counterexample {
  Network net;
  Evidence ev;
  VarId u1, u2, x1, x2;
};

inline Counterexample counterexample() {
  Counterexample c;
  c.u1 = c.net.add_variable("U1", {"u", "notu"});
  c.u2 = c.net.add_variable("U2", {"u", "notu"});
  c.x1 = c.net.add_variable("X1", {"x", "notx"});
  c.x2 = c.net.add_variable("X2", {"x", "notx"});
  c.net.cpts[c.u1].table = {0.5, 0.5};
  c.net.cpts[c.u2].table = {0.5, 0.5};
  for (auto x : {c.x1, c.x2}) {
    c.net.cpts[x].parents = {c.u1, c.u2};
    c.net.cpts[x].table = {1, 0, 0, 1, 0, 1, 1, 0};
  }
  c.ev.set(c.x1, 0);
  c.ev.set(c.x2, 0);
  return c;
}

// Random evidence over a random subset of variables that keeps Pr(e) > 0
// (sampled from the joint).
inline Evidence random_evidence(const Network& net, Rng& rng, double p_observe = 0.3) {
  const auto w = forward_sample(net, rng);
  Evidence ev;
  for (VarId v = 0; v < net.size(); ++v)
    if (rng.uniform01() < p_observe) ev.set(v, w[v]);
  return ev;
}

// Random subset of k edges.
inline std::vector<Edge> random_edges(const Network& net, Rng& rng, std::size_t k) {
  auto all = all_edges(net);
  for (std::size_t i = all.size(); i > 1; --i) std::swap(all[i - 1], all[rng.below(i)]);
  all.resize(std::min(k, all.size()));
  return all;
}

inline EdgeParams random_params(Rng& rng, std::size_t card) {
  EdgeParams p;
  p.pm = simplex(rng, card);
  for (std::size_t i = 0; i < card; ++i) p.se.push_back(0.05 + 0.95 * rng.uniform01());
  return p;
}

// Two independent random components joined by a single edge from the
// first into the second.
struct Bridge {
  Network net;
  Edge bridge;
};

inline Bridge bridge(Rng& rng, std::size_t left, std::size_t right) {
  Bridge b;
  const Network a = random_network(rng, left, 3, 2, 0.6);
  const Network c = random_network(rng, right, 3, 2, 0.6);
  for (const auto& v : a.variables) b.net.add_variable("L" + v.name, v.states);
  for (const auto& v : c.variables) b.net.add_variable("R" + v.name, v.states);
  for (VarId v = 0; v < a.size(); ++v) {
    b.net.cpts[v].parents = a.cpts[v].parents;
    b.net.cpts[v].table = a.cpts[v].table;
  }
  for (VarId v = 0; v < c.size(); ++v) {
    auto& cp = b.net.cpts[left + v];
    for (auto p : c.cpts[v].parents) cp.parents.push_back(left + p);
    cp.table = c.cpts[v].table;
  }
  // Bridge: last left variable becomes an extra parent of the last right one.
  const VarId from = left - 1, to = left + right - 1;
  b.net.cpts[to].parents.push_back(from);
  randomize_cpt(b.net, to, rng);
  b.bridge = {from, to};
  return b;
}

}  // namespace fixtures
