#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "edgedel/engine.hpp"
#include "edgedel/error.hpp"
#include "edgedel/model.hpp"

namespace edgedel {

// An edge parent -> child. In an augmented network the child may also be
// given as the clone standing between them.
struct Edge {
  VarId parent = 0;
  VarId child = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// PM(U') and SE(U) of one deleted edge.
struct EdgeParams {
  std::vector<double> pm;  // prior of the clone, sums to 1
  std::vector<double> se;  // soft-evidence column, entries in [0,1]

  static EdgeParams uniform(std::size_t card) {
    return {std::vector<double>(card, 1.0 / static_cast<double>(card)),
            std::vector<double>(card, 1.0 / static_cast<double>(card))};
  }
};

struct PlannedDeletion {
  Edge edge;
  EdgeParams params;
};

struct DeletionPlan {
  std::vector<PlannedDeletion> entries;

  std::size_t size() const noexcept { return entries.size(); }
  bool empty() const noexcept { return entries.empty(); }
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (const auto& e : entries) out.push_back(e.edge);
    return out;
  }
};

inline std::string clone_name(const Network& net, VarId u, std::size_t k) {
  return net.variables[u].name + "__clone" + std::to_string(k);
}
inline std::string soft_evidence_name(const Network& net, VarId u, std::size_t k) {
  return net.variables[u].name + "__se" + std::to_string(k);
}

// Replaces each edge U -> X with U -> U' -> X where U' copies U exactly.
// The distribution over the input variables is unchanged.
inline Network augment(const Network& net, std::span<const Edge> edges) {
  Network out = net;
  if (edges.empty()) return out;
  out.kind = NetworkKind::augmented;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (edges[i] == edges[j]) throw InvalidArgument("edge listed twice for augmentation");
    const auto [u, x] = edges[i];
    if (u >= net.size() || x >= net.size()) throw InvalidArgument("augment: edge references unknown variable");
    auto& parents = out.cpts[x].parents;
    auto it = std::find(parents.begin(), parents.end(), u);
    if (it == parents.end())
      throw InvalidArgument("augment: no edge " + net.variables[u].name + " -> " + net.variables[x].name);
    const std::size_t k = out.aux_edges.size();
    const std::string name = clone_name(out, u, k);
    if (out.find(name)) throw SemanticError("clone name '" + name + "' collides with an existing variable");
    const VarId clone = out.add_variable(name, net.variables[u].states);
    const std::size_t n = net.cardinality(u);
    Cpt& cc = out.cpts[clone];
    cc.parents = {u};
    cc.table.assign(n * n, 0.0);
    for (std::size_t s = 0; s < n; ++s) cc.table[s * n + s] = 1.0;
    // Reparent in place so the child's table layout is untouched.
    auto& xp = out.cpts[x].parents;
    *std::find(xp.begin(), xp.end(), u) = clone;
    out.aux_edges.push_back({u, clone, x, std::nullopt});
  }
  return out;
}

inline Network augment(const Network& net, const DeletionPlan& plan) {
  const auto e = plan.edges();
  return augment(net, e);
}

// N' together with the augmented evidence e' and the plan it realizes.
// `links[i]` indexes `network.aux_edges` for plan entry i.
struct Approximation {
  Network network;
  Evidence evidence;
  DeletionPlan plan;
  std::vector<std::size_t> links;

  const AuxEdge& link(std::size_t i) const { return network.aux_edges.at(links.at(i)); }
};

namespace detail {

inline EdgeParams sanitize(const EdgeParams& p, std::size_t card, const std::string& edge_name) {
  if (p.pm.size() != card || p.se.size() != card)
    throw InvalidArgument("edge " + edge_name + ": parameter vectors must have " + std::to_string(card) + " entries");
  EdgeParams out = p;
  double pm_sum = 0.0;
  for (double x : out.pm) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidArgument("edge " + edge_name + ": PM entry not a probability");
    pm_sum += x;
  }
  if (std::abs(pm_sum - 1.0) > 1e-9) throw InvalidArgument("edge " + edge_name + ": PM does not sum to 1");
  for (auto& x : out.pm) x /= pm_sum;
  bool any = false;
  for (auto& x : out.se) {
    if (!(x >= 0.0) || std::isnan(x)) throw InvalidArgument("edge " + edge_name + ": SE entry negative");
    x = std::min(x, 1.0);
    any |= x > 0.0;
  }
  if (!any) throw InvalidArgument("edge " + edge_name + ": SE is all zero");
  return out;
}

inline void write_params(Network& net, const AuxEdge& link, const EdgeParams& p) {
  net.cpts[link.clone].table = p.pm;
  auto& se = net.cpts[*link.soft_evidence].table;
  se.resize(2 * p.se.size());
  for (std::size_t u = 0; u < p.se.size(); ++u) {
    se[2 * u] = p.se[u];
    se[2 * u + 1] = 1.0 - p.se[u];
  }
}

}  // namespace detail

inline std::string edge_label(const Network& net, const Edge& e) {
  return net.variables.at(e.parent).name + " -> " + net.variables.at(e.child).name;
}

// Deletes the equivalence edges named by the plan: each clone becomes a
// root with prior PM, and a binary observed child S' of the parent carries
// SE. The returned evidence is e plus every S' fixed to its first state.
inline Approximation delete_edges(const Network& augmented, const DeletionPlan& plan, const Evidence& ev) {
  check_evidence(augmented, ev);
  Approximation out;
  out.network = augmented;
  out.network.kind = NetworkKind::approximate;
  out.evidence = ev;
  out.plan = plan;
  std::vector<char> used(augmented.aux_edges.size(), 0);
  for (std::size_t i = 0; i < plan.entries.size(); ++i) {
    const Edge e = plan.entries[i].edge;
    std::size_t k = augmented.aux_edges.size();
    for (std::size_t j = 0; j < augmented.aux_edges.size(); ++j) {
      const auto& a = augmented.aux_edges[j];
      if (!a.deleted() && a.parent == e.parent && (a.child == e.child || a.clone == e.child)) {
        k = j;
        break;
      }
    }
    if (e.parent >= augmented.size() || e.child >= augmented.size() || k == augmented.aux_edges.size())
      throw InvalidArgument("plan edge is not an equivalence edge of the network");
    if (used[k]) throw InvalidArgument("plan deletes edge " + edge_label(augmented, e) + " twice");
    used[k] = 1;
    auto& link = out.network.aux_edges[k];
    const VarId u = link.parent;
    const auto params = detail::sanitize(plan.entries[i].params, augmented.cardinality(u), edge_label(augmented, e));
    out.plan.entries[i].params = params;
    const std::string sname = soft_evidence_name(out.network, u, k);
    if (out.network.find(sname)) throw SemanticError("soft-evidence name '" + sname + "' collides with a variable");
    const VarId s = out.network.add_variable(sname, {"observed", "unobserved"});
    out.network.cpts[s].parents = {u};
    out.network.cpts[link.clone].parents.clear();
    link.soft_evidence = s;
    detail::write_params(out.network, link, params);
    out.evidence.set(s, 0);
    out.links.push_back(k);
  }
  return out;
}

// Replaces the parameters of plan entry i in both the plan and N'.
inline void set_edge_params(Approximation& ap, std::size_t i, const EdgeParams& p) {
  const auto& link = ap.link(i);
  const auto clean = detail::sanitize(p, ap.network.cardinality(link.parent), edge_label(ap.network, ap.plan.entries[i].edge));
  ap.plan.entries[i].params = clean;
  detail::write_params(ap.network, link, clean);
}

// Posterior marginals Pr'(X | e') for every non-auxiliary variable of N'.
inline std::map<VarId, std::vector<double>> recover_marginals(const Approximation& ap, const EngineState& st) {
  std::map<VarId, std::vector<double>> out;
  for (auto v : ap.network.original_variables()) out[v] = posterior_marginal(st, v);
  return out;
}

}  // namespace edgedel
