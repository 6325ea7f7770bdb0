#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "edgedel/factor.hpp"
#include "edgedel/model.hpp"

namespace edgedel {

struct EliminationOrder {
  std::vector<VarId> order;
  std::size_t induced_width = 0;  // max clique size - 1 while triangulating
};

// Undirected graph over variable ids as an adjacency matrix.
class InteractionGraph {
 public:
  explicit InteractionGraph(std::size_t n) : n_(n), adj_(n * n, 0), alive_(n, 1) {}

  static InteractionGraph from_scopes(std::size_t n, std::span<const std::vector<VarId>> scopes) {
    InteractionGraph g(n);
    for (const auto& s : scopes) g.make_clique(s);
    return g;
  }

  // Moral graph: each family (child plus parents) becomes a clique.
  static InteractionGraph moral(const Network& net) {
    InteractionGraph g(net.size());
    for (const auto& c : net.cpts) {
      std::vector<VarId> fam = c.parents;
      fam.push_back(c.child);
      g.make_clique(fam);
    }
    return g;
  }

  std::size_t size() const noexcept { return n_; }
  bool adjacent(VarId a, VarId b) const { return adj_[a * n_ + b] != 0; }
  bool alive(VarId v) const { return alive_[v] != 0; }

  void connect(VarId a, VarId b) {
    if (a == b) return;
    adj_[a * n_ + b] = 1;
    adj_[b * n_ + a] = 1;
  }

  void make_clique(std::span<const VarId> vs) {
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = i + 1; j < vs.size(); ++j) connect(vs[i], vs[j]);
  }

  std::vector<VarId> neighbors(VarId v) const {
    std::vector<VarId> out;
    for (VarId u = 0; u < n_; ++u)
      if (alive_[u] && adjacent(v, u)) out.push_back(u);
    return out;
  }

  std::size_t fill_in(VarId v) const {
    const auto nb = neighbors(v);
    std::size_t fill = 0;
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        if (!adjacent(nb[i], nb[j])) ++fill;
    return fill;
  }

  // Connects v's live neighbours, removes v, and returns their count.
  std::size_t eliminate(VarId v) {
    const auto nb = neighbors(v);
    make_clique(nb);
    alive_[v] = 0;
    return nb.size();
  }

 private:
  std::size_t n_;
  std::vector<char> adj_;
  std::vector<char> alive_;
};

// Greedy min-fill over `candidates`, updating `g` in place. Ties go to the
// lowest variable id. Returns the width reached during this phase.
inline std::size_t min_fill_phase(InteractionGraph& g, std::vector<VarId> candidates, std::vector<VarId>& order) {
  std::sort(candidates.begin(), candidates.end());
  std::size_t width = 0;
  while (!candidates.empty()) {
    std::size_t best = 0;
    std::size_t best_fill = static_cast<std::size_t>(-1);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const std::size_t f = g.fill_in(candidates[i]);
      if (f < best_fill) {
        best_fill = f;
        best = i;
        if (f == 0) break;
      }
    }
    const VarId v = candidates[best];
    width = std::max(width, g.eliminate(v));
    order.push_back(v);
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return width;
}

inline EliminationOrder min_fill_order(const Network& net, std::span<const VarId> query = {}) {
  auto g = InteractionGraph::moral(net);
  std::vector<VarId> cand;
  for (VarId v = 0; v < net.size(); ++v)
    if (std::find(query.begin(), query.end(), v) == query.end()) cand.push_back(v);
  EliminationOrder out;
  out.induced_width = min_fill_phase(g, std::move(cand), out.order);
  return out;
}

// Eliminates every non-MAP variable before any MAP variable. The width is
// the constrained-treewidth estimate.
inline EliminationOrder constrained_order(const Network& net, std::span<const VarId> map_vars) {
  auto g = InteractionGraph::moral(net);
  std::vector<VarId> first, last;
  for (VarId v = 0; v < net.size(); ++v) {
    if (std::find(map_vars.begin(), map_vars.end(), v) == map_vars.end())
      first.push_back(v);
    else
      last.push_back(v);
  }
  EliminationOrder out;
  const std::size_t w1 = min_fill_phase(g, std::move(first), out.order);
  const std::size_t w2 = min_fill_phase(g, std::move(last), out.order);
  out.induced_width = std::max(w1, w2);
  return out;
}

// Width induced by eliminating `order` (in sequence) from the moral graph.
inline std::size_t induced_width(const Network& net, std::span<const VarId> order) {
  auto g = InteractionGraph::moral(net);
  std::size_t w = 0;
  for (auto v : order) w = std::max(w, g.eliminate(v));
  return w;
}

}  // namespace edgedel
