#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "edgedel/error.hpp"
#include "edgedel/model.hpp"

namespace edgedel {

// Seeded source for every random choice in the generators and the harness.
// Draws are derived from raw 64-bit words so results do not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n).
  std::size_t below(std::size_t n) {
    if (n == 0) throw InvalidArgument("Rng::below(0)");
    auto k = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
    return k < n ? k : n - 1;
  }

  std::uint64_t next() { return eng_(); }

  // Seed for an independent sub-stream.
  std::uint64_t fork() { return eng_() ^ 0x9e3779b97f4a7c15ULL; }

 private:
  std::mt19937_64 eng_;
};

// Uniform point on the probability simplex of dimension n.
inline std::vector<double> simplex(Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  double s = 0.0;
  for (auto& x : w) {
    x = -std::log1p(-rng.uniform01());
    s += x;
  }
  if (!(s > 0.0)) {
    for (auto& x : w) x = 1.0 / static_cast<double>(n);
    return w;
  }
  for (auto& x : w) x /= s;
  return w;
}

inline constexpr const char* kCptLaw = "simplex-v1";

inline std::vector<std::string> state_labels(std::size_t card) {
  std::vector<std::string> s;
  for (std::size_t i = 0; i < card; ++i) s.push_back("s" + std::to_string(i));
  return s;
}

// Refills one CPT (structure already set) from the simplex law.
inline void randomize_cpt(Network& net, VarId v, Rng& rng) {
  auto& c = net.cpts[v];
  std::size_t rows = 1;
  for (auto p : c.parents) rows *= net.cardinality(p);
  const std::size_t card = net.cardinality(v);
  c.table.clear();
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = simplex(rng, card);
    c.table.insert(c.table.end(), row.begin(), row.end());
  }
}

inline void randomize_cpts(Network& net, Rng& rng) {
  for (VarId v = 0; v < net.size(); ++v) randomize_cpt(net, v, rng);
}

struct SyntheticNetwork {
  Network network;
  std::vector<VarId> leaves;  // evidence targets
  std::string id;
};

// X0 -> X1 -> ... -> X{n-1}, binary.
inline SyntheticNetwork chain(std::size_t n, Rng& rng) {
  if (n == 0) throw InvalidArgument("chain length must be positive");
  SyntheticNetwork s;
  for (std::size_t i = 0; i < n; ++i) {
    const VarId v = s.network.add_variable("X" + std::to_string(i), state_labels(2));
    if (i > 0) s.network.cpts[v].parents = {v - 1};
  }
  randomize_cpts(s.network, rng);
  s.leaves = {n - 1};
  s.id = "chain(" + std::to_string(n) + ")@" + kCptLaw;
  return s;
}

// Binary r x c grid; node (i,j) has parents (i-1,j) and (i,j-1). Evidence
// targets are the last row and last column.
inline SyntheticNetwork grid(std::size_t rows, std::size_t cols, Rng& rng) {
  if (rows == 0 || cols == 0) throw InvalidArgument("grid dimensions must be positive");
  SyntheticNetwork s;
  auto at = [cols](std::size_t i, std::size_t j) { return i * cols + j; };
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const VarId v = s.network.add_variable("G" + std::to_string(i) + "_" + std::to_string(j), state_labels(2));
      if (i > 0) s.network.cpts[v].parents.push_back(at(i - 1, j));
      if (j > 0) s.network.cpts[v].parents.push_back(at(i, j - 1));
    }
  randomize_cpts(s.network, rng);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (i + 1 == rows || j + 1 == cols) s.leaves.push_back(at(i, j));
  s.id = "grid(" + std::to_string(rows) + "x" + std::to_string(cols) + ")@" + kCptLaw;
  return s;
}

// Variables with no children.
inline std::vector<VarId> leaves(const Network& net) {
  std::vector<char> has_child(net.size(), 0);
  for (const auto& c : net.cpts)
    for (auto p : c.parents) has_child[p] = 1;
  std::vector<VarId> out;
  for (VarId v = 0; v < net.size(); ++v)
    if (!has_child[v]) out.push_back(v);
  return out;
}

inline std::vector<VarId> roots(const Network& net) {
  std::vector<VarId> out;
  for (VarId v = 0; v < net.size(); ++v)
    if (net.cpts[v].parents.empty()) out.push_back(v);
  return out;
}

// Random DAG over n variables: each variable draws up to `max_parents`
// parents among earlier ones, cardinalities in [2, max_card].
inline Network random_network(Rng& rng, std::size_t n, std::size_t max_card = 3, std::size_t max_parents = 3,
                              double edge_prob = 0.5) {
  Network net;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t card = 2 + rng.below(max_card - 1);
    const VarId v = net.add_variable("V" + std::to_string(i), state_labels(card));
    for (VarId p = 0; p < v; ++p)
      if (net.cpts[v].parents.size() < max_parents && rng.uniform01() < edge_prob) net.cpts[v].parents.push_back(p);
  }
  randomize_cpts(net, rng);
  return net;
}

// Parents-before-children order (Kahn, smallest id first).
inline std::vector<VarId> topological_order(const Network& net) {
  std::vector<std::size_t> indeg(net.size(), 0);
  for (const auto& c : net.cpts) indeg[c.child] = c.parents.size();
  std::vector<VarId> out;
  std::vector<char> done(net.size(), 0);
  while (out.size() < net.size()) {
    bool progressed = false;
    for (VarId v = 0; v < net.size(); ++v) {
      if (done[v] || indeg[v] != 0) continue;
      done[v] = 1;
      out.push_back(v);
      for (auto c : net.children(v)) --indeg[c];
      progressed = true;
      break;
    }
    if (!progressed) throw SemanticError("network has a cycle");
  }
  return out;
}

// One ancestral sample of every variable.
inline std::vector<std::size_t> forward_sample(const Network& net, Rng& rng) {
  std::vector<std::size_t> x(net.size(), 0);
  for (auto v : topological_order(net)) {
    const auto& c = net.cpts[v];
    std::size_t row = 0;
    for (auto p : c.parents) row = row * net.cardinality(p) + x[p];
    const std::size_t card = net.cardinality(v);
    const double r = rng.uniform01();
    double acc = 0.0;
    std::size_t s = card - 1;
    for (std::size_t k = 0; k < card; ++k) {
      acc += c.table[row * card + k];
      if (r < acc) {
        s = k;
        break;
      }
    }
    x[v] = s;
  }
  return x;
}

enum class EvidenceMode { leaves_from_joint, random };

inline EvidenceMode parse_evidence_mode(const std::string& s) {
  if (s == "leaves-from-joint") return EvidenceMode::leaves_from_joint;
  if (s == "random") return EvidenceMode::random;
  throw InvalidArgument("unknown evidence mode '" + s + "'");
}

inline Evidence sample_evidence(const Network& net, const std::vector<VarId>& targets, EvidenceMode mode, Rng& rng) {
  Evidence ev;
  if (mode == EvidenceMode::leaves_from_joint) {
    const auto x = forward_sample(net, rng);
    for (auto v : targets) ev.set(v, x[v]);
  } else {
    for (auto v : targets) ev.set(v, rng.below(net.cardinality(v)));
  }
  return ev;
}

inline Evidence sample_evidence(const Network& net, EvidenceMode mode, std::uint64_t seed) {
  Rng rng(seed);
  return sample_evidence(net, leaves(net), mode, rng);
}

}  // namespace edgedel
