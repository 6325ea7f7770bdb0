#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "edgedel/error.hpp"
#include "edgedel/factor.hpp"

namespace edgedel {

struct Variable {
  std::string name;
  std::vector<std::string> states;

  std::size_t cardinality() const noexcept { return states.size(); }

  std::optional<std::size_t> state_index(const std::string& label) const {
    auto it = std::find(states.begin(), states.end(), label);
    if (it == states.end()) return std::nullopt;
    return static_cast<std::size_t>(it - states.begin());
  }
};

// theta_{child | parents}. Entries run lexicographically over
// (parents..., child): first parent most significant, child fastest.
struct Cpt {
  VarId child = 0;
  std::vector<VarId> parents;
  std::vector<double> table;

  friend bool operator==(const Cpt&, const Cpt&) = default;
};

enum class NetworkKind { original, augmented, approximate };

inline const char* to_string(NetworkKind k) {
  switch (k) {
    case NetworkKind::original: return "original";
    case NetworkKind::augmented: return "augmented";
    case NetworkKind::approximate: return "approximate";
  }
  return "?";
}

// An edge parent -> child of the original network that was routed through a
// clone (parent -> clone -> child). In an approximate network the
// parent -> clone link is gone and `soft_evidence` names the observed child
// added under `parent`.
struct AuxEdge {
  VarId parent = 0;
  VarId clone = 0;
  VarId child = 0;
  std::optional<VarId> soft_evidence;

  bool deleted() const noexcept { return soft_evidence.has_value(); }
  friend bool operator==(const AuxEdge&, const AuxEdge&) = default;
};

// A discrete Bayesian network. `cpts[i]` is the CPT of `variables[i]`.
// Treated as immutable once built; transformations return fresh copies.
struct Network {
  std::vector<Variable> variables;
  std::vector<Cpt> cpts;
  NetworkKind kind = NetworkKind::original;
  std::vector<AuxEdge> aux_edges;

  std::size_t size() const noexcept { return variables.size(); }
  std::size_t cardinality(VarId v) const { return variables.at(v).cardinality(); }
  const Cpt& cpt(VarId v) const { return cpts.at(v); }

  std::optional<VarId> find(const std::string& name) const {
    for (VarId i = 0; i < variables.size(); ++i)
      if (variables[i].name == name) return i;
    return std::nullopt;
  }

  VarId id(const std::string& name) const {
    auto v = find(name);
    if (!v) throw SemanticError("unknown variable '" + name + "'");
    return *v;
  }

  VarId add_variable(std::string name, std::vector<std::string> states) {
    const VarId id = variables.size();
    variables.push_back({std::move(name), std::move(states)});
    cpts.push_back({id, {}, {}});
    return id;
  }

  std::vector<VarId> children(VarId v) const {
    std::vector<VarId> out;
    for (const auto& c : cpts)
      if (std::find(c.parents.begin(), c.parents.end(), v) != c.parents.end()) out.push_back(c.child);
    return out;
  }

  // Every edge parent -> child, ordered by child then by parent position.
  std::vector<std::pair<VarId, VarId>> edges() const {
    std::vector<std::pair<VarId, VarId>> out;
    for (const auto& c : cpts)
      for (auto p : c.parents) out.emplace_back(p, c.child);
    return out;
  }

  bool is_clone(VarId v) const {
    return std::any_of(aux_edges.begin(), aux_edges.end(), [v](const AuxEdge& a) { return a.clone == v; });
  }
  bool is_soft_evidence(VarId v) const {
    return std::any_of(aux_edges.begin(), aux_edges.end(),
                       [v](const AuxEdge& a) { return a.soft_evidence && *a.soft_evidence == v; });
  }
  bool is_auxiliary(VarId v) const { return is_clone(v) || is_soft_evidence(v); }

  // Variables of the original network (clones and soft-evidence nodes excluded).
  std::vector<VarId> original_variables() const {
    std::vector<VarId> out;
    for (VarId v = 0; v < size(); ++v)
      if (!is_auxiliary(v)) out.push_back(v);
    return out;
  }

  // CPT as a factor over (parents..., child).
  Factor cpt_factor(VarId v) const {
    const Cpt& c = cpt(v);
    std::vector<VarId> scope = c.parents;
    scope.push_back(v);
    std::vector<std::size_t> cards;
    for (auto u : scope) cards.push_back(cardinality(u));
    return Factor(std::move(scope), std::move(cards), c.table);
  }
};

inline bool structurally_equal(const Network& a, const Network& b) {
  if (a.kind != b.kind || a.size() != b.size() || a.aux_edges != b.aux_edges) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.variables[i].name != b.variables[i].name || a.variables[i].states != b.variables[i].states) return false;
    if (!(a.cpts[i] == b.cpts[i])) return false;
  }
  return true;
}

// Observed states keyed by variable id.
class Evidence {
 public:
  Evidence() = default;
  Evidence(std::initializer_list<std::pair<const VarId, std::size_t>> init) : map_(init) {}

  void set(VarId v, std::size_t state) { map_[v] = state; }
  void erase(VarId v) { map_.erase(v); }
  bool contains(VarId v) const { return map_.count(v) != 0; }
  std::optional<std::size_t> get(VarId v) const {
    auto it = map_.find(v);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t size() const noexcept { return map_.size(); }
  bool empty() const noexcept { return map_.empty(); }
  auto begin() const { return map_.begin(); }
  auto end() const { return map_.end(); }

  friend bool operator==(const Evidence&, const Evidence&) = default;

 private:
  std::map<VarId, std::size_t> map_;
};

inline void check_evidence(const Network& net, const Evidence& ev) {
  for (const auto& [v, s] : ev) {
    if (v >= net.size()) throw SemanticError("evidence on unknown variable id " + std::to_string(v));
    if (s >= net.cardinality(v))
      throw SemanticError("evidence state " + std::to_string(s) + " out of range for '" + net.variables[v].name + "'");
  }
}

struct Violation {
  std::string variable;
  std::string rule;
  std::string detail;
};

inline constexpr double kNormalizationTolerance = 1e-9;

// Checks every structural and numerical invariant; returns the violations found.
inline std::vector<Violation> validate_network(const Network& net) {
  std::vector<Violation> out;
  auto name_of = [&](VarId v) { return v < net.size() ? net.variables[v].name : "#" + std::to_string(v); };

  for (VarId i = 0; i < net.size(); ++i) {
    const auto& var = net.variables[i];
    for (VarId j = 0; j < i; ++j)
      if (net.variables[j].name == var.name) out.push_back({var.name, "unique-name", "name declared twice"});
    if (var.cardinality() < 2) out.push_back({var.name, "cardinality", "fewer than two states"});
    for (std::size_t a = 0; a < var.states.size(); ++a)
      for (std::size_t b = a + 1; b < var.states.size(); ++b)
        if (var.states[a] == var.states[b])
          out.push_back({var.name, "unique-states", "state '" + var.states[a] + "' repeated"});
  }
  if (net.cpts.size() != net.size()) {
    out.push_back({"", "cpt-count", "expected one CPT per variable"});
    return out;
  }

  bool structure_ok = true;
  for (VarId i = 0; i < net.size(); ++i) {
    const Cpt& c = net.cpts[i];
    const auto& name = net.variables[i].name;
    if (c.child != i) {
      out.push_back({name, "cpt-child", "CPT slot does not describe this variable"});
      structure_ok = false;
      continue;
    }
    bool parents_ok = true;
    for (std::size_t k = 0; k < c.parents.size(); ++k) {
      if (c.parents[k] >= net.size()) {
        out.push_back({name, "parent-unknown", "parent id " + std::to_string(c.parents[k])});
        parents_ok = false;
      } else if (c.parents[k] == i) {
        out.push_back({name, "self-parent", "variable lists itself as parent"});
        parents_ok = false;
      }
      for (std::size_t m = 0; m < k; ++m)
        if (c.parents[m] == c.parents[k]) {
          out.push_back({name, "duplicate-parent", "parent '" + name_of(c.parents[k]) + "' listed twice"});
          parents_ok = false;
        }
    }
    if (!parents_ok) {
      structure_ok = false;
      continue;
    }
    std::size_t rows = 1;
    for (auto p : c.parents) rows *= net.cardinality(p);
    const std::size_t card = net.cardinality(i);
    if (c.table.size() != rows * card) {
      out.push_back({name, "table-length",
                     "has " + std::to_string(c.table.size()) + " entries, expected " + std::to_string(rows * card)});
      continue;
    }
    bool range_ok = true;
    for (double x : c.table)
      if (!(x >= 0.0 && x <= 1.0)) range_ok = false;
    if (!range_ok) out.push_back({name, "range", "entry outside [0,1]"});
    for (std::size_t r = 0; r < rows; ++r) {
      double s = 0.0;
      for (std::size_t x = 0; x < card; ++x) s += c.table[r * card + x];
      if (std::abs(s - 1.0) > kNormalizationTolerance) {
        out.push_back({name, "normalization", "row " + std::to_string(r) + " sums to " + std::to_string(s)});
        break;
      }
    }
  }

  if (structure_ok) {
    // Kahn's algorithm; leftover nodes lie on or below a cycle.
    std::vector<std::size_t> indeg(net.size(), 0);
    for (const auto& c : net.cpts) indeg[c.child] = c.parents.size();
    std::vector<VarId> ready;
    for (VarId v = 0; v < net.size(); ++v)
      if (indeg[v] == 0) ready.push_back(v);
    std::size_t seen = 0;
    auto kids = std::vector<std::vector<VarId>>(net.size());
    for (const auto& c : net.cpts)
      for (auto p : c.parents) kids[p].push_back(c.child);
    while (!ready.empty()) {
      VarId v = ready.back();
      ready.pop_back();
      ++seen;
      for (auto k : kids[v])
        if (--indeg[k] == 0) ready.push_back(k);
    }
    if (seen != net.size()) {
      VarId first = 0;
      while (indeg[first] == 0) ++first;
      out.push_back({net.variables[first].name, "acyclic", "variable lies on a directed cycle"});
    }
  }

  for (std::size_t k = 0; k < net.aux_edges.size(); ++k) {
    const auto& a = net.aux_edges[k];
    if (a.parent >= net.size() || a.clone >= net.size() || a.child >= net.size() ||
        (a.soft_evidence && *a.soft_evidence >= net.size())) {
      out.push_back({"", "aux-edge", "link " + std::to_string(k) + " references an unknown variable"});
      continue;
    }
    const auto& cname = net.variables[a.clone].name;
    if (net.variables[a.clone].states != net.variables[a.parent].states)
      out.push_back({cname, "clone-states", "clone states differ from its parent"});
    const auto& ccpt = net.cpts[a.clone];
    if (!a.deleted()) {
      bool eq = ccpt.parents == std::vector<VarId>{a.parent} && ccpt.child == a.clone;
      const std::size_t n = net.cardinality(a.parent);
      if (eq && ccpt.table.size() == n * n)
        for (std::size_t u = 0; u < n; ++u)
          for (std::size_t v = 0; v < n; ++v)
            if (ccpt.table[u * n + v] != (u == v ? 1.0 : 0.0)) eq = false;
      if (!eq) out.push_back({cname, "equivalence", "clone CPT is not an exact equivalence constraint"});
    } else {
      if (!ccpt.parents.empty()) out.push_back({cname, "clone-root", "deleted-edge clone must be a root"});
      const auto& se = net.cpts[*a.soft_evidence];
      if (se.parents != std::vector<VarId>{a.parent} || net.cardinality(*a.soft_evidence) != 2)
        out.push_back({net.variables[*a.soft_evidence].name, "soft-evidence", "must be a binary child of the parent"});
    }
    const auto& xp = net.cpts[a.child].parents;
    if (std::find(xp.begin(), xp.end(), a.clone) == xp.end())
      out.push_back({net.variables[a.child].name, "clone-child", "child does not list the clone as parent"});
  }
  return out;
}

inline void require_valid(const Network& net) {
  auto v = validate_network(net);
  if (!v.empty()) throw SemanticError("invalid network: " + v.front().variable + ": " + v.front().rule + " (" + v.front().detail + ")");
}

inline constexpr double kDefaultEnumerationCap = 16777216.0;  // 2^24

// Brute-force joint: a factor over all unobserved variables (declaration
// order) whose entry for world w is Pr(w, e). Summing it gives Pr(e).
inline Factor enumerate_joint(const Network& net, const Evidence& ev, double cap = kDefaultEnumerationCap) {
  check_evidence(net, ev);
  std::vector<VarId> free;
  std::vector<std::size_t> cards;
  double space = 1.0;
  for (VarId v = 0; v < net.size(); ++v) {
    if (ev.contains(v)) continue;
    free.push_back(v);
    cards.push_back(net.cardinality(v));
    space *= static_cast<double>(net.cardinality(v));
  }
  if (space > cap)
    throw CapacityError("enumeration needs " + std::to_string(static_cast<long double>(space)) + " worlds, cap is " +
                            std::to_string(static_cast<long double>(cap)),
                        space);
  std::vector<std::size_t> world(net.size(), 0);
  for (const auto& [v, s] : ev) world[v] = s;
  const std::size_t n = Factor::table_size(cards);
  std::vector<double> values(n);
  std::vector<std::size_t> counter(free.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < free.size(); ++k) world[free[k]] = counter[k];
    double p = 1.0;
    for (const auto& c : net.cpts) {
      std::size_t idx = 0;
      for (auto u : c.parents) idx = idx * net.cardinality(u) + world[u];
      idx = idx * net.cardinality(c.child) + world[c.child];
      p *= c.table[idx];
      if (p == 0.0) break;
    }
    values[i] = p;
    for (std::size_t d = free.size(); d-- > 0;) {
      if (++counter[d] < cards[d]) break;
      counter[d] = 0;
    }
  }
  return Factor(std::move(free), std::move(cards), std::move(values));
}

}  // namespace edgedel
