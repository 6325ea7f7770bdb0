#pragma once
// Pearl's pi/lambda message passing on the original network, written from
// scratch against the raw CPT tables. Messages on "cut" edges are frozen
// during a sweep and refreshed together at its end; messages on all other
// edges are iterated until they stop changing. Used as an independent check
// of the edge-deletion parametrization on networks whose remaining edges
// form a forest.

#include <cmath>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "edgedel.hpp"

namespace oracle {

class PearlBp {
 public:
  using Vec = std::vector<double>;

  PearlBp(const edgedel::Network& net, const edgedel::Evidence& ev, std::vector<edgedel::Edge> cut)
      : net_(net), ev_(ev), cut_(std::move(cut)) {
    for (const auto& c : net_.cpts)
      for (auto p : c.parents) {
        pi_[{p, c.child}] = Vec(net_.cardinality(p), 1.0 / static_cast<double>(net_.cardinality(p)));
        lambda_[{c.child, p}] = Vec(net_.cardinality(p), 1.0 / static_cast<double>(net_.cardinality(p)));
      }
  }

  // One sweep: settle the uncut messages, then refresh every cut message
  // from the settled state.
  void sweep() {
    for (std::size_t round = 0; round < 4 * net_.size() + 4; ++round) {
      auto pi_next = pi_;
      auto lambda_next = lambda_;
      for (auto& [e, m] : pi_next)
        if (!is_cut(e.first, e.second)) m = pi_message(e.first, e.second);
      for (auto& [e, m] : lambda_next)
        if (!is_cut(e.second, e.first)) m = lambda_message(e.first, e.second);
      const bool same = close(pi_next, pi_) && close(lambda_next, lambda_);
      pi_ = std::move(pi_next);
      lambda_ = std::move(lambda_next);
      if (same) break;
    }
    std::vector<std::pair<edgedel::Edge, Vec>> new_pi, new_lambda;
    for (const auto& e : cut_) {
      new_pi.emplace_back(e, pi_message(e.parent, e.child));
      new_lambda.emplace_back(e, lambda_message(e.child, e.parent));
    }
    for (auto& [e, m] : new_pi) pi_[{e.parent, e.child}] = m;
    for (auto& [e, m] : new_lambda) lambda_[{e.child, e.parent}] = m;
  }

  // Normalized pi message parent -> child.
  Vec pi(const edgedel::Edge& e) const { return normalized(pi_.at({e.parent, e.child})); }
  // Normalized lambda message child -> parent.
  Vec lambda(const edgedel::Edge& e) const { return normalized(lambda_.at({e.child, e.parent})); }

 private:
  bool is_cut(edgedel::VarId parent, edgedel::VarId child) const {
    for (const auto& e : cut_)
      if (e.parent == parent && e.child == child) return true;
    return false;
  }

  double indicator(edgedel::VarId v, std::size_t s) const {
    auto o = ev_.get(v);
    return !o || *o == s ? 1.0 : 0.0;
  }

  // pi(x) = sum over parent states of P(x | pa) * prod of incoming pi messages.
  Vec pi_of(edgedel::VarId x) const {
    const auto& c = net_.cpts[x];
    const std::size_t card = net_.cardinality(x);
    Vec out(card, 0.0);
    const std::size_t rows = c.table.size() / card;
    for (std::size_t r = 0; r < rows; ++r) {
      double w = 1.0;
      std::size_t rem = r;
      for (std::size_t k = c.parents.size(); k-- > 0;) {
        const auto p = c.parents[k];
        const std::size_t n = net_.cardinality(p);
        w *= pi_.at({p, x})[rem % n];
        rem /= n;
      }
      for (std::size_t s = 0; s < card; ++s) out[s] += w * c.table[r * card + s];
    }
    return out;
  }

  // lambda(x) = evidence indicator times lambda messages from every child.
  Vec lambda_of(edgedel::VarId x, edgedel::VarId except_child = static_cast<edgedel::VarId>(-1)) const {
    Vec out(net_.cardinality(x));
    for (std::size_t s = 0; s < out.size(); ++s) out[s] = indicator(x, s);
    for (auto ch : net_.children(x)) {
      if (ch == except_child) continue;
      const auto& m = lambda_.at({ch, x});
      for (std::size_t s = 0; s < out.size(); ++s) out[s] *= m[s];
    }
    return out;
  }

  Vec pi_message(edgedel::VarId u, edgedel::VarId x) const {
    auto p = pi_of(u);
    const auto l = lambda_of(u, x);
    for (std::size_t s = 0; s < p.size(); ++s) p[s] *= l[s];
    return normalized(p);
  }

  // lambda message from child x to parent u.
  Vec lambda_message(edgedel::VarId x, edgedel::VarId u) const {
    const auto& c = net_.cpts[x];
    const std::size_t card = net_.cardinality(x);
    const auto lx = lambda_of(x);
    Vec out(net_.cardinality(u), 0.0);
    const std::size_t rows = c.table.size() / card;
    for (std::size_t r = 0; r < rows; ++r) {
      double w = 1.0;
      std::size_t rem = r;
      std::size_t u_state = 0;
      for (std::size_t k = c.parents.size(); k-- > 0;) {
        const auto p = c.parents[k];
        const std::size_t n = net_.cardinality(p);
        if (p == u)
          u_state = rem % n;
        else
          w *= pi_.at({p, x})[rem % n];
        rem /= n;
      }
      double acc = 0.0;
      for (std::size_t s = 0; s < card; ++s) acc += c.table[r * card + s] * lx[s];
      out[u_state] += w * acc;
    }
    return normalized(out);
  }

  static Vec normalized(Vec v) {
    double s = 0.0;
    for (double x : v) s += x;
    if (s > 0.0)
      for (auto& x : v) x /= s;
    return v;
  }

  static bool close(const std::map<std::pair<edgedel::VarId, edgedel::VarId>, Vec>& a,
                    const std::map<std::pair<edgedel::VarId, edgedel::VarId>, Vec>& b) {
    for (const auto& [k, v] : a) {
      const auto& w = b.at(k);
      for (std::size_t i = 0; i < v.size(); ++i)
        if (std::abs(v[i] - w[i]) > 1e-15) return false;
    }
    return true;
  }

  const edgedel::Network& net_;
  const edgedel::Evidence& ev_;
  std::vector<edgedel::Edge> cut_;
  std::map<std::pair<edgedel::VarId, edgedel::VarId>, Vec> pi_;
  std::map<std::pair<edgedel::VarId, edgedel::VarId>, Vec> lambda_;
};

}  // namespace oracle
