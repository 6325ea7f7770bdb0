#include <gtest/gtest.h>

#include <cmath>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace edgedel;

namespace {
Approximation random_approximation(Rng& rng, Network& net, Evidence& ev, std::size_t n, std::size_t k) {
  net = random_network(rng, n);
  ev = fixtures::random_evidence(net, rng);
  const auto edges = fixtures::random_edges(net, rng, k);
  DeletionPlan plan;
  for (const auto& e : edges) plan.entries.push_back({e, fixtures::random_params(rng, net.cardinality(e.parent))});
  return delete_edges(augment(net, edges), plan, ev);
}
}  // namespace

TEST(Divergence, EdgeTermConventions) {
  const double p[] = {0.5, 0.5, 0.0};
  const double pm[] = {0.5, 0.5, 0.0};
  const double se[] = {1.0, 1.0, 1.0};
  EXPECT_NEAR(edge_kl_term(p, pm, se), std::log(2.0), 1e-15);
  const double pm0[] = {1.0, 0.0, 0.0};
  EXPECT_TRUE(std::isinf(edge_kl_term(p, pm0, se)));
}

TEST(Divergence, BoundEqualsEnumeratedKlOverAugmentedVariables) {
  Rng rng(41);
  for (int t = 0; t < 15; ++t) {
    Network net;
    Evidence ev;
    const auto ap = random_approximation(rng, net, ev, 6, 1 + rng.below(3));
    Network aug = augment(net, ap.plan.edges());
    const auto kb = kl_bound(aug, ap, ev);
    const double ref = oracle::kl_full(aug, ev, ap.network, ap.evidence);
    EXPECT_NEAR(kb.total, ref, 1e-9);
    const double ex = exact_kl(aug, ap, ev);
    EXPECT_NEAR(ex, oracle::kl_marginal(aug, ev, ap.network, ap.evidence, [&] {
                  std::vector<VarId> xs;
                  for (VarId v = 0; v < net.size(); ++v)
                    if (!ev.contains(v)) xs.push_back(v);
                  return xs;
                }()),
                1e-10);
    EXPECT_LE(ex, kb.total + 1e-9);
  }
}

TEST(Divergence, CounterexampleValues) {
  const auto c = fixtures::counterexample();
  const Edge e[] = {{c.u1, c.x1}};
  const auto aug = augment(c.net, e);
  const auto uni = delete_edges(aug, plan_for(c.net, e), c.ev);
  EXPECT_NEAR(kl_bound(aug, uni, c.ev).total, 0.0, 1e-12);
  EXPECT_NEAR(exact_kl(aug, uni, c.ev), 0.0, 1e-12);
  const auto skew = delete_edges(aug, DeletionPlan{{{e[0], {{0.7, 0.3}, {0.5, 0.5}}}}}, c.ev);
  // Parent, clone and U2 agree in every world of both posteriors, so the
  // bound and the exact value coincide: 0.5 log(0.5/0.7) + 0.5 log(0.5/0.3).
  const double expected = 0.5 * std::log(0.25 / 0.21);
  EXPECT_NEAR(kl_bound(aug, skew, c.ev).total, expected, 1e-12);
  EXPECT_NEAR(exact_kl(aug, skew, c.ev), expected, 1e-12);
  EXPECT_NEAR(exact_kl(aug, skew, c.ev), oracle::kl_marginal(aug, c.ev, skew.network, skew.evidence, {0, 1}), 1e-12);
}

TEST(Divergence, EmptyPlanHasZeroDivergence) {
  Rng rng(2);
  const auto net = random_network(rng, 5);
  const auto ev = fixtures::random_evidence(net, rng);
  const auto ap = delete_edges(net, {}, ev);
  EXPECT_NEAR(kl_bound(net, ap, ev).total, 0.0, 1e-12);
  EXPECT_NEAR(exact_kl(net, ap, ev), 0.0, 1e-12);
}

TEST(Divergence, ImpossibleEvidenceRejected) {
  auto c = fixtures::counterexample();
  c.ev.set(c.u1, 0);
  c.ev.set(c.u2, 1);
  EXPECT_THROW(kl_bound(c.net, delete_edges(c.net, {}, c.ev), c.ev), InconsistentEvidence);
}

TEST(Divergence, SingleEdgeEvaluationMatchesCompilation) {
  Rng rng(77);
  for (int t = 0; t < 20; ++t) {
    const auto net = random_network(rng, 6);
    const auto ev = fixtures::random_evidence(net, rng);
    const auto edges = fixtures::random_edges(net, rng, 1);
    if (edges.empty()) continue;
    const auto aug = augment(net, edges);
    const auto st = compile(aug, ev);
    const auto d = cpt_derivatives(st, aug.aux_edges[0].clone);
    const auto params = fixtures::random_params(rng, net.cardinality(edges[0].parent));
    const auto q = single_edge_evaluate(d, params);
    const auto ap = delete_edges(aug, DeletionPlan{{{edges[0], params}}}, ev);
    const auto st2 = compile(ap.network, ap.evidence);
    EXPECT_LE(oracle::rel_err(q.pr_e, st2.probability_of_evidence()), 1e-10);
    const auto dpm = cpt_derivatives(st2, ap.link(0).clone).table;
    const auto dse = cpt_derivatives(st2, *ap.link(0).soft_evidence).table;
    double euler = 0.0;
    for (std::size_t u = 0; u < dpm.size(); ++u) {
      EXPECT_LE(oracle::rel_err(q.d_pm[u], dpm[u]), 1e-10);
      EXPECT_LE(oracle::rel_err(q.d_se[u], dse[2 * u]), 1e-10);
      euler += params.pm[u] * q.d_pm[u];
    }
    EXPECT_LE(oracle::rel_err(euler, q.pr_e), 1e-12);
  }
}

TEST(Divergence, CounterexampleEdgeScoresZeroWithUniformParameters) {
  const auto c = fixtures::counterexample();
  const auto scores = score_edges(c.net, c.ev);
  ASSERT_EQ(scores.size(), 4u);
  bool found = false;
  for (const auto& s : scores)
    if (s.edge == Edge{c.u1, c.x1}) {
      found = true;
      EXPECT_NEAR(s.score, 0.0, 1e-12);
      EXPECT_NEAR(s.params.pm[0], 0.5, 1e-12);
      EXPECT_NEAR(s.params.se[0], 0.5, 1e-12);
    }
  EXPECT_TRUE(found);
}

// Cutting a bridge leaves the clone independent of its parent, so the best
// bound is the entropy of the parent posterior; zero when the parent is observed.
TEST(Divergence, BridgeEdgeScoreIsParentEntropy) {
  Rng rng(90);
  for (int t = 0; t < 6; ++t) {
    const auto b = fixtures::bridge(rng, 4, 4);
    auto ev = fixtures::random_evidence(b.net, rng, 0.4);
    if (t % 2 == 1) ev.set(b.bridge.parent, forward_sample(b.net, rng)[b.bridge.parent]);
    if (oracle::pr_evidence(b.net, ev) == 0.0) continue;
    double h = 0.0;
    for (double p : oracle::marginal(b.net, ev, b.bridge.parent))
      if (p > 0.0) h -= p * std::log(p);
    bool seen = false;
    for (const auto& s : score_edges(b.net, ev)) {
      if (!(s.edge == b.bridge)) continue;
      seen = true;
      EXPECT_TRUE(s.converged);
      EXPECT_NEAR(s.score, h, 1e-8);
    }
    EXPECT_TRUE(seen);
  }
}

TEST(Divergence, ScoresAreSortedAndStationary) {
  Rng rng(55);
  const auto net = random_network(rng, 7);
  const auto ev = fixtures::random_evidence(net, rng);
  const auto scores = score_edges(net, ev);
  for (std::size_t i = 1; i < scores.size(); ++i) EXPECT_LE(scores[i - 1].score, scores[i].score);
  for (const auto& s : scores) {
    EXPECT_GE(s.score, -1e-12);
    if (s.converged) {
      EXPECT_LE(s.stationarity_gap, 1e-8);
    }
  }
}

TEST(Divergence, MutualInformationMatchesEnumeration) {
  Rng rng(66);
  const auto net = random_network(rng, 6);
  const auto ev = fixtures::random_evidence(net, rng);
  for (const auto& r : mutual_information_scores(net, ev)) {
    const auto j = oracle::pairwise(net, ev, r.edge.parent, r.edge.child);
    const auto pu = oracle::marginal(net, ev, r.edge.parent);
    const auto px = oracle::marginal(net, ev, r.edge.child);
    double mi = 0.0;
    for (std::size_t a = 0; a < pu.size(); ++a)
      for (std::size_t b = 0; b < px.size(); ++b) {
        const double p = j[a * px.size() + b];
        if (p > 0) mi += p * std::log(p / (pu[a] * px[b]));
      }
    EXPECT_NEAR(r.value, std::max(mi, 0.0), 1e-9);
  }
}

TEST(Divergence, MutualInformationOrdersIndependentFirstCopyLast) {
  Network n;
  const auto a = n.add_variable("A", {"0", "1"});
  const auto b = n.add_variable("B", {"0", "1"});
  const auto c = n.add_variable("C", {"0", "1"});
  n.cpts[a].table = {0.3, 0.7};
  n.cpts[b].parents = {a};
  n.cpts[b].table = {0.4, 0.6, 0.4, 0.6};  // independent of A
  n.cpts[c].parents = {a};
  n.cpts[c].table = {1, 0, 0, 1};  // copy of A
  const auto r = mutual_information_scores(n, {});
  EXPECT_EQ(r.front().edge, (Edge{a, b}));
  EXPECT_NEAR(r.front().value, 0.0, 1e-15);
  EXPECT_EQ(r.back().edge, (Edge{a, c}));
}
