#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "edgedel/deletion.hpp"
#include "edgedel/divergence.hpp"
#include "edgedel/engine.hpp"
#include "edgedel/error.hpp"
#include "edgedel/map.hpp"
#include "edgedel/model.hpp"
#include "edgedel/netio.hpp"
#include "edgedel/ordering.hpp"
#include "edgedel/parametrization.hpp"
#include "edgedel/synthetic.hpp"
#include "edgedel/tags.hpp"

namespace edgedel {

// ---------------------------------------------------------------------------
// Edge selection
// ---------------------------------------------------------------------------

inline std::vector<Edge> all_edges(const Network& net) {
  std::vector<Edge> out;
  for (auto [p, c] : net.edges()) out.push_back({p, c});
  return out;
}

// Every edge of `net`, in the order the strategy would delete them.
inline std::vector<Edge> rank_edges(const Network& net, const Evidence& ev, Selection sel, Rng& rng,
                                    std::size_t width_cap = 25) {
  switch (sel) {
    case Selection::rand: {
      auto edges = all_edges(net);
      for (std::size_t i = edges.size(); i > 1; --i) std::swap(edges[i - 1], edges[rng.below(i)]);
      return edges;
    }
    case Selection::guided: {
      std::vector<Edge> out;
      for (const auto& s : score_edges(net, ev, {.width_cap = width_cap})) out.push_back(s.edge);
      return out;
    }
    case Selection::mi: {
      std::vector<Edge> out;
      for (const auto& r : mutual_information_scores(net, ev)) out.push_back(r.edge);
      return out;
    }
  }
  return {};
}

inline std::vector<Edge> select_edges(const Network& net, const Evidence& ev, Selection sel, std::size_t k, Rng& rng,
                                      std::size_t width_cap = 25) {
  const std::size_t total = net.edges().size();
  if (k > total)
    throw InvalidArgument("cannot delete " + std::to_string(k) + " edges from a network with " + std::to_string(total));
  if (k == 0) return {};
  auto ranked = rank_edges(net, ev, sel, rng, width_cap);
  ranked.resize(k);
  return ranked;
}

// Default MAP variables: unobserved roots.
inline std::vector<VarId> default_map_vars(const Network& net, const Evidence& ev) {
  std::vector<VarId> out;
  for (auto v : roots(net))
    if (!ev.contains(v)) out.push_back(v);
  return out;
}

inline DeletionPlan plan_for(const Network& net, std::span<const Edge> edges) {
  DeletionPlan plan;
  for (const auto& e : edges) plan.entries.push_back({e, EdgeParams::uniform(net.cardinality(e.parent))});
  return plan;
}

// Constrained width of N' after deleting `edges`, MAP variables last.
inline std::size_t constrained_width_after(const Network& net, std::span<const Edge> edges,
                                           std::span<const VarId> map_vars) {
  const auto plan = plan_for(net, edges);
  const auto ap = delete_edges(augment(net, edges), plan, Evidence{});
  return constrained_order(ap.network, map_vars).induced_width;
}

// Smallest prefix of `ranked` whose deletion brings the constrained width to
// at most `w`. Throws when even deleting every edge is not enough.
inline std::vector<Edge> select_for_width(const Network& net, const std::vector<Edge>& ranked, std::size_t w,
                                          std::span<const VarId> map_vars) {
  std::vector<Edge> chosen;
  if (constrained_order(net, map_vars).induced_width <= w) return chosen;
  for (const auto& e : ranked) {
    chosen.push_back(e);
    if (constrained_width_after(net, chosen, map_vars) <= w) return chosen;
  }
  throw InvalidArgument("target width " + std::to_string(w) +
                        " is infeasible: deleting every edge leaves constrained width " +
                        std::to_string(constrained_width_after(net, chosen, map_vars)));
}

// ---------------------------------------------------------------------------
// Pipeline for one deletion set
// ---------------------------------------------------------------------------

struct PipelineResult {
  Network augmented;
  RunResult run;
  double kl_bound = 0.0;
  std::optional<double> exact_kl;
  std::size_t constrained_width = 0;
};

inline PipelineResult run_pipeline(const Network& net, const Evidence& ev, std::span<const Edge> edges,
                                   const IterationConfig& cfg, std::span<const VarId> map_vars, bool want_exact_kl) {
  PipelineResult out;
  out.augmented = augment(net, edges);
  out.run = run(out.augmented, ev, plan_for(net, edges), cfg);
  const auto& ap = out.run.approximation;
  const auto original = compile(out.augmented, ev, {.width_cap = cfg.width_cap, .fixed_order = {}});
  const auto approx = compile(ap.network, ap.evidence, {.width_cap = cfg.width_cap, .fixed_order = {}});
  out.kl_bound = kl_bound(original, approx, ap).total;
  if (want_exact_kl) {
    try {
      out.exact_kl = exact_kl(original, approx);
    } catch (const CapacityError&) {
    }
  }
  out.constrained_width = constrained_order(ap.network, map_vars).induced_width;
  return out;
}

// ---------------------------------------------------------------------------
// Experiment specification
//
// key = value lines, '#' comments:
//   network     = chain(8) | grid(4x4) | <path to a network file>
//   instances   = 50
//   evidence    = leaves-from-joint | random
//   k           = 0 1 2 4
//   methods     = ed-kl ed-bp
//   selections  = rand guided mi
//   seed        = 1
//   max_iters   = 200
//   tol         = 1e-8
//   damping     = 0
//   schedule    = sequential | simultaneous
//   exact_kl    = true | false
//   map         = true | false
//   timing      = true | false
// ---------------------------------------------------------------------------

struct ExperimentSpec {
  std::string network = "chain(8)";
  std::size_t instances = 50;
  EvidenceMode evidence = EvidenceMode::leaves_from_joint;
  std::vector<std::size_t> ks{0, 1, 2};
  std::vector<Method> methods{Method::ed_kl, Method::ed_bp};
  std::vector<Selection> selections{Selection::rand, Selection::guided};
  std::uint64_t seed = 1;
  std::size_t max_iters = 200;
  double tol = 1e-8;
  double damping = 0.0;
  Schedule schedule = Schedule::sequential;
  bool exact_kl = true;
  bool map = false;
  bool timing = false;
};

namespace exp_detail {

inline std::vector<std::string> words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InvalidArgument("key '" + key + "': expected true or false, found '" + v + "'");
}

template <class T>
T parse_num(const std::string& key, const std::string& v, std::size_t line) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ParseError("key '" + key + "': bad number '" + v + "'", line, 1);
  return out;
}

}  // namespace exp_detail

inline ExperimentSpec parse_experiment_spec(std::string_view text) {
  ExperimentSpec spec;
  std::istringstream is{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(is, raw)) {
    ++line;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    const auto eq = raw.find('=');
    const auto ws = exp_detail::words(raw);
    if (ws.empty()) continue;
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line, 1);
    const auto kw = exp_detail::words(raw.substr(0, eq));
    const auto vals = exp_detail::words(raw.substr(eq + 1));
    if (kw.size() != 1 || vals.empty()) throw ParseError("expected 'key = value'", line, 1);
    const std::string& key = kw[0];
    auto one = [&]() -> const std::string& {
      if (vals.size() != 1) throw ParseError("key '" + key + "' takes one value", line, eq + 2);
      return vals[0];
    };
    if (key == "network") {
      spec.network = one();
    } else if (key == "instances") {
      spec.instances = exp_detail::parse_num<std::size_t>(key, one(), line);
    } else if (key == "evidence") {
      spec.evidence = parse_evidence_mode(one());
    } else if (key == "k") {
      spec.ks.clear();
      for (const auto& v : vals) spec.ks.push_back(exp_detail::parse_num<std::size_t>(key, v, line));
    } else if (key == "methods") {
      spec.methods.clear();
      for (const auto& v : vals) spec.methods.push_back(parse_method(v));
    } else if (key == "selections") {
      spec.selections.clear();
      for (const auto& v : vals) spec.selections.push_back(parse_selection(v));
    } else if (key == "seed") {
      spec.seed = exp_detail::parse_num<std::uint64_t>(key, one(), line);
    } else if (key == "max_iters") {
      spec.max_iters = exp_detail::parse_num<std::size_t>(key, one(), line);
    } else if (key == "tol") {
      spec.tol = exp_detail::parse_num<double>(key, one(), line);
    } else if (key == "damping") {
      spec.damping = exp_detail::parse_num<double>(key, one(), line);
    } else if (key == "schedule") {
      spec.schedule = parse_schedule(one());
    } else if (key == "exact_kl") {
      spec.exact_kl = exp_detail::parse_bool(key, one());
    } else if (key == "map") {
      spec.map = exp_detail::parse_bool(key, one());
    } else if (key == "timing") {
      spec.timing = exp_detail::parse_bool(key, one());
    } else {
      throw ParseError("unknown key '" + key + "'", line, 1);
    }
  }
  if (spec.instances == 0) throw InvalidArgument("instances must be positive");
  if (spec.ks.empty() || spec.methods.empty() || spec.selections.empty())
    throw InvalidArgument("k, methods and selections must be non-empty");
  return spec;
}

// A network source: a synthetic generator or a file. Synthetic sources draw
// fresh CPTs per instance; a file network is shared by all instances.
class NetworkSource {
 public:
  explicit NetworkSource(const std::string& text) : text_(text) {
    static const std::regex chain_re(R"(chain\((\d+)\))");
    static const std::regex grid_re(R"(grid\((\d+)x(\d+)\))");
    std::smatch m;
    if (std::regex_match(text, m, chain_re)) {
      kind_ = Kind::chain;
      a_ = std::stoul(m[1]);
    } else if (std::regex_match(text, m, grid_re)) {
      kind_ = Kind::grid;
      a_ = std::stoul(m[1]);
      b_ = std::stoul(m[2]);
    } else {
      std::ifstream in(text);
      if (!in) throw InvalidArgument("cannot open network file '" + text + "'");
      std::stringstream ss;
      ss << in.rdbuf();
      file_.network = parse_network(ss.str());
      file_.leaves = leaves(file_.network);
      file_.id = text;
    }
  }

  SyntheticNetwork instance(Rng& rng) const {
    switch (kind_) {
      case Kind::chain: return chain(a_, rng);
      case Kind::grid: return grid(a_, b_, rng);
      case Kind::file: return file_;
    }
    return file_;
  }

 private:
  enum class Kind { chain, grid, file } kind_ = Kind::file;
  std::string text_;
  std::size_t a_ = 0, b_ = 0;
  SyntheticNetwork file_;
};

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Runs the full (instance, method, selection, k) matrix. Failed cells yield
// a row with converged = false and an infinite bound; the cause goes to `log`.
inline std::vector<ReportRow> run_experiment(const ExperimentSpec& spec, std::ostream* log = nullptr) {
  const NetworkSource source(spec.network);
  std::vector<ReportRow> rows;
  for (std::size_t inst = 0; inst < spec.instances; ++inst) {
    Rng net_rng(mix_seed(spec.seed, 2 * inst));
    Rng ev_rng(mix_seed(spec.seed, 2 * inst + 1));
    const auto sn = source.instance(net_rng);
    const auto ev = sample_evidence(sn.network, sn.leaves, spec.evidence, ev_rng);
    const auto map_vars = default_map_vars(sn.network, ev);
    for (auto method : spec.methods)
      for (auto sel : spec.selections)
        for (auto k : spec.ks) {
          ReportRow row;
          row.network_id = sn.id;
          row.instance_id = inst;
          row.method = method;
          row.selection = sel;
          row.edges_deleted = k;
          row.kl_bound = kInf;
          const auto t0 = std::chrono::steady_clock::now();
          try {
            // Same random edge order for every method at a given (instance, k).
            Rng sel_rng(mix_seed(mix_seed(spec.seed, inst), 1000 + k));
            const auto edges = select_edges(sn.network, ev, sel, k, sel_rng);
            IterationConfig cfg;
            cfg.method = method;
            cfg.max_iterations = spec.max_iters;
            cfg.tolerance = spec.tol;
            cfg.damping = spec.damping;
            cfg.schedule = spec.schedule;
            const auto res = run_pipeline(sn.network, ev, edges, cfg, map_vars, spec.exact_kl);
            row.iterations = res.run.report.iterations;
            row.converged = res.run.report.converged;
            row.kl_bound = std::max(res.kl_bound, 0.0);
            if (res.exact_kl) row.exact_kl = std::max(*res.exact_kl, 0.0);
            row.constrained_treewidth = res.constrained_width;
            if (spec.map && !map_vars.empty()) {
              const auto m = approximate_map(res.run.approximation, map_vars);
              const auto q = map_quality(sn.network, ev, m, map_vars);
              row.map_ratio = q.ratio;
            }
          } catch (const std::exception& e) {
            row = ReportRow{sn.id, inst, method, sel, k, 0, false, kInf, std::nullopt, std::nullopt, 0, 0};
            if (log)
              *log << "instance " << inst << " " << to_string(method) << "/" << to_string(sel) << " k=" << k << ": "
                   << e.what() << "\n";
          }
          if (spec.timing)
            row.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
                                   .count();
          rows.push_back(std::move(row));
        }
  }
  // Order-stable by (instance, method, selection, k).
  std::stable_sort(rows.begin(), rows.end(), [&](const ReportRow& a, const ReportRow& b) {
    auto mi = [&](Method m) { return std::find(spec.methods.begin(), spec.methods.end(), m) - spec.methods.begin(); };
    auto si = [&](Selection s) {
      return std::find(spec.selections.begin(), spec.selections.end(), s) - spec.selections.begin();
    };
    auto ki = [&](std::size_t k) { return std::find(spec.ks.begin(), spec.ks.end(), k) - spec.ks.begin(); };
    return std::tuple(a.instance_id, mi(a.method), si(a.selection), ki(a.edges_deleted)) <
           std::tuple(b.instance_id, mi(b.method), si(b.selection), ki(b.edges_deleted));
  });
  return rows;
}

}  // namespace edgedel
