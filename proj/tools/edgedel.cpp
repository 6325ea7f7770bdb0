// Command-line front end: score, approx, map, experiment.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "edgedel.hpp"

namespace {

using namespace edgedel;

constexpr int kExitOk = 0;
constexpr int kExitNotConverged = 2;
constexpr int kExitInput = 3;
constexpr int kExitCapacity = 4;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

Network load_network(const std::string& path) {
  const auto text = slurp(path);
  try {
    return ends_with(path, ".net") ? parse_hugin_subset(text) : parse_network(text);
  } catch (const ParseError& e) {
    throw ParseError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.what(),
                     e.line(), e.column());
  }
}

Evidence load_evidence(const Network& net, const std::string& path) {
  if (path.empty()) return {};
  try {
    return parse_evidence(net, slurp(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.what(),
                     e.line(), e.column());
  }
}

std::vector<VarId> resolve_vars(const Network& net, const std::vector<std::string>& names) {
  std::vector<VarId> out;
  for (const auto& n : names) {
    auto v = net.find(n);
    if (!v) throw InvalidArgument("unknown MAP variable '" + n + "'");
    out.push_back(*v);
  }
  return out;
}

std::string join_names(const Network& net, const std::vector<VarId>& vs) {
  std::string s;
  for (auto v : vs) s += (s.empty() ? "" : ",") + net.variables[v].name;
  return s;
}

struct Common {
  std::string network_path;
  std::string evidence_path;
  std::string method = "ed-kl";
  std::string select = "guided";
  std::optional<std::size_t> k;
  std::string edges_path;
  std::optional<std::size_t> target_width;
  std::size_t max_iters = 200;
  double tol = 1e-8;
  double damping = 0.0;
  std::string schedule = "sequential";
  std::uint64_t seed = 1;
  bool warm_start = false;
  std::vector<std::string> map_var_names;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("network", c.network_path, "network file (.net is read as Hugin)")->required();
  app->add_option("evidence", c.evidence_path, "evidence file, one 'var = state' per line");
  app->add_option("--method", c.method, "ed-bp or ed-kl")->check(CLI::IsMember({"ed-bp", "ed-kl"}));
  app->add_option("--select", c.select, "rand, guided or mi")->check(CLI::IsMember({"rand", "guided", "mi"}));
  auto* d = app->add_option("--delete", c.k, "number of edges to delete");
  auto* e = app->add_option("--edges", c.edges_path, "plan file: 'parent -> child [pm ... se ...]' per line");
  auto* w = app->add_option("--target-width", c.target_width, "delete ranked edges until the constrained width fits");
  d->excludes(e)->excludes(w);
  e->excludes(w);
  app->add_option("--max-iters", c.max_iters, "sweep budget");
  app->add_option("--tol", c.tol, "convergence tolerance");
  app->add_option("--damping", c.damping, "damping factor in [0,1)");
  app->add_option("--schedule", c.schedule, "sequential or simultaneous")
      ->check(CLI::IsMember({"sequential", "simultaneous"}));
  app->add_option("--seed", c.seed, "seed for random edge selection");
  app->add_flag("--warm-start", c.warm_start, "start from the parameters in the plan file");
  app->add_option("--map-vars", c.map_var_names, "MAP variables (default: unobserved roots)")->delimiter(',');
}

struct Prepared {
  Network net;
  Evidence ev;
  std::vector<VarId> map_vars;
  bool map_vars_defaulted = false;
  DeletionPlan plan;
  bool warm = false;
};

Prepared prepare(const Common& c, bool require_deletion_flag) {
  Prepared p;
  p.net = load_network(c.network_path);
  p.ev = load_evidence(p.net, c.evidence_path);
  if (c.map_var_names.empty()) {
    p.map_vars = default_map_vars(p.net, p.ev);
    p.map_vars_defaulted = true;
  } else {
    p.map_vars = resolve_vars(p.net, c.map_var_names);
  }
  const int chosen = (c.k ? 1 : 0) + (c.edges_path.empty() ? 0 : 1) + (c.target_width ? 1 : 0);
  if (require_deletion_flag && chosen != 1)
    throw InvalidArgument("exactly one of --delete, --edges, --target-width is required");
  if (c.warm_start && c.edges_path.empty()) throw InvalidArgument("--warm-start needs --edges");
  Rng rng(c.seed);
  const auto sel = parse_selection(c.select);
  std::vector<Edge> edges;
  if (c.k) {
    edges = select_edges(p.net, p.ev, sel, *c.k, rng);
  } else if (!c.edges_path.empty()) {
    const auto parsed = parse_plan(p.net, slurp(c.edges_path));
    p.plan = parsed.plan;
    if (c.warm_start)
      for (bool given : parsed.has_params)
        if (!given) throw InvalidArgument("--warm-start needs pm/se values on every plan line");
    p.warm = c.warm_start;
    return p;
  } else if (c.target_width) {
    edges = select_for_width(p.net, rank_edges(p.net, p.ev, sel, rng), *c.target_width, p.map_vars);
  }
  p.plan = plan_for(p.net, edges);
  return p;
}

IterationConfig config_from(const Common& c, bool warm) {
  IterationConfig cfg;
  cfg.method = parse_method(c.method);
  cfg.max_iterations = c.max_iters;
  cfg.tolerance = c.tol;
  cfg.damping = c.damping;
  cfg.schedule = parse_schedule(c.schedule);
  cfg.initialization = warm ? Initialization::warm_start : Initialization::uniform;
  return cfg;
}

int cmd_score(const Common& c) {
  const auto net = load_network(c.network_path);
  const auto ev = load_evidence(net, c.evidence_path);
  for (const auto& s : score_edges(net, ev))
    std::cout << edge_label(net, s.edge) << '\t' << io_detail::format_12g(s.score) << (s.converged ? "" : "\tunconverged")
              << '\n';
  return kExitOk;
}

int cmd_approx(const Common& c) {
  auto p = prepare(c, true);
  const auto cfg = config_from(c, p.warm);
  const auto edges = p.plan.edges();
  const auto augmented = augment(p.net, edges);
  const auto res = run(augmented, p.ev, p.plan, cfg);
  const auto& ap = res.approximation;
  const auto original = compile(augmented, p.ev);
  const auto approx = compile(ap.network, ap.evidence);
  approx.require_consistent();

  std::cout << "# marginals\n";
  for (const auto& [v, m] : recover_marginals(ap, approx)) {
    std::cout << ap.network.variables[v].name << ':';
    for (double x : m) std::cout << ' ' << io_detail::format_12g(x);
    std::cout << '\n';
  }
  std::cout << "# plan\n" << serialize_plan(p.net, ap.plan);
  for (const auto& w : res.report.warnings) std::cerr << "warning: " << w << '\n';

  ReportRow row;
  row.network_id = c.network_path;
  row.method = cfg.method;
  row.selection = parse_selection(c.select);
  row.edges_deleted = edges.size();
  row.iterations = res.report.iterations;
  row.converged = res.report.converged;
  row.kl_bound = std::max(0.0, kl_bound(original, approx, ap).total);
  try {
    row.exact_kl = std::max(0.0, exact_kl(original, approx));
  } catch (const CapacityError&) {
  }
  row.constrained_treewidth = constrained_order(ap.network, p.map_vars).induced_width;
  std::cout << "# report\n";
  write_report({row}, std::cout);
  return res.report.converged ? kExitOk : kExitNotConverged;
}

int cmd_map(const Common& c) {
  auto p = prepare(c, false);
  if (p.map_vars.empty()) throw InvalidArgument("no MAP variables (every root is observed)");
  const auto cfg = config_from(c, p.warm);
  const auto edges = p.plan.edges();
  const auto res = run(augment(p.net, edges), p.ev, p.plan, cfg);
  const auto m = approximate_map(res.approximation, p.map_vars);
  const auto q = map_quality(p.net, p.ev, m, p.map_vars);
  std::cout << "map_vars: " << join_names(p.net, p.map_vars) << (p.map_vars_defaulted ? " (default: unobserved roots)" : "")
            << '\n';
  for (const auto& [v, s] : m) std::cout << p.net.variables[v].name << " = " << p.net.variables[v].states[s] << '\n';
  std::cout << "edges_deleted,p,q,ratio\n"
            << edges.size() << ',' << io_detail::format_12g(q.p) << ','
            << (q.q ? io_detail::format_12g(*q.q) : "") << ',' << (q.ratio ? io_detail::format_12g(*q.ratio) : "")
            << '\n';
  if (q.q_zero) std::cerr << "warning: exact MAP value is 0; ratio undefined\n";
  return res.report.converged ? kExitOk : kExitNotConverged;
}

int cmd_experiment(const std::string& spec_path, const std::string& out_path) {
  const auto spec = parse_experiment_spec(slurp(spec_path));
  const auto rows = run_experiment(spec, &std::cerr);
  if (out_path.empty() || out_path == "-") {
    write_report(rows, std::cout);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write '" + out_path + "'");
    write_report(rows, out);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate inference by edge deletion in Bayesian networks"};
  app.require_subcommand(1);
  Common score_opts, approx_opts, map_opts;

  auto* score = app.add_subcommand("score", "rank every edge by its single-deletion KL score");
  score->add_option("network", score_opts.network_path, "network file")->required();
  score->add_option("evidence", score_opts.evidence_path, "evidence file");

  auto* approx = app.add_subcommand("approx", "delete edges, parametrize, print marginals and a report row");
  add_common(approx, approx_opts);

  auto* map = app.add_subcommand("map", "approximate MAP and its quality against exact MAP");
  add_common(map, map_opts);

  std::string spec_path, out_path;
  auto* experiment = app.add_subcommand("experiment", "run an experiment spec and write the report");
  experiment->add_option("spec", spec_path, "experiment spec file")->required();
  experiment->add_option("-o,--output", out_path, "report path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (*score) return cmd_score(score_opts);
    if (*approx) return cmd_approx(approx_opts);
    if (*map) return cmd_map(map_opts);
    if (*experiment) return cmd_experiment(spec_path, out_path);
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}
