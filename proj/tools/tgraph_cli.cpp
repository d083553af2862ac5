// tgraph: command-line front end for random temporal graph experiments.
//
// Exit codes: 0 success, 1 usage error, 2 I/O or parse error, 3 budget
// exhausted.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>

#include "tgraph/tgraph.hpp"

namespace {

constexpr int kUsage = 1;
constexpr int kIo = 2;
constexpr int kBudget = 3;

tgraph::TimeWindow parse_window(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw tgraph::InvalidArgument("--window expects lo,hi");
  try {
    tgraph::TimeWindow w{std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    w.validate();
    return w;
  } catch (const std::logic_error&) {
    throw tgraph::InvalidArgument("--window expects two numbers lo,hi");
  }
}

void write_output(const std::string& path, const std::string& body) {
  if (path.empty() || path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::system_error(errno, std::generic_category(), "cannot open " + path);
  out << body;
  if (!out) throw std::system_error(errno, std::generic_category(), "write failed: " + path);
}

int cmd_gen(int n, std::optional<double> p, std::optional<double> c, std::uint64_t seed,
            const std::string& out) {
  if (p.has_value() == c.has_value()) throw tgraph::InvalidArgument("give exactly one of --p, --c");
  const auto params = c ? tgraph::GraphParams::from_c(n, *c) : tgraph::GraphParams{n, *p, {}};
  const auto g = tgraph::generate_rstg(params, seed);
  std::ostringstream body;
  body << "# rstg n=" << n << " p=" << tgraph::format_double(params.p) << " seed=" << seed << '\n';
  tgraph::save_graph(g, body);
  write_output(out, body.str());
  std::cerr << "wrote " << g.edge_count() << " edges\n";
  return 0;
}

int cmd_reach(const std::string& graph, int source, const std::string& window, bool backward) {
  const auto g = tgraph::load_graph(graph);
  const auto w = window.empty() ? tgraph::TimeWindow::full() : parse_window(window);
  const auto r = backward ? tgraph::backward_reach(g, source, w) : tgraph::forward_reach(g, source, w);
  std::cout << (backward ? "backward" : "forward") << " anchor=" << source << " window=["
            << tgraph::format_double(w.lo) << ',' << tgraph::format_double(w.hi)
            << "] size=" << r.size() << '\n';
  for (const auto v : r.members()) {
    const auto t = r.stamp_of(v);
    std::cout << v << ' ' << (t ? tgraph::format_double(*t) : std::string("-")) << '\n';
  }
  return 0;
}

int cmd_clique(const std::string& graph, const std::string& mode, std::optional<int> census,
               std::int64_t budget) {
  const auto g = tgraph::load_graph(graph);
  if (census) {
    const auto result = tgraph::count_temporal_cliques(g, *census);
    std::cout << "census m=" << result.m << " count=" << result.count << '\n';
    return 0;
  }
  tgraph::CliqueOptions opt;
  opt.node_budget = budget;
  const auto clique = tgraph::max_temporal_clique(
      g, mode == "heuristic" ? tgraph::CliqueMode::kHeuristic : tgraph::CliqueMode::kExact, opt);
  std::cout << "size " << clique.size() << '\n' << "members";
  for (const auto v : clique) std::cout << ' ' << v;
  std::cout << '\n';
  return 0;
}

int print_summary(const tgraph::ExperimentResult& res) {
  std::cout << tgraph::summary_json(res).dump(2) << '\n';
  return res.budget_exhausted ? kBudget : 0;
}

int cmd_bp(int n, double theta, std::int64_t trials, std::uint64_t seed, int threads) {
  tgraph::ExperimentConfig cfg;
  cfg.kind = tgraph::ExperimentKind::kMomentCheck;
  cfg.n = {n};
  cfg.theta = {theta};
  cfg.trials = trials;
  cfg.master_seed = seed;
  cfg.threads = threads;
  return print_summary(tgraph::run_experiment(cfg));
}

int cmd_walk(int n, const std::string& paths, int lmax, std::int64_t trials, std::uint64_t seed,
             int threads) {
  tgraph::ExperimentConfig cfg;
  cfg.kind = tgraph::ExperimentKind::kWalkTau;
  cfg.n = {n};
  cfg.paths = tgraph::load_walk_paths(paths, n).paths;
  cfg.l_max = lmax;
  cfg.trials = trials;
  cfg.master_seed = seed;
  cfg.threads = threads;
  return print_summary(tgraph::run_experiment(cfg));
}

int cmd_couple(int n, double p, std::int64_t trials, std::uint64_t seed) {
  std::int64_t violations = 0;
  std::int64_t violating_runs = 0;
  std::vector<double> a;
  std::vector<double> t;
  for (std::int64_t i = 0; i < trials; ++i) {
    const auto tr = tgraph::coupled_sample(n, p, tgraph::derive_seed(seed, i, 0xc0));
    const auto bad = tgraph::coupling_violations(tr);
    violations += bad;
    violating_runs += bad > 0;
    a.push_back(static_cast<double>(tr.a_size));
    t.push_back(static_cast<double>(tr.tstar_size));
  }
  const auto sa = tgraph::summarize(a);
  const auto st = tgraph::summarize(t);
  const tgraph::json report{{"n", n},
                            {"p", p},
                            {"trials", trials},
                            {"violations", violations},
                            {"violating_runs", violating_runs},
                            {"mean_a_size", sa.mean},
                            {"a_size_std_error", sa.std_error},
                            {"mean_tstar_size", st.mean},
                            {"tstar_size_std_error", st.std_error},
                            {"pathwise_pass", violations == 0}};
  std::cout << report.dump(2) << '\n';
  return 0;
}

int cmd_exp(const std::string& kind, const std::string& config, std::optional<int> threads,
            const std::string& out, const std::string& format) {
  std::ifstream in(config);
  if (!in) throw std::system_error(errno, std::generic_category(), "cannot open " + config);
  tgraph::json j;
  try {
    j = tgraph::json::parse(in);
  } catch (const tgraph::json::parse_error& e) {
    throw tgraph::ParseError(0, config + ": " + e.what());
  }
  auto cfg = tgraph::ExperimentConfig::from_json(j);
  const auto requested = tgraph::parse_kind(kind);
  if (j.contains("kind") && cfg.kind != requested) {
    throw tgraph::InvalidArgument("config kind '" + tgraph::to_string(cfg.kind) +
                                  "' does not match '" + kind + "'");
  }
  cfg.kind = requested;
  if (threads) cfg.threads = *threads;
  if (!out.empty()) cfg.output = out;
  if (!format.empty()) cfg.format = format;
  if (cfg.output.empty()) throw tgraph::InvalidArgument("exp needs --out or an output key");

  const auto res = tgraph::run_experiment(cfg);
  std::ostringstream body;
  if (cfg.format == "json") {
    tgraph::write_json(res, body);
  } else {
    tgraph::write_csv(res, body);
  }
  write_output(cfg.output, body.str());
  return print_summary(res);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random simple temporal graphs: generation, reachability, cliques, branching processes"};
  app.require_subcommand(1);
  int rc = 0;

  int n = 0;
  std::uint64_t seed = 0;
  std::int64_t trials = 1;
  int threads = 1;
  std::string out;

  auto* gen = app.add_subcommand("gen", "sample a random simple temporal graph");
  std::optional<double> p_opt;
  std::optional<double> c_opt;
  gen->add_option("--n", n, "vertex count")->required();
  gen->add_option("--p", p_opt, "edge probability");
  gen->add_option("--c", c_opt, "p = c log(n)/n");
  gen->add_option("--seed", seed, "random seed")->required();
  gen->add_option("--out", out, "output graph file ('-' for stdout)")->required();

  auto* reach = app.add_subcommand("reach", "increasing-path reachable set of a vertex");
  std::string graph;
  int source = 0;
  std::string window;
  bool backward = false;
  reach->add_option("--graph", graph, "graph file")->required();
  reach->add_option("--source", source, "anchor vertex")->required();
  reach->add_option("--window", window, "stamp window lo,hi (default 0,1)");
  reach->add_flag("--backward", backward, "vertices that can reach the anchor");

  auto* clique = app.add_subcommand("clique", "maximum temporal clique or clique census");
  std::string mode = "exact";
  std::optional<int> census;
  std::int64_t budget = 10'000'000;
  clique->add_option("--graph", graph, "graph file")->required();
  clique->add_option("--mode", mode, "exact or heuristic")
      ->check(CLI::IsMember({"exact", "heuristic"}));
  clique->add_option("--census", census, "count temporal cliques of this size")
      ->check(CLI::PositiveNumber);
  clique->add_option("--budget", budget, "exact search node budget");

  auto* bp = app.add_subcommand("bp", "temporal branching process statistics");
  double theta = 0.0;
  bp->add_option("--n", n, "branching factor")->required();
  bp->add_option("--theta", theta, "label cutoff")->required();
  bp->add_option("--trials", trials, "samples")->required();
  bp->add_option("--seed", seed, "master seed")->required();
  bp->add_option("--threads", threads, "workers");

  auto* walk = app.add_subcommand("walk", "random walk against a path family");
  std::string paths;
  int lmax = 0;
  walk->add_option("--n", n, "branching factor")->required();
  walk->add_option("--paths", paths, "path file")->required();
  walk->add_option("--lmax", lmax, "walk length")->required();
  walk->add_option("--trials", trials, "walks")->required();
  walk->add_option("--seed", seed, "master seed")->required();
  walk->add_option("--threads", threads, "workers");

  auto* couple = app.add_subcommand("couple", "coupled foremost-tree chains");
  double p = 0.0;
  couple->add_option("--n", n, "vertex count")->required();
  couple->add_option("--p", p, "edge probability")->required();
  couple->add_option("--trials", trials, "coupled runs")->required();
  couple->add_option("--seed", seed, "master seed")->required();

  auto* exp = app.add_subcommand("exp", "run an experiment sweep from a JSON config");
  std::string kind;
  std::string config;
  std::optional<int> exp_threads;
  std::string format;
  exp->add_option("kind", kind, "experiment kind")->required();
  exp->add_option("--config", config, "config JSON file")->required();
  exp->add_option("--threads", exp_threads, "workers");
  exp->add_option("--out", out, "record file");
  exp->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*gen) rc = cmd_gen(n, p_opt, c_opt, seed, out);
    if (*reach) rc = cmd_reach(graph, source, window, backward);
    if (*clique) rc = cmd_clique(graph, mode, census, budget);
    if (*bp) rc = cmd_bp(n, theta, trials, seed, threads);
    if (*walk) rc = cmd_walk(n, paths, lmax, trials, seed, threads);
    if (*couple) rc = cmd_couple(n, p, trials, seed);
    if (*exp) rc = cmd_exp(kind, config, exp_threads, out, format);
  } catch (const tgraph::BudgetExceeded& e) {
    std::cerr << "budget exhausted: " << e.what() << '\n';
    return kBudget;
  } catch (const tgraph::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const tgraph::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kIo;
  } catch (const std::system_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  }
  return rc;
}
