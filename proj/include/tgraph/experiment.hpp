#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <iterator>
#include <map>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tgraph/branching.hpp"
#include "tgraph/clique.hpp"
#include "tgraph/errors.hpp"
#include "tgraph/graph_io.hpp"
#include "tgraph/reachability.hpp"
#include "tgraph/rng.hpp"
#include "tgraph/stats.hpp"
#include "tgraph/temporal_graph.hpp"

namespace tgraph {

using json = nlohmann::json;

enum class ExperimentKind {
  kCliqueScaling,
  kCliqueCensus,
  kMomentCheck,
  kDominance,
  kNegativeCorr,
  kWalkTau,
  kBpStats,
};

inline constexpr std::pair<ExperimentKind, const char*> kKindNames[] = {
    {ExperimentKind::kCliqueScaling, "clique-scaling"},
    {ExperimentKind::kCliqueCensus, "clique-census"},
    {ExperimentKind::kMomentCheck, "moment-check"},
    {ExperimentKind::kDominance, "dominance"},
    {ExperimentKind::kNegativeCorr, "negative-corr"},
    {ExperimentKind::kWalkTau, "walk-tau"},
    {ExperimentKind::kBpStats, "bp-stats"},
};

inline std::string to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

inline ExperimentKind parse_kind(const std::string& name) {
  for (const auto& [k, s] : kKindNames) {
    if (name == s) return k;
  }
  throw InvalidArgument("unknown experiment kind '" + name + "'");
}

/// Declarative description of one experiment sweep. Cells are the cartesian
/// product of `n` with the rate list (`c`, else `p`, else `theta`); each cell
/// runs `trials` independent trials.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kBpStats;
  std::vector<int> n;
  std::vector<double> c;
  std::vector<double> p;
  std::vector<double> theta;
  int m = 3;
  int q = 1;
  int l_max = 4;
  std::int64_t trials = 1;
  std::uint64_t master_seed = 0;
  int threads = 1;
  std::int64_t node_budget = 10'000'000;
  std::int64_t step_budget = 10'000'000;
  std::string mode = "auto";  // clique-scaling solver: auto | exact | heuristic
  int heuristic_passes = 64;
  bool surrogate = false;     // negative-corr: B_1 from an independent graph
  std::vector<std::vector<int>> paths;  // walk-tau
  double alpha = 0.01;
  std::string output;
  std::string format = "csv";

  bool uses_graphs() const noexcept {
    return kind != ExperimentKind::kBpStats && kind != ExperimentKind::kMomentCheck &&
           kind != ExperimentKind::kWalkTau;
  }

  /// (n, edge probability or cutoff) for every cell, in sweep order.
  std::vector<std::pair<int, double>> cells() const {
    std::vector<std::pair<int, double>> out;
    if (kind == ExperimentKind::kWalkTau) {
      out.emplace_back(n.at(0), 0.0);
      return out;
    }
    for (int nv : n) {
      if (!c.empty() && uses_graphs()) {
        for (double cv : c) out.emplace_back(nv, GraphParams::from_c(nv, cv).p);
      } else {
        const auto& rates = (!uses_graphs() && !theta.empty()) ? theta : p;
        for (double r : rates) out.emplace_back(nv, r);
      }
    }
    return out;
  }

  void validate() const {
    if (trials < 1) throw InvalidArgument("trials must be >= 1");
    if (threads < 1) throw InvalidArgument("threads must be >= 1");
    if (n.empty()) throw InvalidArgument("config needs at least one n");
    for (int nv : n) {
      if (nv < 1) throw InvalidArgument("every n must be >= 1");
    }
    if (node_budget < 1 || step_budget < 1) throw InvalidArgument("budgets must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0,1)");
    if (format != "csv" && format != "json") throw InvalidArgument("format must be csv or json");
    if (mode != "auto" && mode != "exact" && mode != "heuristic") {
      throw InvalidArgument("mode must be auto, exact or heuristic");
    }
    if (q < 1) throw InvalidArgument("q must be >= 1");
    if (l_max < 0) throw InvalidArgument("l_max must be >= 0");
    if (kind == ExperimentKind::kWalkTau) {
      if (n.size() != 1) throw InvalidArgument("walk-tau takes a single branching factor n");
      WalkPathSet set{n[0], paths};
      set.validate();
      if (static_cast<std::size_t>(l_max) > set.shortest()) {
        throw InvalidArgument("walk-tau: l_max exceeds the shortest path");
      }
      return;
    }
    if (kind == ExperimentKind::kCliqueCensus && m < 1) throw InvalidArgument("m must be >= 1");
    if (kind == ExperimentKind::kNegativeCorr && m < 1) throw InvalidArgument("m must be >= 1");
    const bool has_rates = uses_graphs() ? (!c.empty() || !p.empty()) : (!theta.empty() || !p.empty());
    if (!has_rates) throw InvalidArgument("config needs c or p values");
    for (double cv : c) {
      if (!(cv > 0.0)) throw InvalidArgument("every c must be positive");
    }
    for (const auto& [nv, rate] : cells()) {
      if (!(rate >= 0.0 && rate <= 1.0)) {
        throw InvalidArgument("n=" + std::to_string(nv) + " gives rate " + std::to_string(rate) +
                              " outside [0,1]");
      }
      if (!c.empty() && uses_graphs() && !(rate > 0.0 && rate < 1.0)) {
        throw InvalidArgument("n=" + std::to_string(nv) + " with the given c yields p outside (0,1)");
      }
      if (kind == ExperimentKind::kNegativeCorr && m > nv) {
        throw InvalidArgument("negative-corr: m exceeds n");
      }
    }
  }

  json to_json() const {
    return json{{"kind", to_string(kind)},
                {"n", n},
                {"c", c},
                {"p", p},
                {"theta", theta},
                {"m", m},
                {"q", q},
                {"l_max", l_max},
                {"trials", trials},
                {"master_seed", master_seed},
                {"threads", threads},
                {"node_budget", node_budget},
                {"step_budget", step_budget},
                {"mode", mode},
                {"heuristic_passes", heuristic_passes},
                {"surrogate", surrogate},
                {"paths", paths},
                {"alpha", alpha},
                {"output", output},
                {"format", format}};
  }

  static ExperimentConfig from_json(const json& j) {
    static const char* const kKeys[] = {
        "kind",   "n",          "c",      "p",       "theta",         "m",
        "q",      "l_max",      "trials", "master_seed", "threads",   "node_budget",
        "step_budget", "mode",  "heuristic_passes", "surrogate", "paths", "alpha",
        "output", "format"};
    if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (std::find_if(std::begin(kKeys), std::end(kKeys),
                       [&](const char* k) { return key == k; }) == std::end(kKeys)) {
        throw InvalidArgument("unknown config key '" + key + "'");
      }
    }
    ExperimentConfig cfg;
    try {
      const auto list = [&](const char* key, auto& out) {
        if (!j.contains(key)) return;
        const auto& v = j.at(key);
        using T = typename std::decay_t<decltype(out)>::value_type;
        out = v.is_array() ? v.get<std::vector<T>>() : std::vector<T>{v.get<T>()};
      };
      if (j.contains("kind")) cfg.kind = parse_kind(j.at("kind").get<std::string>());
      list("n", cfg.n);
      list("c", cfg.c);
      list("p", cfg.p);
      list("theta", cfg.theta);
      cfg.m = j.value("m", cfg.m);
      cfg.q = j.value("q", cfg.q);
      cfg.l_max = j.value("l_max", cfg.l_max);
      cfg.trials = j.value("trials", cfg.trials);
      cfg.master_seed = j.value("master_seed", cfg.master_seed);
      cfg.threads = j.value("threads", cfg.threads);
      cfg.node_budget = j.value("node_budget", cfg.node_budget);
      cfg.step_budget = j.value("step_budget", cfg.step_budget);
      cfg.mode = j.value("mode", cfg.mode);
      cfg.heuristic_passes = j.value("heuristic_passes", cfg.heuristic_passes);
      cfg.surrogate = j.value("surrogate", cfg.surrogate);
      if (j.contains("paths")) cfg.paths = j.at("paths").get<std::vector<std::vector<int>>>();
      cfg.alpha = j.value("alpha", cfg.alpha);
      cfg.output = j.value("output", cfg.output);
      cfg.format = j.value("format", cfg.format);
    } catch (const json::exception& e) {
      throw InvalidArgument(std::string("bad config value: ") + e.what());
    }
    return cfg;
  }
};

struct TrialRecord {
  std::int64_t cell = 0;
  std::int64_t trial = 0;
  std::uint64_t seed = 0;
  int n = 0;
  double p = 0.0;
  bool ok = true;             // false: the trial hit a budget
  std::vector<double> values; // one per measured column when ok

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct CellSummary {
  int n = 0;
  double p = 0.0;
  std::int64_t ok = 0;
  std::int64_t failed = 0;
  std::vector<std::pair<std::string, SummaryStats>> stats;
  json report;

  const SummaryStats& stat(const std::string& column) const {
    for (const auto& [name, s] : stats) {
      if (name == column) return s;
    }
    throw InvalidArgument("no statistics for column '" + column + "'");
  }
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<std::string> columns;
  std::vector<TrialRecord> records;
  std::vector<CellSummary> cells;
  /// Some cell had no successful trial because of budgets.
  bool budget_exhausted = false;
};

/// Measured columns of each kind, in CSV order.
inline std::vector<std::string> measured_columns(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::kCliqueScaling:
      return {"edges", "max_clique", "exact"};
    case ExperimentKind::kCliqueCensus:
      return {"edges", "triangles", "census"};
    case ExperimentKind::kMomentCheck: {
      std::vector<std::string> cols{"total", "depth"};
      for (int l = 0; l <= cfg.l_max; ++l) cols.push_back("z" + std::to_string(l));
      return cols;
    }
    case ExperimentKind::kBpStats:
      return {"total", "depth", "z1"};
    case ExperimentKind::kDominance:
      return {"a1", "tstar", "coupled_a", "coupled_tstar", "coupling_violations"};
    case ExperimentKind::kNegativeCorr:
      if (cfg.m >= 2) return {"a1", "b1", "witness_lhs", "witness_rhs"};
      return {"a1", "b1"};
    case ExperimentKind::kWalkTau:
      return {"tau"};
  }
  return {};
}

namespace detail {

inline std::uint64_t substream(std::uint64_t seed, std::uint64_t k) { return mix64(seed ^ mix64(k)); }

// Witness-product probe for vertices 0..m-1: prod_{i!=j} |A_i cap B_j| / n and
// prod_{i!=j} |A_i| |B_j| / n^2.
inline std::pair<double, double> witness_products(const TemporalGraph& g, int m, double p) {
  std::vector<Vertex> vs(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) vs[i] = i;
  const auto sets = split_sets(g, vs, p);
  const double n = g.n();
  double lhs = 1.0;
  double rhs = 1.0;
  for (int i = 0; i < m; ++i) {
    const auto a = sets.forward[i].members();
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      const auto b = sets.backward[j].members();
      std::vector<Vertex> both;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
      lhs *= static_cast<double>(both.size()) / n;
      rhs *= static_cast<double>(a.size()) * static_cast<double>(b.size()) / (n * n);
    }
  }
  return {lhs, rhs};
}

inline std::vector<double> run_trial(const ExperimentConfig& cfg, int n, double p,
                                     std::uint64_t seed) {
  switch (cfg.kind) {
    case ExperimentKind::kCliqueScaling: {
      const auto g = generate_rstg({n, p, std::nullopt}, seed);
      const bool exact = cfg.mode == "exact" ||
                         (cfg.mode == "auto" && n > 1 && p < std::log(static_cast<double>(n)) / n);
      CliqueOptions opt{cfg.node_budget, cfg.heuristic_passes, substream(seed, 1)};
      const auto clique =
          max_temporal_clique(g, exact ? CliqueMode::kExact : CliqueMode::kHeuristic, opt);
      return {static_cast<double>(g.edge_count()), static_cast<double>(clique.size()),
              exact ? 1.0 : 0.0};
    }
    case ExperimentKind::kCliqueCensus: {
      const auto g = generate_rstg({n, p, std::nullopt}, seed);
      return {static_cast<double>(g.edge_count()),
              static_cast<double>(static_triangles(g).size()),
              static_cast<double>(count_temporal_cliques(g, cfg.m).count)};
    }
    case ExperimentKind::kMomentCheck: {
      const auto s = sample_tbp({n, p, cfg.step_budget}, seed);
      std::vector<double> out{static_cast<double>(s.total), static_cast<double>(s.depth)};
      for (int l = 0; l <= cfg.l_max; ++l) out.push_back(static_cast<double>(s.generation(l)));
      return out;
    }
    case ExperimentKind::kBpStats: {
      const auto s = sample_tbp({n, p, cfg.step_budget}, seed);
      return {static_cast<double>(s.total), static_cast<double>(s.depth),
              static_cast<double>(s.generation(1))};
    }
    case ExperimentKind::kDominance: {
      const auto g = generate_rstg({n, p, std::nullopt}, substream(seed, 0));
      const auto a1 = forward_reach(g, 0, {0.0, p / 2});
      const auto tree = sample_tbp({n, p / 2, cfg.step_budget}, substream(seed, 1));
      const auto tr = coupled_sample(std::max(n, 2), p, substream(seed, 2), cfg.step_budget);
      return {static_cast<double>(a1.size()), static_cast<double>(tree.total),
              static_cast<double>(tr.a_size), static_cast<double>(tr.tstar_size),
              static_cast<double>(coupling_violations(tr))};
    }
    case ExperimentKind::kNegativeCorr: {
      const auto g = generate_rstg({n, p, std::nullopt}, substream(seed, 0));
      const auto a1 = forward_reach(g, 0, {0.0, p / 2});
      const auto b1 = cfg.surrogate
                          ? backward_reach(generate_rstg({n, p, std::nullopt}, substream(seed, 1)),
                                           0, {p / 2, p})
                          : backward_reach(g, 0, {p / 2, p});
      std::vector<double> out{static_cast<double>(a1.size()), static_cast<double>(b1.size())};
      if (cfg.m >= 2) {
        const auto [lhs, rhs] = p > 0.0 ? witness_products(g, cfg.m, p) : std::pair{0.0, 0.0};
        out.push_back(lhs);
        out.push_back(rhs);
      }
      return out;
    }
    case ExperimentKind::kWalkTau: {
      const WalkPathSet set{n, cfg.paths};
      return {static_cast<double>(sample_walk_tau(set, PathTrie(set), cfg.l_max, seed))};
    }
  }
  return {};
}

inline std::vector<double> column(const std::vector<TrialRecord>& recs, std::size_t idx,
                                  std::int64_t cell) {
  std::vector<double> out;
  for (const auto& r : recs) {
    if (r.cell == cell && r.ok) out.push_back(r.values[idx]);
  }
  return out;
}

inline json stats_json(const SummaryStats& s) {
  json q = json::object();
  for (const auto& [level, v] : s.quantiles) q[format_double(level)] = v;
  json cdf = json::array();
  for (const auto& [x, f] : s.ecdf) cdf.push_back({x, f});
  return json{{"count", s.count}, {"mean", s.mean}, {"std_error", s.std_error},
              {"min", s.min},     {"max", s.max},   {"quantiles", q},
              {"ecdf", cdf}};
}

// Kind-specific verdicts and reference values for one cell.
inline json cell_report(const ExperimentConfig& cfg, const CellSummary& cell,
                        const std::vector<TrialRecord>& recs, std::int64_t index,
                        const std::vector<std::string>& cols) {
  const auto col = [&](const std::string& name) {
    const auto it = std::find(cols.begin(), cols.end(), name);
    return column(recs, static_cast<std::size_t>(it - cols.begin()), index);
  };
  json r = json::object();
  if (cell.ok == 0) return r;
  const int n = cell.n;
  const double rate = cell.p;
  switch (cfg.kind) {
    case ExperimentKind::kCliqueScaling: {
      const auto sizes = col("max_clique");
      std::map<int, std::int64_t> hist;
      for (double s : sizes) ++hist[static_cast<int>(s)];
      json h = json::object();
      for (const auto& [size, count] : hist) h[std::to_string(size)] = count;
      r["size_histogram"] = h;
      r["median"] = cell.stat("max_clique").median();
      const double c = n > 1 ? rate * n / std::log(static_cast<double>(n)) : 0.0;
      r["c"] = c;
      if (c > 0.0 && c < 1.0) {
        const int bound = clique_size_bound(c);
        r["size_bound"] = bound;
        r["fraction_within_bound"] =
            static_cast<double>(std::count_if(sizes.begin(), sizes.end(),
                                              [&](double s) { return s <= bound; })) /
            static_cast<double>(sizes.size());
      }
      r["fraction_at_least_half_n"] =
          static_cast<double>(std::count_if(sizes.begin(), sizes.end(),
                                            [&](double s) { return s >= 0.5 * n; })) /
          static_cast<double>(sizes.size());
      break;
    }
    case ExperimentKind::kCliqueCensus: {
      const double c = n > 1 ? rate * n / std::log(static_cast<double>(n)) : 0.0;
      r["c"] = c;
      r["exponent"] = census_exponent(cfg.m, c);
      r["mean_census"] = cell.stat("census").mean;
      r["census_std_error"] = cell.stat("census").std_error;
      r["mean_triangles"] = cell.stat("triangles").mean;
      break;
    }
    case ExperimentKind::kBpStats: {
      const double expected = expected_total_progeny(n, rate);
      const auto& s = cell.stat("total");
      r["expected_total"] = expected;
      r["mean_total"] = s.mean;
      r["total_std_error"] = s.std_error;
      r["mean_within_3se"] = within_se(s, expected);
      r["expected_z1"] = n * rate;
      r["z1_within_3se"] = within_se(cell.stat("z1"), n * rate);
      break;
    }
    case ExperimentKind::kMomentCheck: {
      const double np = n * rate;
      json gens = json::array();
      for (int l = 0; l <= cfg.l_max; ++l) {
        auto z = col("z" + std::to_string(l));
        for (auto& v : z) v = std::pow(v, cfg.q);
        const auto s = summarize(z);
        json g{{"l", l},
               {"moment", s.mean},
               {"std_error", s.std_error},
               {"cor4_bound", cor4_moment_bound(np, cfg.q)},
               {"below_bound", s.mean <= cor4_moment_bound(np, cfg.q) + 3 * s.std_error}};
        if (cfg.q == 1) {
          g["expected"] = expected_generation_size(n, rate, l);
          g["within_3se"] = within_se(s, expected_generation_size(n, rate, l));
        }
        gens.push_back(g);
      }
      r["generations"] = gens;
      auto total = col("total");
      for (auto& v : total) v = std::pow(v, cfg.q);
      const auto s = summarize(total);
      r["total_moment"] = s.mean;
      r["total_std_error"] = s.std_error;
      r["thm5_bound_c1"] = thm5_moment_bound(np, cfg.q, 1.0);
      if (cfg.q == 1) {
        r["expected_total"] = expected_total_progeny(n, rate);
        r["total_within_3se"] = within_se(s, expected_total_progeny(n, rate));
      }
      break;
    }
    case ExperimentKind::kDominance: {
      const auto a1 = col("a1");
      const auto tstar = col("tstar");
      const auto viol = col("coupling_violations");
      const auto verdict = ecdf_compare(a1, tstar, cfg.alpha);
      double total_viol = 0.0;
      for (double v : viol) total_viol += v;
      r["coupling_violations"] = total_viol;
      r["pathwise_pass"] = total_viol == 0.0;
      r["ecdf_pass"] = verdict.pass;
      r["ecdf_max_violation"] = verdict.max_violation;
      r["ecdf_violation_at"] = verdict.at;
      r["ecdf_band"] = verdict.band;
      // Chain marginals against direct simulation; reported, not gated.
      const auto two_sided = [&](const std::vector<double>& x, const std::vector<double>& y) {
        const auto fwd = ecdf_compare(x, y, cfg.alpha);
        const auto back = ecdf_compare(y, x, cfg.alpha);
        return json{{"max_abs_gap", std::max(fwd.max_violation, back.max_violation)},
                    {"band", fwd.band},
                    {"consistent", fwd.pass && back.pass}};
      };
      r["chain_a_vs_direct_a1"] = two_sided(col("coupled_a"), a1);
      r["chain_tstar_vs_direct_tstar"] = two_sided(col("coupled_tstar"), tstar);
      break;
    }
    case ExperimentKind::kNegativeCorr: {
      auto a = col("a1");
      auto b = col("b1");
      for (auto& v : a) v = std::pow(v, cfg.q);
      for (auto& v : b) v = std::pow(v, cfg.q);
      const auto cov = covariance(a, b);
      double mab = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) mab += a[i] * b[i];
      r["mean_product"] = mab / static_cast<double>(a.size());
      r["mean_a_q"] = summarize(a).mean;
      r["mean_b_q"] = summarize(b).mean;
      r["covariance"] = cov.estimate;
      r["std_error"] = cov.std_error;
      r["nonpositive_within_3se"] = cov.estimate <= 3.0 * cov.std_error;
      if (cfg.m >= 2) {
        r["witness_lhs_mean"] = cell.stat("witness_lhs").mean;
        r["witness_rhs_mean"] = cell.stat("witness_rhs").mean;
      }
      break;
    }
    case ExperimentKind::kWalkTau: {
      const WalkPathSet set{n, cfg.paths};
      const auto tau = col("tau");
      json tails = json::array();
      for (int l = 0; l <= cfg.l_max; ++l) {
        std::vector<double> hit;
        hit.reserve(tau.size());
        for (double t : tau) hit.push_back(t >= l ? 1.0 : 0.0);
        const auto s = summarize(hit);
        const auto exact = exact_tau_tail(set, l);
        const double bound = static_cast<double>(set.q()) / std::pow(static_cast<double>(n), l);
        // Zero sample variance: compare exactly.
        const bool agree = s.std_error > 0.0 ? within_se(s, exact.value())
                                              : s.mean == exact.value();
        tails.push_back({{"l", l},
                         {"mc_tail", s.mean},
                         {"std_error", s.std_error},
                         {"exact_num", exact.num},
                         {"exact_den", exact.den},
                         {"exact", exact.value()},
                         {"union_bound", bound},
                         {"mc_matches_exact", agree},
                         {"exact_within_bound", exact <= Rational{set.q(), exact.den}}});
      }
      r["tails"] = tails;
      break;
    }
  }
  return r;
}

}  // namespace detail

/// Runs every trial of every cell on `cfg.threads` workers. Trial seeds are
/// derive_seed(master_seed, global trial index, kind tag), and records are
/// stored by index, so the result does not depend on the thread count.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult res;
  res.config = cfg;
  res.columns = measured_columns(cfg);
  const auto cells = cfg.cells();
  const auto total = static_cast<std::int64_t>(cells.size()) * cfg.trials;
  const auto tag = static_cast<std::uint64_t>(cfg.kind) + 1;
  res.records.resize(static_cast<std::size_t>(total));

  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  const auto worker = [&] {
    for (std::int64_t idx = next++; idx < total; idx = next++) {
      auto& rec = res.records[static_cast<std::size_t>(idx)];
      rec.cell = idx / cfg.trials;
      rec.trial = idx % cfg.trials;
      rec.seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(idx), tag);
      rec.n = cells[rec.cell].first;
      rec.p = cells[rec.cell].second;
      try {
        rec.values = detail::run_trial(cfg, rec.n, rec.p, rec.seed);
      } catch (const BudgetExceeded&) {
        rec.ok = false;
        rec.values.clear();
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = total;
      }
    }
  };
  const int workers = static_cast<int>(std::min<std::int64_t>(cfg.threads, total));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    CellSummary cell;
    cell.n = cells[ci].first;
    cell.p = cells[ci].second;
    for (const auto& r : res.records) {
      if (r.cell != static_cast<std::int64_t>(ci)) continue;
      r.ok ? ++cell.ok : ++cell.failed;
    }
    if (cell.ok > 0) {
      for (std::size_t k = 0; k < res.columns.size(); ++k) {
        cell.stats.emplace_back(res.columns[k],
                                summarize(detail::column(res.records, k, static_cast<std::int64_t>(ci))));
      }
    } else {
      res.budget_exhausted = true;
    }
    cell.report = detail::cell_report(cfg, cell, res.records, static_cast<std::int64_t>(ci),
                                      res.columns);
    res.cells.push_back(std::move(cell));
  }
  return res;
}

/// Header line plus one row per record. Failed trials leave the measured
/// fields empty.
inline void write_csv(const ExperimentResult& res, std::ostream& out) {
  out << "cell,trial,seed,n,p,status";
  for (const auto& c : res.columns) out << ',' << c;
  out << '\n';
  for (const auto& r : res.records) {
    out << r.cell << ',' << r.trial << ',' << r.seed << ',' << r.n << ',' << format_double(r.p)
        << ',' << (r.ok ? "ok" : "budget");
    for (std::size_t k = 0; k < res.columns.size(); ++k) {
      out << ',';
      if (r.ok) out << format_double(r.values[k]);
    }
    out << '\n';
  }
}

inline json summary_json(const ExperimentResult& res) {
  json cells = json::array();
  for (const auto& c : res.cells) {
    json stats = json::object();
    for (const auto& [name, s] : c.stats) stats[name] = detail::stats_json(s);
    cells.push_back({{"n", c.n},
                     {"p", c.p},
                     {"ok", c.ok},
                     {"failed", c.failed},
                     {"stats", stats},
                     {"report", c.report}});
  }
  return json{{"config", res.config.to_json()},
              {"budget_exhausted", res.budget_exhausted},
              {"cells", cells}};
}

inline void write_json(const ExperimentResult& res, std::ostream& out) {
  json j = summary_json(res);
  j["columns"] = res.columns;
  json recs = json::array();
  for (const auto& r : res.records) {
    json row{{"cell", r.cell}, {"trial", r.trial}, {"seed", r.seed},
             {"n", r.n},       {"p", r.p},         {"status", r.ok ? "ok" : "budget"}};
    for (std::size_t k = 0; k < res.columns.size(); ++k) {
      row[res.columns[k]] = r.ok ? json(r.values[k]) : json(nullptr);
    }
    recs.push_back(std::move(row));
  }
  j["records"] = std::move(recs);
  out << j.dump(2) << '\n';
}

}  // namespace tgraph
