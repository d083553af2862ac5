#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "tgraph/experiment.hpp"

namespace tgraph {
namespace {

std::string csv_of(const ExperimentResult& res) {
  std::ostringstream out;
  write_csv(res, out);
  return out.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

ExperimentConfig config(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  cfg.master_seed = 1234;
  return cfg;
}

TEST(DeriveSeed, DistinctAcrossIndicesAndTags) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    for (std::uint64_t tag = 0; tag < 4; ++tag) seen.insert(derive_seed(7, i, tag));
  }
  EXPECT_EQ(seen.size(), 4000u);
  EXPECT_EQ(derive_seed(7, 3, 1), derive_seed(7, 3, 1));
  EXPECT_NE(derive_seed(7, 3, 1), derive_seed(8, 3, 1));
}

TEST(RunExperiment, RerunIsIdentical) {
  auto cfg = config(ExperimentKind::kCliqueScaling);
  cfg.n = {40, 60};
  cfg.c = {0.5, 1.2};
  cfg.trials = 5;
  EXPECT_EQ(csv_of(run_experiment(cfg)), csv_of(run_experiment(cfg)));
  cfg.trials = 1;
  EXPECT_EQ(run_experiment(cfg).records, run_experiment(cfg).records);
}

TEST(RunExperiment, ThreadCountDoesNotChangeOutput) {
  for (auto kind : {ExperimentKind::kCliqueScaling, ExperimentKind::kDominance,
                    ExperimentKind::kNegativeCorr, ExperimentKind::kBpStats}) {
    auto cfg = config(kind);
    cfg.n = {50};
    if (kind == ExperimentKind::kBpStats) {
      cfg.theta = {0.02, 0.04};
    } else {
      cfg.c = {0.8};
    }
    cfg.trials = 40;
    cfg.threads = 1;
    const auto one = csv_of(run_experiment(cfg));
    cfg.threads = 8;
    EXPECT_EQ(csv_of(run_experiment(cfg)), one) << to_string(kind);
  }
}

TEST(WriteCsv, SchemaAndFloatFormat) {
  auto cfg = config(ExperimentKind::kNegativeCorr);
  cfg.n = {30};
  cfg.p = {0.1};
  cfg.m = 2;
  cfg.trials = 4;
  const auto res = run_experiment(cfg);
  const auto lines = lines_of(csv_of(res));
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], "cell,trial,seed,n,p,status,a1,b1,witness_lhs,witness_rhs");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    EXPECT_EQ(std::count(lines[i].begin(), lines[i].end(), ','), 9);
    EXPECT_NE(lines[i].find(",30,0.10000000000000001,ok,"), std::string::npos) << lines[i];
  }
}

TEST(WriteJson, EchoesConfigAndRecords) {
  auto cfg = config(ExperimentKind::kBpStats);
  cfg.n = {10};
  cfg.theta = {0.1};
  cfg.trials = 3;
  std::ostringstream out;
  write_json(run_experiment(cfg), out);
  const auto j = json::parse(out.str());
  EXPECT_EQ(j["config"]["kind"], "bp-stats");
  EXPECT_EQ(j["records"].size(), 3u);
  EXPECT_EQ(j["columns"], (json{"total", "depth", "z1"}));
  EXPECT_TRUE(j["records"][0].contains("total"));
  EXPECT_EQ(ExperimentConfig::from_json(j["config"]).to_json(), j["config"]);
}

TEST(ExperimentConfig, JsonParsing) {
  const auto cfg = ExperimentConfig::from_json(
      json::parse(R"({"kind":"clique-scaling","n":[100,200],"c":0.5,"trials":3})"));
  EXPECT_EQ(cfg.kind, ExperimentKind::kCliqueScaling);
  EXPECT_EQ(cfg.n, (std::vector<int>{100, 200}));
  EXPECT_EQ(cfg.c, std::vector<double>{0.5});
  EXPECT_EQ(cfg.cells().size(), 2u);
  EXPECT_DOUBLE_EQ(cfg.cells()[1].second, 0.5 * std::log(200.0) / 200);

  EXPECT_THROW(ExperimentConfig::from_json(json::parse(R"({"bogus":1})")), InvalidArgument);
  EXPECT_THROW(ExperimentConfig::from_json(json::parse(R"({"kind":"nope"})")), InvalidArgument);
  EXPECT_THROW(ExperimentConfig::from_json(json::parse(R"({"trials":"many"})")), InvalidArgument);
  EXPECT_THROW(ExperimentConfig::from_json(json::parse("[1,2]")), InvalidArgument);
}

TEST(ExperimentConfig, Validation) {
  auto cfg = config(ExperimentKind::kCliqueScaling);
  cfg.n = {100};
  cfg.c = {0.5};
  EXPECT_NO_THROW(cfg.validate());
  auto bad = cfg;
  bad.trials = 0;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = cfg;
  bad.c = {60.0};  // p > 1
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = cfg;
  bad.c.clear();
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = cfg;
  bad.n.clear();
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = cfg;
  bad.format = "xml";
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = config(ExperimentKind::kWalkTau);
  bad.n = {3};
  bad.paths = {{0, 1}};
  bad.l_max = 3;
  EXPECT_THROW(bad.validate(), InvalidArgument);
}

TEST(BpStats, MeanTotalIsExpOfRate) {
  auto cfg = config(ExperimentKind::kBpStats);
  cfg.n = {20};
  cfg.theta = {0.05};
  cfg.trials = 100'000;
  const auto res = run_experiment(cfg);
  const auto& report = res.cells[0].report;
  EXPECT_TRUE(report["mean_within_3se"].get<bool>()) << report.dump();
  EXPECT_TRUE(report["z1_within_3se"].get<bool>());
  EXPECT_NEAR(report["expected_total"].get<double>(), std::exp(1.0), 1e-12);
}

TEST(MomentCheck, GenerationMeans) {
  auto cfg = config(ExperimentKind::kMomentCheck);
  cfg.n = {20};
  cfg.theta = {0.05};
  cfg.trials = 40'000;
  const auto res = run_experiment(cfg);
  for (const auto& g : res.cells[0].report["generations"]) {
    EXPECT_TRUE(g["within_3se"].get<bool>()) << g.dump();
    EXPECT_TRUE(g["below_bound"].get<bool>()) << g.dump();
  }
}

TEST(CliqueCensus, SingletonsAndExponent) {
  auto cfg = config(ExperimentKind::kCliqueCensus);
  cfg.n = {50};
  cfg.c = {0.5};
  cfg.m = 1;
  cfg.trials = 20;
  const auto res = run_experiment(cfg);
  const auto& s = res.cells[0].stat("census");
  EXPECT_EQ(s.mean, 50.0);
  EXPECT_EQ(s.std_error, 0.0);

  cfg.m = 4;
  EXPECT_DOUBLE_EQ(run_experiment(cfg).cells[0].report["exponent"].get<double>(), -2.0);

  cfg.m = 3;
  cfg.n = {120};
  cfg.trials = 30;
  const auto triangles = run_experiment(cfg);
  for (const auto& r : triangles.records) EXPECT_GE(r.values[2], r.values[1]);
}

TEST(CliqueScaling, ZeroProbabilityGivesSingletons) {
  auto cfg = config(ExperimentKind::kCliqueScaling);
  cfg.n = {25};
  cfg.p = {0.0};
  cfg.trials = 10;
  const auto res = run_experiment(cfg);
  EXPECT_EQ(res.cells[0].stat("max_clique").max, 1.0);
  EXPECT_EQ(res.cells[0].stat("max_clique").min, 1.0);
}

TEST(CliqueScaling, BudgetFailuresAreCountedNotFatal) {
  auto cfg = config(ExperimentKind::kCliqueScaling);
  cfg.n = {120};
  cfg.c = {2.0};
  cfg.mode = "exact";
  cfg.node_budget = 1;
  cfg.trials = 4;
  const auto res = run_experiment(cfg);
  EXPECT_EQ(res.cells[0].failed, 4);
  EXPECT_TRUE(res.budget_exhausted);
  EXPECT_NE(csv_of(res).find(",budget,,,"), std::string::npos);
}

TEST(NegativeCorr, ZeroProbabilityHasZeroCovariance) {
  auto cfg = config(ExperimentKind::kNegativeCorr);
  cfg.n = {40};
  cfg.p = {0.0};
  cfg.trials = 50;
  const auto res = run_experiment(cfg);
  const auto& r = res.cells[0].report;
  EXPECT_EQ(r["covariance"].get<double>(), 0.0);
  EXPECT_EQ(r["mean_a_q"].get<double>(), 1.0);
}

TEST(NegativeCorr, IndependentSurrogateCentredOnZero) {
  auto cfg = config(ExperimentKind::kNegativeCorr);
  cfg.n = {100};
  cfg.c = {1.0};
  cfg.surrogate = true;
  cfg.trials = 5000;
  const auto res = run_experiment(cfg);
  const auto& r = res.cells[0].report;
  EXPECT_LE(std::abs(r["covariance"].get<double>()), 3 * r["std_error"].get<double>()) << r.dump();
}

TEST(Dominance, TinyProbabilityIsTrivial) {
  auto cfg = config(ExperimentKind::kDominance);
  cfg.n = {50};
  cfg.p = {1e-9};
  cfg.trials = 200;
  const auto res = run_experiment(cfg);
  EXPECT_EQ(res.cells[0].stat("a1").max, 1.0);
  EXPECT_TRUE(res.cells[0].report["pathwise_pass"].get<bool>());
  EXPECT_TRUE(res.cells[0].report["ecdf_pass"].get<bool>());
}

TEST(Dominance, ModerateRatePasses) {
  auto cfg = config(ExperimentKind::kDominance);
  cfg.n = {100};
  cfg.c = {1.0};
  cfg.trials = 2000;
  const auto res = run_experiment(cfg);
  const auto& r = res.cells[0].report;
  EXPECT_TRUE(r["pathwise_pass"].get<bool>());
  EXPECT_TRUE(r["ecdf_pass"].get<bool>()) << r.dump();
}

TEST(WalkTau, ReportMatchesExactTails) {
  auto cfg = config(ExperimentKind::kWalkTau);
  cfg.n = {4};
  cfg.paths = {{0, 1, 2}, {0, 1, 3}, {2, 2, 2}};
  cfg.l_max = 3;
  cfg.trials = 50'000;
  const auto res = run_experiment(cfg);
  const auto& tails = res.cells[0].report["tails"];
  ASSERT_EQ(tails.size(), 4u);
  EXPECT_EQ(tails[2]["exact_num"], 2);
  EXPECT_EQ(tails[2]["exact_den"], 16);
  for (const auto& t : tails) {
    EXPECT_TRUE(t["mc_matches_exact"].get<bool>()) << t.dump();
    EXPECT_TRUE(t["exact_within_bound"].get<bool>());
  }
}

}  // namespace
}  // namespace tgraph
