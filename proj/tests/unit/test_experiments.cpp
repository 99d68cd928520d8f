#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "stratcv/commands.hpp"
#include "stratcv/csv.hpp"
#include "stratcv/experiments.hpp"

namespace stratcv {
namespace {

namespace fs = std::filesystem;

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.n_gen = 400;
  c.n_dup = 80;
  c.train.rounds = 6;
  c.n_sims = 3;
  c.n_datasets = 3;
  c.n_mc = 2000;
  return c;
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("stratcv_exp_" + name);
  fs::remove_all(d);
  return d;
}

TEST(ParallelFor, VisitsEachIndexOnce) {
  for (std::size_t threads : {1u, 3u, 8u}) {
    std::vector<std::atomic<int>> hits(50);
    parallel_for(50, threads, [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
  parallel_for(0, 4, [](std::size_t) { FAIL(); });
}

TEST(ParallelFor, RethrowsWorkerException) {
  EXPECT_THROW(parallel_for(20, 4,
                            [](std::size_t i) {
                              if (i == 7) throw InvalidArgument("boom");
                            }),
               InvalidArgument);
}

TEST(LearningCurves, SchemaAndDeterminism) {
  const ExperimentConfig c = small_config();
  const LearningCurves a = exp_learning_curves(c);
  const LearningCurves b = exp_learning_curves(c, RunOptions{3, {}});
  EXPECT_EQ(a.rows.size(), 3u * 2u * 6u);
  const std::string csv = learning_curves_csv(a);
  EXPECT_EQ(csv, learning_curves_csv(b));
  EXPECT_EQ(learning_curves_per_fold_csv(a), learning_curves_per_fold_csv(b));
  EXPECT_EQ(lines(csv), 1u + 3u * 2u * 6u + 1u);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "iteration,strategy,phase,accuracy");
  EXPECT_NE(csv.find("\n0,optimal,oracle,"), std::string::npos);
  EXPECT_EQ(a.results[2].first, "stratified_x1");
  EXPECT_GE(a.optimal_accuracy, 0.5);
}

TEST(BiasDistribution, RowsPerSimulation) {
  const ExperimentConfig c = small_config();
  const auto rows = exp_bias_distribution(c);
  ASSERT_EQ(rows.size(), 3u * 12u);
  EXPECT_EQ(rows[0].strategy, "unbiased");
  EXPECT_EQ(rows[1].strategy, "random");
  EXPECT_EQ(rows[11].strategy, "stratified_x10");
  EXPECT_EQ(rows[12].sim, 1u);
  EXPECT_EQ(bias_distribution_csv(rows), bias_distribution_csv(exp_bias_distribution(c, RunOptions{8, {}})));
}

TEST(ImportanceCorrelation, SamplesAndSummary) {
  const ExperimentConfig c = small_config();
  const ImportanceCorrelation ic = exp_importance_correlation(c);
  ASSERT_EQ(ic.samples.size(), 30u);
  for (const auto& s : ic.samples) {
    EXPECT_GE(s.importance, 0.0);
    EXPECT_LE(s.importance, 1.0);
    if (!s.failure) {
      EXPECT_GT(s.accuracy_ratio, 0.0);
    }
  }
  EXPECT_EQ(ic.samples[13].dataset_id, 1u);
  EXPECT_EQ(ic.samples[13].covariate, 4u);
  const ImportanceCorrelation par = exp_importance_correlation(c, RunOptions{4, {}});
  EXPECT_EQ(importance_correlation_csv(ic), importance_correlation_csv(par));
  EXPECT_EQ(importance_summary(ic), importance_summary(par));
  EXPECT_EQ(importance_summary(ic).rfind("pearson_r=", 0), 0u);
}

TEST(ImportanceCorrelation, ConstantImportanceIsReported) {
  ImportanceCorrelation ic;
  for (std::size_t d = 0; d < 2; ++d) {
    for (std::size_t c = 1; c <= 10; ++c) ic.samples.push_back({d, c, 0.1, 0.9 + 0.01 * c, std::nullopt});
  }
  finish_correlation(ic);
  EXPECT_FALSE(ic.pearson_r);
  EXPECT_EQ(importance_summary(ic), "pearson_r=error:undefined-correlation\n");
  EXPECT_EQ(lines(importance_correlation_csv(ic)), 21u);
}

TEST(ImportanceCorrelation, AntiLinearRows) {
  ImportanceCorrelation ic;
  for (std::size_t i = 0; i < 20; ++i) {
    ic.samples.push_back({i, 1, 0.05 * i, 1.0 - 0.02 * i, std::nullopt});
  }
  ic.samples.push_back({20, 1, 0.3, std::nan(""), std::string("degenerate-stratification: x")});
  finish_correlation(ic);
  ASSERT_TRUE(ic.pearson_r);
  EXPECT_NEAR(*ic.pearson_r, -1.0, 1e-12);
}

TEST(Commands, OracleGenAudit) {
  const fs::path dir = fresh_dir("cmds");
  ExperimentConfig c = small_config();
  std::ostringstream log;
  const double acc = cmd_oracle(c, dir, log);
  EXPECT_EQ(csv::read_file(dir / "oracle.txt"), log.str());
  EXPECT_EQ(log.str().rfind("optimal_accuracy=", 0), 0u);
  EXPECT_GT(acc, 0.5);

  cmd_gen(c, 10, dir / "a", log);
  cmd_gen(c, 10, dir / "b", log);
  for (const char* f : {"dataset_original.csv", "dataset.csv", "folds_unbiased.csv", "folds_random.csv",
                        "folds_stratified_x10.csv", "config.json"}) {
    EXPECT_EQ(csv::read_file(dir / "a" / f), csv::read_file(dir / "b" / f)) << f;
  }

  std::ostringstream strat;
  const auto ok = cmd_audit(dir / "a" / "dataset.csv", dir / "a" / "folds_stratified_x10.csv", strat);
  EXPECT_TRUE(*ok.def3_satisfied);
  EXPECT_NE(strat.str().find("def3: satisfied"), std::string::npos);
  EXPECT_NE(strat.str().find("def2: violated"), std::string::npos);

  std::ostringstream rnd;
  cmd_audit(dir / "a" / "dataset.csv", dir / "a" / "folds_random.csv", rnd);
  EXPECT_NE(rnd.str().find("def3: violated"), std::string::npos);

  std::ostringstream none;
  cmd_audit(dir / "a" / "dataset_original.csv", std::nullopt, none);
  EXPECT_EQ(none.str(), "def1: satisfied\ndef2: satisfied\ndef3: not checked (no folds)\n");
  fs::remove_all(dir);
}

TEST(Commands, FigureOutputsAreReproducible) {
  const fs::path dir = fresh_dir("figs");
  ExperimentConfig c = small_config();
  c.n_datasets = 2;
  c.n_sims = 2;
  std::ostringstream log;
  for (const char* run : {"1", "2"}) {
    const RunOptions opts{run[0] == '1' ? 1u : 8u, {}};
    cmd_fig2(c, opts, dir / run, log);
    cmd_fig3(c, opts, dir / run, log);
    cmd_fig4(c, opts, dir / run, log);
  }
  for (const char* f : {"fig2.csv", "fig2_per_fold.csv", "fig3.csv", "fig4.csv", "fig4_summary.txt", "config.json"}) {
    EXPECT_EQ(csv::read_file(dir / "1" / f), csv::read_file(dir / "2" / f)) << f;
  }
  fs::remove_all(dir);
}

}  // namespace
}  // namespace stratcv
