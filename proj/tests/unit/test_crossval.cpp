#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>

#include "stratcv/crossval.hpp"
#include "stratcv/csv.hpp"
#include "stratcv/datagen.hpp"
#include "stratcv/partition.hpp"
#include "unit/fixtures.hpp"

namespace stratcv {
namespace {

using testing::make_fed;
using testing::make_record;

std::vector<std::uint64_t> sorted_ids(const std::vector<std::vector<Record>>& sets) {
  std::vector<std::uint64_t> ids;
  for (const auto& s : sets)
    for (const auto& r : s) ids.push_back(r.id.value);
  std::sort(ids.begin(), ids.end());
  return ids;
}

TEST(MergeFolds, SingleHospital) {
  const auto fed = make_fed({{make_record(0, 0), make_record(1, 1), make_record(2, 2)}});
  const auto folds = merge_global_folds(fed, FoldAssignment{2, {{1, 0, 1}}});
  ASSERT_EQ(folds.size(), 2u);
  ASSERT_EQ(folds[0].size(), 1u);
  EXPECT_EQ(folds[0][0].id.value, 1u);
  ASSERT_EQ(folds[1].size(), 2u);
  EXPECT_EQ(folds[1][0].id.value, 0u);
  EXPECT_EQ(folds[1][1].id.value, 2u);
}

TEST(MergeFolds, PreservesRecordMultiset) {
  const auto fed = testing::duplicated_dataset(2, 600, 150, 4);
  Rng rng(1);
  const auto folds = merge_global_folds(fed, random_partition(fed, 5, rng));
  std::size_t total = 0;
  for (const auto& f : folds) total += f.size();
  EXPECT_EQ(total, fed.total_records());
  EXPECT_EQ(sorted_ids(folds), sorted_ids(fed.hospitals));
}

TEST(Accuracy, Cases) {
  const std::vector<int> y{0, 1, 0, 1};
  EXPECT_EQ(accuracy(y, y), 1.0);
  EXPECT_EQ(accuracy(y, std::vector<int>{0, 1, 1, 0}), 0.5);
  const std::vector<int> p{1, 1, 0, 0};
  std::vector<int> flipped;
  for (int v : p) flipped.push_back(1 - v);
  EXPECT_EQ(accuracy(y, p) + accuracy(y, flipped), 1.0);
  EXPECT_THROW(accuracy({}, {}), InvalidArgument);
  EXPECT_THROW(accuracy(y, std::vector<int>{0}), InvalidArgument);
}

TEST(RunCv, ThresholdFunctionIsLearned) {
  const GenerativeModel m = testing::default_model(1);
  Rng rng(3);
  auto records = generate_records(m, 1000, rng);
  for (auto& r : records) r.y = r.x[0] > 0.2 ? 1 : 0;
  Rng prng(4);
  const auto [fed, folds] = unbiased_partition(records, 3, 5, prng);
  TrainConfig cfg;
  cfg.rounds = 10;
  const CvResult res = run_cv(fed, folds, cfg);
  EXPECT_GE(res.mean_valid, 0.99);
  EXPECT_EQ(res.train_curve.size(), 10u);
  EXPECT_EQ(res.valid_curve.size(), 10u);
  EXPECT_EQ(res.fold_importances.size(), 5u);
}

TEST(RunCv, IdenticalFoldsGiveIdenticalCurves) {
  const GenerativeModel m = testing::default_model(2);
  Rng rng(5);
  const auto records = generate_records(m, 300, rng);
  const auto fed = make_fed({records, records});
  FoldAssignment folds{2, {std::vector<std::size_t>(300, 0), std::vector<std::size_t>(300, 1)}};
  TrainConfig cfg;
  cfg.rounds = 12;
  const CvResult res = run_cv(fed, folds, cfg);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(res.fold_train_curves[i], res.fold_valid_curves[i]);
  EXPECT_EQ(res.train_curve, res.valid_curve);
}

TEST(RunCv, MeansAreUnweightedAndDeterministic) {
  const auto fed = testing::duplicated_dataset(3, 700, 100, 3);
  Rng rng(6);
  const auto folds = random_partition(fed, 4, rng);
  TrainConfig cfg;
  cfg.rounds = 8;
  const CvResult a = run_cv(fed, folds, cfg);
  const CvResult b = run_cv(fed, folds, cfg);
  double mean = 0.0;
  for (double v : a.fold_valid_final) mean += v / 4.0;
  EXPECT_NEAR(a.mean_valid, mean, 1e-15);
  EXPECT_EQ(a.valid_curve.back(), a.mean_valid);
  EXPECT_EQ(a.fold_valid_curves, b.fold_valid_curves);
  EXPECT_EQ(a.fold_importances, b.fold_importances);
  const auto imp = a.mean_importance();
  double s = 0.0;
  for (double v : imp) s += v;
  EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(RunCv, RelabelingFoldsKeepsTrainingCurves) {
  const GenerativeModel m = testing::default_model(4);
  Rng rng(7);
  const auto records = generate_records(m, 600, rng);
  Rng prng(8);
  const auto [fed, folds] = unbiased_partition(records, 2, 3, prng);
  FoldAssignment permuted = folds;
  const std::size_t perm[] = {2, 0, 1};
  for (auto& h : permuted.folds)
    for (auto& f : h) f = perm[f];
  TrainConfig cfg;
  cfg.rounds = 10;
  const CvResult a = run_cv(fed, folds, cfg);
  const CvResult b = run_cv(fed, permuted, cfg);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a.fold_train_curves[i], b.fold_train_curves[perm[i]]);
    EXPECT_EQ(a.fold_valid_curves[i], b.fold_valid_curves[perm[i]]);
  }
}

TEST(RunCv, EmptyFoldIsNamed) {
  const auto fed = make_fed({{make_record(0, 0), make_record(1, 1)}});
  FoldAssignment folds{3, {{0, 2}}};
  try {
    run_cv(fed, folds, TrainConfig{});
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("fold 1"), std::string::npos);
  }
}

TEST(RunCv, UnbiasedStaysBelowOptimalAccuracy) {
  const GenerativeModel m = testing::default_model(1);
  Rng rng(9);
  const auto records = generate_records(m, 10000, rng);
  const auto [fed, folds] = unbiased_partition(records, 5, 5, rng);
  const CvResult res = run_cv(fed, folds, TrainConfig{});

  const std::size_t n_mc = 100000;
  const auto xs = sample_covariates(m.covariance, m.mu, n_mc, rng);
  double s1 = 0.0, s2 = 0.0;
  for (const auto& x : xs) {
    const double p = sigmoid(log_odds(x, m.params));
    const double v = std::max(p, 1.0 - p);
    s1 += v;
    s2 += v * v;
  }
  const double opt = s1 / n_mc;
  const double se = std::sqrt((s2 / n_mc - opt * opt) / n_mc);
  EXPECT_LT(res.mean_valid, opt + 2.0 * se);
}

TEST(RunCv, CsvExports) {
  const auto fed = testing::duplicated_dataset(5, 200, 20, 2);
  Rng rng(2);
  TrainConfig cfg;
  cfg.rounds = 3;
  const CvResult res = run_cv(fed, random_partition(fed, 2, rng), cfg);
  const auto dir = std::filesystem::temp_directory_path() / "stratcv_cv_test";
  save_cv_curves_csv(res, dir / "curves.csv");
  save_cv_summary_csv(res, dir / "summary.csv");
  const std::string curves = csv::read_file(dir / "curves.csv");
  EXPECT_EQ(curves.substr(0, curves.find('\n')), "iteration,fold,phase,accuracy");
  EXPECT_EQ(std::count(curves.begin(), curves.end(), '\n'), 1 + (2 + 1) * 2 * 3);
  const std::string summary = csv::read_file(dir / "summary.csv");
  EXPECT_EQ(summary.substr(0, summary.find('\n')),
            "fold,final_train,final_valid,importance_x1,importance_x2,importance_x3,importance_x4,"
            "importance_x5,importance_x6,importance_x7,importance_x8,importance_x9,importance_x10");
  EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 4);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace stratcv
