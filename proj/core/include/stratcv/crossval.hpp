#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "stratcv/boosting.hpp"
#include "stratcv/federation.hpp"
#include "stratcv/partition.hpp"

namespace stratcv {

struct CvResult {
  std::size_t k = 0;
  std::vector<double> fold_train_final;
  std::vector<double> fold_valid_final;
  /// Per-fold accuracy after each boosting round, [fold][round].
  std::vector<std::vector<double>> fold_train_curves;
  std::vector<std::vector<double>> fold_valid_curves;
  /// Unweighted means over folds, one entry per round.
  std::vector<double> train_curve;
  std::vector<double> valid_curve;
  double mean_valid = 0.0;
  double mean_train = 0.0;
  /// Normalized gain importance of each fold's model, [fold][feature].
  std::vector<std::vector<double>> fold_importances;

  /// Unweighted mean of the per-fold importances.
  std::vector<double> mean_importance() const;
};

/// Global fold i is the union of fold i of every hospital, in hospital
/// order.
std::vector<std::vector<Record>> merge_global_folds(const FederatedDataset& fed,
                                                    const FoldAssignment& assignment);

LabeledData to_labeled(std::span<const Record> records);

/// Trains on every global fold but i and validates on fold i, for each i.
/// Validation records that duplicate training records are kept. Throws
/// InvalidArgument naming the first empty fold.
CvResult run_cv(const FederatedDataset& fed, const FoldAssignment& assignment,
                const TrainConfig& config, const WarningSink& warn = {});

/// Fraction of positions where labels and predictions agree.
double accuracy(std::span<const int> labels, std::span<const int> predictions);

/// Curves as iteration,fold,phase,accuracy; fold is an index or "mean".
void save_cv_curves_csv(const CvResult& result, const std::filesystem::path& path);

/// fold,final_train,final_valid,importance_x1..importance_xd.
void save_cv_summary_csv(const CvResult& result, const std::filesystem::path& path);

}  // namespace stratcv
