#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "stratcv/config.hpp"
#include "stratcv/crossval.hpp"
#include "stratcv/datagen.hpp"
#include "stratcv/federation.hpp"
#include "stratcv/partition.hpp"

namespace stratcv {

struct RunOptions {
  std::size_t threads = 1;
  WarningSink warn;
};

/// Runs fn(0..n-1) on up to `threads` workers. fn must write only to its
/// own output slot; the first exception is rethrown after all workers stop.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

/// The configured covariance with a Haar basis drawn from
/// stream(master_seed, "sigma").
GenerativeModel reference_model(const ExperimentConfig& cfg);

/// One draw of the federated setting: the duplicate-free dataset with its
/// random folds, and the same dataset after duplicate injection.
struct Simulation {
  FederatedDataset original;
  FoldAssignment unbiased_folds;
  FederatedDataset duplicated;
};

Simulation simulate(const GenerativeModel& model, const ExperimentConfig& cfg, Rng& rng);

struct LearningCurveRow {
  std::size_t iteration = 0;
  std::string strategy;
  std::string phase;
  double accuracy = 0.0;
};

struct LearningCurves {
  double optimal_accuracy = 0.0;
  /// Strategy name -> cross-validation result, in output order.
  std::vector<std::pair<std::string, CvResult>> results;
  std::vector<LearningCurveRow> rows;
};

/// One simulation cross-validated three ways: unbiased, random and
/// stratified along cfg.fig2_covariate. Rows hold the fold-mean curves.
LearningCurves exp_learning_curves(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// iteration,strategy,phase,accuracy plus a final 0,optimal,oracle row.
std::string learning_curves_csv(const LearningCurves& lc);
/// strategy,fold,iteration,phase,accuracy for every fold.
std::string learning_curves_per_fold_csv(const LearningCurves& lc);

struct BiasRow {
  std::size_t sim = 0;
  std::string strategy;
  double accuracy = 0.0;
};

/// cfg.n_sims simulations under one fixed generative model; each one is
/// cross-validated unbiased, random and stratified along x1..x10.
std::vector<BiasRow> exp_bias_distribution(const ExperimentConfig& cfg,
                                           const RunOptions& opts = {});
std::string bias_distribution_csv(const std::vector<BiasRow>& rows);

struct Fig4Sample {
  std::size_t dataset_id = 0;
  std::size_t covariate = 0;
  /// Normalized importance of the covariate in the unbiased model.
  double importance = 0.0;
  /// Stratified over unbiased validation accuracy; NaN when the stratified
  /// run failed.
  double accuracy_ratio = 0.0;
  std::optional<std::string> failure;
};

struct ImportanceCorrelation {
  std::vector<Fig4Sample> samples;
  std::optional<double> pearson_r;
  std::string error;  // set when pearson_r is empty
};

/// cfg.n_datasets random generative models (eigenvalues U[1,3], Haar basis,
/// outcome parameters U[-5,5]); for each, an unbiased run and ten
/// stratified runs on the duplicated data.
ImportanceCorrelation exp_importance_correlation(const ExperimentConfig& cfg,
                                                 const RunOptions& opts = {});
std::string importance_correlation_csv(const ImportanceCorrelation& ic);
std::string importance_summary(const ImportanceCorrelation& ic);

/// Recomputes the correlation over the non-failed samples.
void finish_correlation(ImportanceCorrelation& ic);

}  // namespace stratcv
