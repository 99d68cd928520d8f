#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stratcv/error.hpp"

namespace stratcv {

/// Dense row-major matrix of real features.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Features plus binary labels.
struct LabeledData {
  FeatureMatrix x;
  std::vector<int> y;

  std::size_t size() const { return y.size(); }
};

struct TrainConfig {
  std::size_t rounds = 200;
  std::size_t max_depth = 3;
  double eta = 0.6;
  double reg_lambda = 1.0;
  double gamma = 0.0;
  double min_child_weight = 1.0;
  double base_score = 0.5;

  /// Throws InvalidArgument unless rounds >= 1, 0 < eta <= 1,
  /// 0 < base_score < 1 and the regularizers are non-negative.
  void validate() const;
};

/// Splits whose gain does not exceed this are treated as no split; it only
/// absorbs round-off in gains that are mathematically zero.
inline constexpr double kMinSplitGain = 1e-10;

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // x[feature] < threshold goes left
  int left = -1;
  int right = -1;
  double weight = 0.0;  // leaf output
  double gain = 0.0;  // split gain of internal nodes

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double value(std::span<const double> x) const;
  std::size_t depth() const;
  std::size_t num_leaves() const;
};

/// margin(x) = base_margin + eta * sum_t tree_t(x).
struct GbmModel {
  TrainConfig config;
  std::size_t num_features = 0;
  double base_margin = 0.0;
  std::vector<Tree> trees;
};

struct GradPair {
  double g = 0.0;
  double h = 0.0;
};

/// First and second derivative of the logistic loss in the margin.
GradPair logistic_grad_hess(double margin, int y);

/// Second-order gain 1/2 [GL^2/(HL+l) + GR^2/(HR+l) - G^2/(H+l)] - gamma.
double split_gain(double g_left, double h_left, double g_right, double h_right,
                  double reg_lambda, double gamma);

/// Leaf weight -G / (H + lambda).
double leaf_weight(double g_sum, double h_sum, double reg_lambda);

struct SplitCandidate {
  std::size_t feature = 0;
  double threshold = 0.0;
  double gain = 0.0;
};

/// Per-feature (value, row) pairs sorted by value, ties by row. Built once
/// per training set and shared by every tree.
class SortedColumns {
 public:
  struct Entry {
    double value;
    std::uint32_t row;
  };

  explicit SortedColumns(const FeatureMatrix& x);

  std::span<const Entry> column(std::size_t feature) const {
    return {entries_.data() + feature * rows_, rows_};
  }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Entry> entries_;
};

/// Exact greedy search over every feature and every midpoint between
/// consecutive distinct values. Admissible splits have gain above
/// kMinSplitGain and a hessian sum of at least min_child_weight on both
/// sides. Gains within a relative 1e-12 count as equal; ties resolve to the
/// lowest feature, then the lowest threshold.
std::optional<SplitCandidate> best_split(const FeatureMatrix& x,
                                         std::span<const GradPair> gh,
                                         const TrainConfig& config);
std::optional<SplitCandidate> best_split(const FeatureMatrix& x,
                                         std::span<const std::size_t> rows,
                                         std::span<const GradPair> gh,
                                         const TrainConfig& config);

/// Level-wise growth to config.max_depth (root at depth 0).
Tree build_tree(const FeatureMatrix& x, std::span<const GradPair> gh,
                const TrainConfig& config);
Tree build_tree(const FeatureMatrix& x, const SortedColumns& sorted,
                std::span<const GradPair> gh, const TrainConfig& config);

struct TrainResult {
  GbmModel model;
  /// Accuracy on the training set after each round.
  std::vector<double> train_curve;
  /// Accuracy on each eval set after each round.
  std::vector<std::vector<double>> eval_curves;
};

/// Fits config.rounds trees. Throws InvalidArgument on an empty training
/// set or a feature-count mismatch; a single-class training set is fitted
/// but reported through warn.
TrainResult train(const LabeledData& data, const TrainConfig& config,
                  std::span<const LabeledData* const> eval_sets = {},
                  const WarningSink& warn = {});

double predict_margin(const GbmModel& model, std::span<const double> x);

/// 1 iff the margin is strictly positive.
int predict_label(const GbmModel& model, std::span<const double> x);

/// Fraction of rows whose label (margin > 0) matches y.
double margin_accuracy(std::span<const double> margins, std::span<const int> y);

/// Per-feature sum of split gains over all trees, normalized to sum to one.
/// All zeros when the model has no split.
std::vector<double> feature_importance(const GbmModel& model);

/// Human-readable tree listing for debugging; not a stable format.
std::string dump_model(const GbmModel& model);

}  // namespace stratcv
