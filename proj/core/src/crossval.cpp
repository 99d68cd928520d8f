#include "stratcv/crossval.hpp"

#include <string>

#include "stratcv/csv.hpp"

namespace stratcv {

std::vector<double> CvResult::mean_importance() const {
  if (fold_importances.empty()) return {};
  std::vector<double> mean(fold_importances.front().size(), 0.0);
  for (const auto& imp : fold_importances)
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += imp[j];
  for (double& v : mean) v /= static_cast<double>(fold_importances.size());
  return mean;
}

std::vector<std::vector<Record>> merge_global_folds(const FederatedDataset& fed,
                                                    const FoldAssignment& assignment) {
  assignment.validate(fed);
  std::vector<std::vector<Record>> folds(assignment.k);
  for (std::size_t h = 0; h < fed.num_hospitals(); ++h) {
    for (std::size_t i = 0; i < fed.hospitals[h].size(); ++i) {
      folds[assignment.folds[h][i]].push_back(fed.hospitals[h][i]);
    }
  }
  return folds;
}

LabeledData to_labeled(std::span<const Record> records) {
  LabeledData d;
  d.x = FeatureMatrix(records.size(), kNumCovariates);
  d.y.resize(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto row = d.x.row(i);
    std::copy(records[i].x.begin(), records[i].x.end(), row.begin());
    d.y[i] = records[i].y;
  }
  return d;
}

CvResult run_cv(const FederatedDataset& fed, const FoldAssignment& assignment,
                const TrainConfig& config, const WarningSink& warn) {
  config.validate();
  const auto folds = merge_global_folds(fed, assignment);
  const std::size_t k = folds.size();
  if (k < 2) throw InvalidArgument("run_cv: need at least two folds");
  for (std::size_t i = 0; i < k; ++i) {
    if (folds[i].empty()) throw InvalidArgument("run_cv: global fold " + std::to_string(i) + " is empty");
  }

  CvResult res;
  res.k = k;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Record> train_records;
    for (std::size_t j = 0; j < k; ++j) {
      if (j != i) train_records.insert(train_records.end(), folds[j].begin(), folds[j].end());
    }
    const LabeledData train_set = to_labeled(train_records);
    const LabeledData valid_set = to_labeled(folds[i]);
    const LabeledData* evals[] = {&valid_set};
    TrainResult tr = train(train_set, config, evals, warn);

    res.fold_train_final.push_back(tr.train_curve.back());
    res.fold_valid_final.push_back(tr.eval_curves[0].back());
    res.fold_importances.push_back(feature_importance(tr.model));
    res.fold_train_curves.push_back(std::move(tr.train_curve));
    res.fold_valid_curves.push_back(std::move(tr.eval_curves[0]));
  }

  const double kd = static_cast<double>(k);
  res.train_curve.assign(config.rounds, 0.0);
  res.valid_curve.assign(config.rounds, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t r = 0; r < config.rounds; ++r) {
      res.train_curve[r] += res.fold_train_curves[i][r];
      res.valid_curve[r] += res.fold_valid_curves[i][r];
    }
    res.mean_train += res.fold_train_final[i];
    res.mean_valid += res.fold_valid_final[i];
  }
  for (double& v : res.train_curve) v /= kd;
  for (double& v : res.valid_curve) v /= kd;
  res.mean_train /= kd;
  res.mean_valid /= kd;
  return res;
}

double accuracy(std::span<const int> labels, std::span<const int> predictions) {
  if (labels.empty() || labels.size() != predictions.size()) {
    throw InvalidArgument("accuracy: need equal nonzero lengths");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) hits += labels[i] == predictions[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

void save_cv_curves_csv(const CvResult& result, const std::filesystem::path& path) {
  csv::Writer w({"iteration", "fold", "phase", "accuracy"});
  auto emit = [&w](const std::vector<double>& curve, const std::string& fold, const char* phase) {
    for (std::size_t r = 0; r < curve.size(); ++r) {
      w.field(r + 1).field(fold).field(phase).field(curve[r]);
      w.end_row();
    }
  };
  for (std::size_t i = 0; i < result.k; ++i) {
    emit(result.fold_train_curves[i], std::to_string(i), "train");
    emit(result.fold_valid_curves[i], std::to_string(i), "valid");
  }
  emit(result.train_curve, "mean", "train");
  emit(result.valid_curve, "mean", "valid");
  w.save(path);
}

void save_cv_summary_csv(const CvResult& result, const std::filesystem::path& path) {
  std::vector<std::string> header{"fold", "final_train", "final_valid"};
  const std::size_t d = result.fold_importances.empty() ? 0 : result.fold_importances[0].size();
  for (std::size_t j = 1; j <= d; ++j) header.push_back("importance_x" + std::to_string(j));
  csv::Writer w(header);
  for (std::size_t i = 0; i < result.k; ++i) {
    w.field(i).field(result.fold_train_final[i]).field(result.fold_valid_final[i]);
    for (double v : result.fold_importances[i]) w.field(v);
    w.end_row();
  }
  w.field(std::string_view("mean")).field(result.mean_train).field(result.mean_valid);
  for (double v : result.mean_importance()) w.field(v);
  w.end_row();
  w.save(path);
}

}  // namespace stratcv
