#include "stratcv/commands.hpp"

#include <map>

#include "stratcv/csv.hpp"
#include "stratcv/stats.hpp"

namespace stratcv {

namespace {

void save_config(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  csv::write_file(out_dir / "config.json", to_json(cfg.scaled()));
}

}  // namespace

double cmd_oracle(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                  std::ostream& log) {
  const ExperimentConfig cfg = config.scaled();
  cfg.validate();
  const GenerativeModel model = reference_model(cfg);
  Rng rng = Rng::derive(cfg.master_seed, "oracle");
  const double acc = optimal_accuracy(model.covariance, model.mu, model.params, cfg.n_mc, rng);
  const std::string line = "optimal_accuracy=" + csv::format_double(acc) + "\n";
  csv::write_file(out_dir / "oracle.txt", line);
  log << line;
  return acc;
}

void cmd_gen(const ExperimentConfig& config, std::size_t stratify_covariate,
             const std::filesystem::path& out_dir, std::ostream& log) {
  const ExperimentConfig cfg = config.scaled();
  cfg.validate();
  const GenerativeModel model = reference_model(cfg);
  Rng rng = Rng::derive(cfg.master_seed, "gen");
  const Simulation sim = simulate(model, cfg, rng);
  const FoldAssignment random_folds = random_partition(sim.duplicated, cfg.k, rng);
  const FoldAssignment strat_folds = stratified_partition(
      sim.duplicated, compute_thresholds(sim.duplicated, stratify_covariate, cfg.k));

  save_dataset_csv(sim.original, out_dir / "dataset_original.csv");
  save_dataset_csv(sim.duplicated, out_dir / "dataset.csv");
  save_folds_csv(sim.original, sim.unbiased_folds, out_dir / "folds_unbiased.csv");
  save_folds_csv(sim.duplicated, random_folds, out_dir / "folds_random.csv");
  save_folds_csv(sim.duplicated, strat_folds,
                 out_dir / ("folds_stratified_x" + std::to_string(stratify_covariate) + ".csv"));
  save_config(config, out_dir);

  std::size_t positives = 0;
  for (const auto& h : sim.original.hospitals)
    for (const auto& r : h) positives += static_cast<std::size_t>(r.y);
  log << "records=" << sim.duplicated.total_records() << " original=" << sim.original.total_records()
      << " duplicates=" << sim.duplicated.n_duplicates << " positive_rate="
      << csv::format_double(static_cast<double>(positives) /
                            static_cast<double>(sim.original.total_records()))
      << "\n";
}

void print_report(const DedupReport& report, std::ostream& log) {
  auto line = [&log](const char* name, bool ok, std::size_t n) {
    log << name << ": " << (ok ? "satisfied" : "violated");
    if (!ok) log << " (" << n << " individuals)";
    log << "\n";
  };
  line("def1", report.def1_satisfied, report.def1_violations.size());
  line("def2", report.def2_satisfied, report.def2_violations.size());
  if (report.def3_satisfied) {
    line("def3", *report.def3_satisfied, report.def3_violations.size());
  } else {
    log << "def3: not checked (no folds)\n";
  }
}

DedupReport cmd_audit(const std::filesystem::path& dataset,
                      const std::optional<std::filesystem::path>& folds, std::ostream& log) {
  const FederatedDataset fed = load_dataset_csv(dataset);
  DedupReport report;
  if (folds) {
    const FoldAssignment assignment = load_folds_csv(fed, *folds);
    report = audit(fed, &assignment);
  } else {
    report = audit(fed);
  }
  print_report(report, log);
  return report;
}

LearningCurves cmd_fig2(const ExperimentConfig& cfg, const RunOptions& opts,
                        const std::filesystem::path& out_dir, std::ostream& log) {
  LearningCurves lc = exp_learning_curves(cfg, opts);
  csv::write_file(out_dir / "fig2.csv", learning_curves_csv(lc));
  csv::write_file(out_dir / "fig2_per_fold.csv", learning_curves_per_fold_csv(lc));
  save_config(cfg, out_dir);
  log << "optimal_accuracy=" << csv::format_double(lc.optimal_accuracy) << "\n";
  for (const auto& [name, res] : lc.results) {
    log << name << ": final_train=" << csv::format_double(res.train_curve.back())
        << " final_valid=" << csv::format_double(res.valid_curve.back()) << "\n";
  }
  return lc;
}

std::vector<BiasRow> cmd_fig3(const ExperimentConfig& cfg, const RunOptions& opts,
                              const std::filesystem::path& out_dir, std::ostream& log) {
  std::vector<BiasRow> rows = exp_bias_distribution(cfg, opts);
  csv::write_file(out_dir / "fig3.csv", bias_distribution_csv(rows));
  save_config(cfg, out_dir);

  std::map<std::string, std::vector<double>> by_strategy;
  std::vector<std::string> order;
  for (const auto& r : rows) {
    if (!by_strategy.count(r.strategy)) order.push_back(r.strategy);
    by_strategy[r.strategy].push_back(r.accuracy);
  }
  for (const auto& name : order) {
    const auto& v = by_strategy[name];
    log << name << ": mean=" << csv::format_double(mean(v))
        << " sd=" << csv::format_double(sample_stddev(v)) << "\n";
  }
  return rows;
}

ImportanceCorrelation cmd_fig4(const ExperimentConfig& cfg, const RunOptions& opts,
                               const std::filesystem::path& out_dir, std::ostream& log) {
  ImportanceCorrelation ic = exp_importance_correlation(cfg, opts);
  csv::write_file(out_dir / "fig4.csv", importance_correlation_csv(ic));
  csv::write_file(out_dir / "fig4_summary.txt", importance_summary(ic));
  save_config(cfg, out_dir);
  std::size_t failures = 0;
  for (const auto& s : ic.samples) failures += s.failure ? 1 : 0;
  log << importance_summary(ic) << "samples=" << ic.samples.size() << " failed=" << failures << "\n";
  return ic;
}

}  // namespace stratcv
