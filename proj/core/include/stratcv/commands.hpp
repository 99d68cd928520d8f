#pragma once

#include <filesystem>
#include <optional>
#include <ostream>

#include "stratcv/config.hpp"
#include "stratcv/experiments.hpp"
#include "stratcv/federation.hpp"

namespace stratcv {

/// Entry points behind the CLI subcommands. Each writes its files under
/// out_dir (created if needed) and a short human-readable summary to log.

/// Prints "optimal_accuracy=<value>" and writes oracle.txt.
double cmd_oracle(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                  std::ostream& log);

/// Writes dataset_original.csv, dataset.csv (with duplicates),
/// folds_unbiased.csv, folds_random.csv and folds_stratified_x<c>.csv.
void cmd_gen(const ExperimentConfig& cfg, std::size_t stratify_covariate,
             const std::filesystem::path& out_dir, std::ostream& log);

/// Prints one "defN: satisfied|violated (...)" line per definition.
DedupReport cmd_audit(const std::filesystem::path& dataset,
                      const std::optional<std::filesystem::path>& folds, std::ostream& log);

/// fig2.csv, fig2_per_fold.csv, config.json.
LearningCurves cmd_fig2(const ExperimentConfig& cfg, const RunOptions& opts,
                        const std::filesystem::path& out_dir, std::ostream& log);

/// fig3.csv, config.json.
std::vector<BiasRow> cmd_fig3(const ExperimentConfig& cfg, const RunOptions& opts,
                              const std::filesystem::path& out_dir, std::ostream& log);

/// fig4.csv, fig4_summary.txt, config.json.
ImportanceCorrelation cmd_fig4(const ExperimentConfig& cfg, const RunOptions& opts,
                               const std::filesystem::path& out_dir, std::ostream& log);

void print_report(const DedupReport& report, std::ostream& log);

}  // namespace stratcv
