// stratcv: duplicate-record leakage experiments for federated cross-validation.
//
//   stratcv oracle [--config PATH] [--seed U64] [--scale REAL] [--out DIR]
//   stratcv gen    [--config PATH] [--seed U64] [--scale REAL] [--out DIR] [--covariate N]
//   stratcv audit  --dataset PATH [--folds PATH]
//   stratcv fig2|fig3|fig4 [--config PATH] [--seed U64] [--scale REAL] [--out DIR] [--threads N]

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "stratcv/commands.hpp"
#include "stratcv/error.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> scale;
  std::string out = ".";
  std::size_t threads = 1;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_threads) {
  cmd->add_option("--config", f.config, "Experiment config (flat JSON object)")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "Master seed");
  cmd->add_option("--scale", f.scale, "Shrink counts and rounds by this factor")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", f.out, "Output directory");
  if (with_threads) {
    cmd->add_option("--threads", f.threads, "Worker threads")->check(CLI::PositiveNumber);
  }
}

stratcv::ExperimentConfig resolve(const CommonFlags& f) {
  stratcv::ExperimentConfig cfg =
      f.config.empty() ? stratcv::ExperimentConfig{} : stratcv::load_config(f.config);
  if (f.seed) cfg.master_seed = *f.seed;
  if (f.scale) cfg.scale = *f.scale;
  cfg.validate();
  return cfg;
}

stratcv::RunOptions run_options(const CommonFlags& f) {
  stratcv::RunOptions opts;
  opts.threads = f.threads;
  opts.warn = [](std::string_view msg) { std::cerr << "warning: " << msg << "\n"; };
  return opts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-validation leakage from duplicated records in federated data"};
  app.require_subcommand(1);

  CommonFlags oracle_f, gen_f, fig2_f, fig3_f, fig4_f;
  std::size_t gen_covariate = 10;
  std::string audit_dataset, audit_folds;

  auto* oracle = app.add_subcommand("oracle", "Monte Carlo optimal accuracy of the generative model");
  add_common(oracle, oracle_f, false);

  auto* gen = app.add_subcommand("gen", "Generate a federated dataset with duplicates and fold files");
  add_common(gen, gen_f, false);
  gen->add_option("--covariate", gen_covariate, "Stratifying covariate for the fold file (1-10)")
      ->check(CLI::Range(1, 10));

  auto* audit = app.add_subcommand("audit", "Check deduplication definitions against ground truth");
  audit->add_option("--dataset", audit_dataset, "Dataset CSV")->required()->check(CLI::ExistingFile);
  audit->add_option("--folds", audit_folds, "Fold assignment CSV")->check(CLI::ExistingFile);

  auto* fig2 = app.add_subcommand("fig2", "Learning curves: unbiased, random, stratified");
  add_common(fig2, fig2_f, true);
  auto* fig3 = app.add_subcommand("fig3", "Bias distribution over repeated simulations");
  add_common(fig3, fig3_f, true);
  auto* fig4 = app.add_subcommand("fig4", "Stratification bias versus covariate importance");
  add_common(fig4, fig4_f, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*oracle) {
      stratcv::cmd_oracle(resolve(oracle_f), oracle_f.out, std::cout);
    } else if (*gen) {
      stratcv::cmd_gen(resolve(gen_f), gen_covariate, gen_f.out, std::cout);
    } else if (*audit) {
      std::optional<std::filesystem::path> folds;
      if (!audit_folds.empty()) folds = audit_folds;
      stratcv::cmd_audit(audit_dataset, folds, std::cout);
    } else if (*fig2) {
      stratcv::cmd_fig2(resolve(fig2_f), run_options(fig2_f), fig2_f.out, std::cout);
    } else if (*fig3) {
      stratcv::cmd_fig3(resolve(fig3_f), run_options(fig3_f), fig3_f.out, std::cout);
    } else if (*fig4) {
      stratcv::cmd_fig4(resolve(fig4_f), run_options(fig4_f), fig4_f.out, std::cout);
    }
  } catch (const stratcv::Error& e) {
    std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
