#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "stratcv/boosting.hpp"
#include "stratcv/datagen.hpp"

namespace stratcv {

/// Full parameterization of an experiment. Defaults reproduce the reference
/// setup: 10000 individuals, 2000 duplicates, 5 hospitals, 5 folds.
struct ExperimentConfig {
  std::size_t n_gen = 10000;
  std::size_t n_dup = 2000;
  std::size_t n_h = 5;
  std::size_t k = 5;
  Covariates mu{};
  std::array<double, kNumCovariates> eigenvalues = default_eigenvalues();
  OutcomeParams outcome = default_outcome_params();
  TrainConfig train;
  std::uint64_t master_seed = 1;
  double scale = 1.0;
  std::size_t n_sims = 30;
  std::size_t n_datasets = 100;
  std::size_t n_mc = 100000;
  /// Stratifying covariate of the learning-curve experiment (1-based).
  std::size_t fig2_covariate = 1;
  /// Whether the importance sweep also redraws a7 (otherwise a7 keeps the
  /// configured value).
  bool redraw_a7 = true;

  void validate() const;

  /// Copy with n_gen, n_dup, rounds, n_sims, n_datasets and n_mc multiplied
  /// by scale (rounded, floored at their minimum legal value) and scale
  /// reset to 1.
  ExperimentConfig scaled() const;
};

/// Flat JSON object; every key is optional, unknown keys are rejected.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical serialization: fixed key order, reals that parse back exactly.
std::string to_json(const ExperimentConfig& cfg);

/// FNV-1a of to_json(cfg).
std::uint64_t config_hash(const ExperimentConfig& cfg);

}  // namespace stratcv
