#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string_view>
#include <utility>
#include <vector>

#include "stratcv/error.hpp"
#include "stratcv/federation.hpp"
#include "stratcv/rng.hpp"

namespace stratcv {

/// Fold index for every record, per hospital, aligned with record order.
struct FoldAssignment {
  std::size_t k = 0;
  std::vector<std::vector<std::size_t>> folds;

  /// Throws InvalidArgument unless the shape matches fed and every index
  /// lies in [0, k).
  void validate(const FederatedDataset& fed) const;
};

/// Thresholds t0 = -inf < t1 <= ... <= t_{k-1} < tk = +inf. A value v falls
/// in fold i when t_i < v <= t_{i+1}, so equal values never straddle folds.
struct StratificationSpec {
  /// 1-based covariate, or 0 when the values come from a caller-supplied
  /// function (e.g. a hashed identifier).
  std::size_t covariate_index = 0;
  std::vector<double> thresholds;

  std::size_t k() const { return thresholds.empty() ? 0 : thresholds.size() - 1; }
  std::size_t fold_of(double value) const;
};

using StratifyingValue = std::function<double(const Record&)>;

StratifyingValue covariate_value(std::size_t covariate_index);

/// Maps the individual id through a 64-bit mixer onto [0, 1). Equal ids give
/// equal values, and the value carries no information about the outcome.
StratifyingValue hashed_identifier_value();

/// Shuffles each hospital and cuts it into k contiguous chunks whose sizes
/// differ by at most one; extra records go to the lowest fold indices.
FoldAssignment random_partition(const FederatedDataset& fed, std::size_t k,
                                Rng& rng, const WarningSink& warn = {});

/// Rank thresholds on the pooled values: t_i is the floor(i n / k)-th
/// smallest value (1-based). Throws DegenerateStratification if there are
/// fewer than k distinct values.
StratificationSpec compute_thresholds(const FederatedDataset& fed,
                                      std::size_t covariate_index,
                                      std::size_t k);
StratificationSpec compute_thresholds(const FederatedDataset& fed,
                                      const StratifyingValue& value,
                                      std::size_t k);

FoldAssignment stratified_partition(const FederatedDataset& fed,
                                    const StratificationSpec& spec);
FoldAssignment stratified_partition(const FederatedDataset& fed,
                                    const StratificationSpec& spec,
                                    const StratifyingValue& value);

/// Hospital assignment followed by a random partition of duplicate-free
/// records; the reference strategy.
std::pair<FederatedDataset, FoldAssignment> unbiased_partition(
    const std::vector<Record>& original_records, std::size_t n_hospitals,
    std::size_t k, Rng& rng);

/// CSV with header hospital,record_ordinal,individual_id,fold.
void save_folds_csv(const FederatedDataset& fed, const FoldAssignment& folds,
                    const std::filesystem::path& path);

/// Reads a fold file written for fed. k is one more than the largest fold
/// index unless given.
FoldAssignment load_folds_csv(const FederatedDataset& fed,
                              const std::filesystem::path& path,
                              std::size_t k = 0);

}  // namespace stratcv
