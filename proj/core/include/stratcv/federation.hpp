#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include "stratcv/record.hpp"
#include "stratcv/rng.hpp"

namespace stratcv {

struct FoldAssignment;

/// Records split across hospitals. Within a hospital no individual appears
/// twice; copies of an individual may sit in several hospitals.
struct FederatedDataset {
  std::vector<std::vector<Record>> hospitals;
  std::size_t n_original = 0;
  std::size_t n_duplicates = 0;

  std::size_t num_hospitals() const { return hospitals.size(); }
  std::size_t total_records() const;
};

/// Position of one record: hospital index and ordinal within the hospital.
struct RecordLocation {
  std::size_t hospital = 0;
  std::size_t ordinal = 0;
  std::optional<std::size_t> fold;

  friend bool operator==(const RecordLocation&, const RecordLocation&) = default;
};

struct DedupViolation {
  IndividualId id;
  std::vector<RecordLocation> locations;
};

/// Ground-truth check of the three deduplication levels: within a hospital
/// (def1), across hospitals (def2) and across fold indices (def3).
struct DedupReport {
  std::vector<DedupViolation> def1_violations;
  std::vector<DedupViolation> def2_violations;
  std::vector<DedupViolation> def3_violations;
  bool def1_satisfied = true;
  bool def2_satisfied = true;
  /// Empty when the audit ran without a fold assignment.
  std::optional<bool> def3_satisfied;
};

/// Each record goes to a hospital drawn uniformly at random.
FederatedDataset assign_hospitals(const std::vector<Record>& records,
                                  std::size_t n_hospitals, Rng& rng);

/// Rejection sampling of exact copies: draw an original individual and a
/// hospital uniformly; reject if that hospital already holds the individual,
/// otherwise append a copy. Stops after n_dup acceptances. Throws
/// InvalidArgument when n_dup exceeds the number of free
/// (individual, hospital) slots.
FederatedDataset inject_duplicates(const FederatedDataset& fed,
                                   std::size_t n_dup, Rng& rng);

DedupReport audit(const FederatedDataset& fed,
                  const FoldAssignment* folds = nullptr);

/// CSV with header hospital,individual_id,x1..x10,y. Reals are written with
/// 17 significant digits so load(save(d)) reproduces every bit.
void save_dataset_csv(const FederatedDataset& fed,
                      const std::filesystem::path& path);

/// The hospital count is one more than the largest hospital index present.
FederatedDataset load_dataset_csv(const std::filesystem::path& path);

}  // namespace stratcv
