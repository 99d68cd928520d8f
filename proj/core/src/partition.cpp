#include "stratcv/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "stratcv/csv.hpp"
#include "stratcv/error.hpp"

namespace stratcv {

void FoldAssignment::validate(const FederatedDataset& fed) const {
  if (folds.size() != fed.num_hospitals()) {
    throw InvalidArgument("fold assignment covers " + std::to_string(folds.size()) +
                          " hospitals, dataset has " +
                          std::to_string(fed.num_hospitals()));
  }
  for (std::size_t h = 0; h < folds.size(); ++h) {
    if (folds[h].size() != fed.hospitals[h].size()) {
      throw InvalidArgument("fold assignment for hospital " + std::to_string(h) +
                            " covers " + std::to_string(folds[h].size()) + " of " +
                            std::to_string(fed.hospitals[h].size()) + " records");
    }
    for (std::size_t f : folds[h]) {
      if (f >= k) {
        throw InvalidArgument("fold index " + std::to_string(f) +
                              " out of range for k = " + std::to_string(k));
      }
    }
  }
}

std::size_t StratificationSpec::fold_of(double value) const {
  // Number of interior thresholds strictly below value.
  const auto first = thresholds.begin() + 1;
  const auto last = thresholds.end() - 1;
  return static_cast<std::size_t>(std::lower_bound(first, last, value) - first);
}

StratifyingValue covariate_value(std::size_t covariate_index) {
  if (covariate_index < 1 || covariate_index > kNumCovariates) {
    throw InvalidArgument("covariate index must be in 1.." + std::to_string(kNumCovariates));
  }
  return [j = covariate_index - 1](const Record& r) { return r.x[j]; };
}

StratifyingValue hashed_identifier_value() {
  return [](const Record& r) {
    return static_cast<double>(mix64(r.id.value) >> 11) * 0x1.0p-53;
  };
}

FoldAssignment random_partition(const FederatedDataset& fed, std::size_t k,
                                Rng& rng, const WarningSink& warn) {
  if (k < 2) throw InvalidArgument("random_partition: k must be >= 2");
  FoldAssignment out;
  out.k = k;
  out.folds.resize(fed.num_hospitals());
  for (std::size_t h = 0; h < fed.num_hospitals(); ++h) {
    const std::size_t n = fed.hospitals[h].size();
    if (n < k && warn) {
      warn("hospital " + std::to_string(h) + " holds " + std::to_string(n) +
           " records, fewer than k = " + std::to_string(k) + "; some folds are empty");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);

    const std::size_t base = n / k;
    const std::size_t rem = n % k;
    const std::size_t big = rem * (base + 1);
    auto& folds = out.folds[h];
    folds.assign(n, 0);
    for (std::size_t p = 0; p < n; ++p) {
      folds[order[p]] = p < big ? p / (base + 1) : rem + (p - big) / base;
    }
  }
  return out;
}

StratificationSpec compute_thresholds(const FederatedDataset& fed,
                                      std::size_t covariate_index,
                                      std::size_t k) {
  StratificationSpec spec = compute_thresholds(fed, covariate_value(covariate_index), k);
  spec.covariate_index = covariate_index;
  return spec;
}

StratificationSpec compute_thresholds(const FederatedDataset& fed,
                                      const StratifyingValue& value,
                                      std::size_t k) {
  if (k < 2) throw InvalidArgument("compute_thresholds: k must be >= 2");
  std::vector<double> pooled;
  pooled.reserve(fed.total_records());
  for (const auto& h : fed.hospitals)
    for (const auto& r : h) pooled.push_back(value(r));
  if (pooled.empty()) throw InvalidArgument("compute_thresholds: dataset is empty");
  std::sort(pooled.begin(), pooled.end());

  std::size_t distinct = 1;
  for (std::size_t i = 1; i < pooled.size() && distinct < k; ++i) {
    if (pooled[i] != pooled[i - 1]) ++distinct;
  }
  if (distinct < k) {
    throw DegenerateStratification("stratifying value has " + std::to_string(distinct) +
                                   " distinct values, fewer than k = " + std::to_string(k));
  }

  const std::size_t n = pooled.size();
  StratificationSpec spec;
  spec.thresholds.reserve(k + 1);
  spec.thresholds.push_back(-std::numeric_limits<double>::infinity());
  for (std::size_t i = 1; i < k; ++i) spec.thresholds.push_back(pooled[i * n / k - 1]);
  spec.thresholds.push_back(std::numeric_limits<double>::infinity());
  return spec;
}

namespace {

void validate_spec(const StratificationSpec& spec) {
  const auto& t = spec.thresholds;
  if (t.size() < 3) throw InvalidArgument("stratification needs k >= 2 (k + 1 thresholds)");
  if (t.front() != -std::numeric_limits<double>::infinity() ||
      t.back() != std::numeric_limits<double>::infinity()) {
    throw InvalidArgument("stratification thresholds must start at -inf and end at +inf");
  }
  if (!std::is_sorted(t.begin(), t.end())) {
    throw InvalidArgument("stratification thresholds must be non-decreasing");
  }
}

}  // namespace

FoldAssignment stratified_partition(const FederatedDataset& fed,
                                    const StratificationSpec& spec) {
  return stratified_partition(fed, spec, covariate_value(spec.covariate_index));
}

FoldAssignment stratified_partition(const FederatedDataset& fed,
                                    const StratificationSpec& spec,
                                    const StratifyingValue& value) {
  validate_spec(spec);
  FoldAssignment out;
  out.k = spec.k();
  out.folds.resize(fed.num_hospitals());
  for (std::size_t h = 0; h < fed.num_hospitals(); ++h) {
    out.folds[h].reserve(fed.hospitals[h].size());
    for (const auto& r : fed.hospitals[h]) out.folds[h].push_back(spec.fold_of(value(r)));
  }
  return out;
}

std::pair<FederatedDataset, FoldAssignment> unbiased_partition(
    const std::vector<Record>& original_records, std::size_t n_hospitals,
    std::size_t k, Rng& rng) {
  FederatedDataset fed = assign_hospitals(original_records, n_hospitals, rng);
  FoldAssignment folds = random_partition(fed, k, rng);
  return {std::move(fed), std::move(folds)};
}

void save_folds_csv(const FederatedDataset& fed, const FoldAssignment& folds,
                    const std::filesystem::path& path) {
  folds.validate(fed);
  csv::Writer w({"hospital", "record_ordinal", "individual_id", "fold"});
  for (std::size_t h = 0; h < fed.num_hospitals(); ++h) {
    for (std::size_t i = 0; i < fed.hospitals[h].size(); ++i) {
      w.field(h).field(i).field(static_cast<unsigned long long>(fed.hospitals[h][i].id.value));
      w.field(folds.folds[h][i]);
      w.end_row();
    }
  }
  w.save(path);
}

FoldAssignment load_folds_csv(const FederatedDataset& fed,
                              const std::filesystem::path& path, std::size_t k) {
  const std::string text = csv::read_file(path);
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  FoldAssignment out;
  out.folds.resize(fed.num_hospitals());
  for (std::size_t h = 0; h < fed.num_hospitals(); ++h) {
    out.folds[h].assign(fed.hospitals[h].size(), kUnset);
  }

  std::size_t max_fold = 0;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1 || line.empty()) continue;

    const auto cols = csv::split(line);
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (cols.size() != 4) throw InvalidArgument(where + ": expected 4 columns");
    const auto h = static_cast<std::size_t>(csv::parse_u64(cols[0]));
    const auto i = static_cast<std::size_t>(csv::parse_u64(cols[1]));
    const auto id = csv::parse_u64(cols[2]);
    const auto f = static_cast<std::size_t>(csv::parse_u64(cols[3]));
    if (h >= fed.num_hospitals() || i >= fed.hospitals[h].size()) {
      throw InvalidArgument(where + ": record is not in the dataset");
    }
    if (fed.hospitals[h][i].id.value != id) {
      throw InvalidArgument(where + ": individual_id does not match the dataset");
    }
    out.folds[h][i] = f;
    max_fold = std::max(max_fold, f);
  }
  for (std::size_t h = 0; h < out.folds.size(); ++h) {
    for (std::size_t i = 0; i < out.folds[h].size(); ++i) {
      if (out.folds[h][i] == kUnset) {
        throw InvalidArgument("fold file misses record " + std::to_string(i) +
                              " of hospital " + std::to_string(h));
      }
    }
  }
  out.k = k != 0 ? k : max_fold + 1;
  out.validate(fed);
  return out;
}

}  // namespace stratcv
