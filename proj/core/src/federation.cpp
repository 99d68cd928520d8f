#include "stratcv/federation.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <unordered_map>

#include "stratcv/csv.hpp"
#include "stratcv/error.hpp"
#include "stratcv/partition.hpp"

namespace stratcv {

std::size_t FederatedDataset::total_records() const {
  std::size_t n = 0;
  for (const auto& h : hospitals) n += h.size();
  return n;
}

FederatedDataset assign_hospitals(const std::vector<Record>& records,
                                  std::size_t n_hospitals, Rng& rng) {
  if (n_hospitals == 0) throw InvalidArgument("assign_hospitals: n_h must be >= 1");
  FederatedDataset fed;
  fed.hospitals.resize(n_hospitals);
  for (const auto& r : records) fed.hospitals[rng.index(n_hospitals)].push_back(r);
  fed.n_original = records.size();
  fed.n_duplicates = 0;
  return fed;
}

FederatedDataset inject_duplicates(const FederatedDataset& fed,
                                   std::size_t n_dup, Rng& rng) {
  const std::size_t n_h = fed.num_hospitals();

  // Distinct individuals in first-seen order, and which hospitals hold them.
  std::vector<const Record*> originals;
  std::unordered_map<std::uint64_t, std::size_t> slot;
  std::vector<std::uint8_t> occupied;
  std::size_t n_occupied = 0;
  for (std::size_t h = 0; h < n_h; ++h) {
    for (const auto& r : fed.hospitals[h]) {
      auto [it, fresh] = slot.try_emplace(r.id.value, originals.size());
      if (fresh) {
        originals.push_back(&r);
        occupied.resize(occupied.size() + n_h, 0);
      }
      std::uint8_t& cell = occupied[it->second * n_h + h];
      n_occupied += cell == 0 ? 1 : 0;
      cell = 1;
    }
  }

  const std::size_t capacity = originals.size() * n_h - n_occupied;
  if (n_dup > capacity) {
    throw InvalidArgument("inject_duplicates: n_dup = " + std::to_string(n_dup) +
                          " exceeds the " + std::to_string(capacity) +
                          " free (individual, hospital) slots");
  }

  FederatedDataset out = fed;
  std::size_t added = 0;
  while (added < n_dup) {
    const std::size_t who = rng.index(originals.size());
    const std::size_t where = rng.index(n_h);
    std::uint8_t& cell = occupied[who * n_h + where];
    if (cell) continue;
    cell = 1;
    out.hospitals[where].push_back(*originals[who]);
    ++added;
  }
  out.n_original = originals.size();
  out.n_duplicates = fed.total_records() + n_dup - originals.size();
  return out;
}

DedupReport audit(const FederatedDataset& fed, const FoldAssignment* folds) {
  if (folds != nullptr) folds->validate(fed);

  std::map<IndividualId, std::vector<RecordLocation>> by_id;
  for (std::size_t h = 0; h < fed.num_hospitals(); ++h) {
    for (std::size_t i = 0; i < fed.hospitals[h].size(); ++i) {
      RecordLocation loc{h, i, std::nullopt};
      if (folds != nullptr) loc.fold = folds->folds[h][i];
      by_id[fed.hospitals[h][i].id].push_back(loc);
    }
  }

  DedupReport report;
  for (const auto& [id, locs] : by_id) {
    if (locs.size() < 2) continue;

    std::map<std::size_t, std::size_t> per_hospital;
    std::set<std::size_t> fold_set;
    for (const auto& l : locs) {
      ++per_hospital[l.hospital];
      if (l.fold) fold_set.insert(*l.fold);
    }
    const bool intra = std::any_of(per_hospital.begin(), per_hospital.end(),
                                   [](const auto& kv) { return kv.second > 1; });
    if (intra) report.def1_violations.push_back({id, locs});
    if (per_hospital.size() > 1) report.def2_violations.push_back({id, locs});
    if (fold_set.size() > 1) report.def3_violations.push_back({id, locs});
  }
  report.def1_satisfied = report.def1_violations.empty();
  report.def2_satisfied = report.def2_violations.empty();
  if (folds != nullptr) report.def3_satisfied = report.def3_violations.empty();
  return report;
}

void save_dataset_csv(const FederatedDataset& fed,
                      const std::filesystem::path& path) {
  std::vector<std::string> header{"hospital", "individual_id"};
  for (std::size_t j = 1; j <= kNumCovariates; ++j) header.push_back("x" + std::to_string(j));
  header.push_back("y");
  csv::Writer w(header);
  for (std::size_t h = 0; h < fed.num_hospitals(); ++h) {
    for (const auto& r : fed.hospitals[h]) {
      w.field(h).field(static_cast<unsigned long long>(r.id.value));
      for (double v : r.x) w.field(v);
      w.field(r.y);
      w.end_row();
    }
  }
  w.save(path);
}

FederatedDataset load_dataset_csv(const std::filesystem::path& path) {
  const std::string text = csv::read_file(path);
  FederatedDataset fed;
  std::set<std::uint64_t> ids;
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
    if (cols.size() != kNumCovariates + 3) {
      throw InvalidArgument(path.string() + ":" + std::to_string(line_no) +
                            ": expected " + std::to_string(kNumCovariates + 3) +
                            " columns");
    }
    const auto h = static_cast<std::size_t>(csv::parse_u64(cols[0]));
    Record r;
    r.id = IndividualId{csv::parse_u64(cols[1])};
    for (std::size_t j = 0; j < kNumCovariates; ++j) r.x[j] = csv::parse_double(cols[2 + j]);
    const auto y = csv::parse_u64(cols[kNumCovariates + 2]);
    if (y > 1) throw InvalidArgument(path.string() + ":" + std::to_string(line_no) + ": y must be 0 or 1");
    r.y = static_cast<int>(y);
    if (h >= fed.hospitals.size()) fed.hospitals.resize(h + 1);
    fed.hospitals[h].push_back(r);
    ids.insert(r.id.value);
  }
  fed.n_original = ids.size();
  fed.n_duplicates = fed.total_records() - ids.size();
  return fed;
}

}  // namespace stratcv
