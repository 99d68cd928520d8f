#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "stratcv/datagen.hpp"
#include "stratcv/federation.hpp"

namespace stratcv::testing {

inline Record make_record(std::uint64_t id, double x1, int y = 0) {
  Record r;
  r.id = IndividualId{id};
  r.x[0] = x1;
  r.y = y;
  return r;
}

// One hospital per inner list, records taken as given.
inline FederatedDataset make_fed(std::vector<std::vector<Record>> hospitals) {
  FederatedDataset fed;
  fed.hospitals = std::move(hospitals);
  std::vector<std::uint64_t> ids;
  for (const auto& h : fed.hospitals) {
    for (const Record& r : h) ids.push_back(r.id.value);
  }
  std::sort(ids.begin(), ids.end());
  const auto distinct = static_cast<std::size_t>(std::unique(ids.begin(), ids.end()) - ids.begin());
  fed.n_original = distinct;
  fed.n_duplicates = ids.size() - distinct;
  return fed;
}

inline GenerativeModel default_model(std::uint64_t seed) {
  Rng rng = Rng::derive(seed, "sigma");
  CovarianceSpec spec{default_eigenvalues(), build_orthogonal(9, rng)};
  GenerativeModel m;
  m.covariance = build_covariance(spec);
  m.params = default_outcome_params();
  return m;
}

// Paper-sized duplicated dataset drawn from one seed.
inline FederatedDataset duplicated_dataset(std::uint64_t seed, std::size_t n_gen = 10000,
                                           std::size_t n_dup = 2000, std::size_t n_h = 5) {
  const GenerativeModel m = default_model(seed);
  Rng rng(seed);
  const auto records = generate_records(m, n_gen, rng);
  return inject_duplicates(assign_hospitals(records, n_h, rng), n_dup, rng);
}

}  // namespace stratcv::testing
