#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>

namespace stratcv {

inline constexpr std::size_t kNumCovariates = 10;

using Covariates = std::array<double, kNumCovariates>;

/// Ground-truth identity of a generated individual. Only the auditor looks
/// at it; partitioning strategies never do.
struct IndividualId {
  std::uint64_t value = 0;

  friend auto operator<=>(const IndividualId&, const IndividualId&) = default;
};

/// One individual's covariates and realized binary outcome. Copies of the
/// same individual are bitwise-equal in x and y.
struct Record {
  Covariates x{};
  int y = 0;
  IndividualId id;
};

}  // namespace stratcv
