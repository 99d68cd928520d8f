#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "stratcv/record.hpp"
#include "stratcv/rng.hpp"

namespace stratcv {

inline constexpr std::size_t kNumOutcomeParams = 8;

/// Eigenvalues of the covariance plus the 9x9 orthogonal basis that rotates
/// the first nine of them. The tenth covariate stays independent.
struct CovarianceSpec {
  std::array<double, kNumCovariates> eigenvalues{};
  Eigen::MatrixXd orthogonal;
};

struct Covariance {
  Eigen::Matrix<double, 10, 10> sigma;
  Eigen::Matrix<double, 10, 10> chol;  // lower triangular, chol * chol^T == sigma
};

/// Coefficients a0..a7 of the log-odds model.
struct OutcomeParams {
  std::array<double, kNumOutcomeParams> a{};
};

/// Everything needed to draw records.
struct GenerativeModel {
  Covariance covariance;
  Covariates mu{};
  OutcomeParams params;
};

std::array<double, kNumCovariates> default_eigenvalues();
OutcomeParams default_outcome_params();

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// columns of Q sign-corrected so that R has a positive diagonal.
Eigen::MatrixXd build_orthogonal(std::size_t dim, Rng& rng);

/// Sigma = blockdiag(O diag(l1..l9) O^T, l10). Throws InvalidArgument on a
/// non-positive eigenvalue or a non-orthogonal basis, NumericError if the
/// Cholesky factorization fails.
Covariance build_covariance(const CovarianceSpec& spec);

/// n draws of mu + L z with z ~ N(0, I).
std::vector<Covariates> sample_covariates(const Covariance& cov,
                                          const Covariates& mu, std::size_t n,
                                          Rng& rng);

/// a0 + a1 x1 + a2 x2 + a3 x3 + a4 x1 x2 + a5 x3 I(x4>0)
///    + a6 x5^2 I(x6>0) + a7 x7 I(x8 x9>0), strict indicators.
double log_odds(const Covariates& x, const OutcomeParams& params);

double sigmoid(double z);

/// Bernoulli draw with success probability sigmoid(lo).
int sample_outcome(double lo, Rng& rng);

/// Draws n records; individual ids are first_id, first_id + 1, ...
std::vector<Record> generate_records(const GenerativeModel& model,
                                     std::size_t n, Rng& rng,
                                     std::uint64_t first_id = 0);

/// Monte Carlo estimate of E[max(p1, 1 - p1)], the accuracy ceiling of any
/// classifier under the model.
double optimal_accuracy(const Covariance& cov, const Covariates& mu,
                        const OutcomeParams& params, std::size_t n_mc,
                        Rng& rng);

}  // namespace stratcv
