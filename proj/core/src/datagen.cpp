#include "stratcv/datagen.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "stratcv/error.hpp"

namespace stratcv {

std::array<double, kNumCovariates> default_eigenvalues() {
  return {1.0, 1.2, 1.4, 1.6, 1.8, 2.0, 2.2, 2.4, 2.6, 2.8};
}

OutcomeParams default_outcome_params() {
  return OutcomeParams{{-2.0, 0.4, 0.8, 1.2, 0.4, 1.2, 3.0, 2.0}};
}

Eigen::MatrixXd build_orthogonal(std::size_t dim, Rng& rng) {
  if (dim == 0) throw InvalidArgument("build_orthogonal: dim must be >= 1");
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd gauss(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) gauss(r, c) = rng.normal();

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (r(i, i) < 0.0) q.col(i) = -q.col(i);
  }
  return q;
}

Covariance build_covariance(const CovarianceSpec& spec) {
  for (std::size_t i = 0; i < kNumCovariates; ++i) {
    const double l = spec.eigenvalues[i];
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw InvalidArgument("build_covariance: eigenvalue " +
                            std::to_string(i + 1) + " is not positive");
    }
  }
  const Eigen::MatrixXd& o = spec.orthogonal;
  if (o.rows() != 9 || o.cols() != 9) {
    throw InvalidArgument("build_covariance: orthogonal basis must be 9x9");
  }
  const Eigen::MatrixXd gram = o.transpose() * o;
  if ((gram - Eigen::MatrixXd::Identity(9, 9)).cwiseAbs().maxCoeff() > 1e-10) {
    throw InvalidArgument("build_covariance: basis is not orthogonal");
  }

  Eigen::VectorXd lead(9);
  for (Eigen::Index i = 0; i < 9; ++i) {
    lead(i) = spec.eigenvalues[static_cast<std::size_t>(i)];
  }
  Eigen::MatrixXd block = o * lead.asDiagonal() * o.transpose();
  block = 0.5 * (block + block.transpose()).eval();

  Covariance cov;
  cov.sigma.setZero();
  cov.sigma.topLeftCorner<9, 9>() = block;
  cov.sigma(9, 9) = spec.eigenvalues[9];

  Eigen::LLT<Eigen::Matrix<double, 10, 10>> llt(cov.sigma);
  if (llt.info() != Eigen::Success) {
    throw NumericError("build_covariance: Cholesky factorization failed");
  }
  cov.chol = llt.matrixL();
  return cov;
}

std::vector<Covariates> sample_covariates(const Covariance& cov,
                                          const Covariates& mu, std::size_t n,
                                          Rng& rng) {
  std::vector<Covariates> out(n);
  std::array<double, kNumCovariates> z{};
  for (auto& row : out) {
    for (auto& zi : z) zi = rng.normal();
    for (std::size_t i = 0; i < kNumCovariates; ++i) {
      double acc = mu[i];
      for (std::size_t j = 0; j <= i; ++j) {
        acc += cov.chol(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * z[j];
      }
      row[i] = acc;
    }
  }
  return out;
}

double log_odds(const Covariates& x, const OutcomeParams& params) {
  const auto& a = params.a;
  double lo = a[0] + a[1] * x[0] + a[2] * x[1] + a[3] * x[2] + a[4] * x[0] * x[1];
  if (x[3] > 0.0) lo += a[5] * x[2];
  if (x[5] > 0.0) lo += a[6] * x[4] * x[4];
  if (x[7] * x[8] > 0.0) lo += a[7] * x[6];
  return lo;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

int sample_outcome(double lo, Rng& rng) {
  return rng.uniform() < sigmoid(lo) ? 1 : 0;
}

std::vector<Record> generate_records(const GenerativeModel& model,
                                     std::size_t n, Rng& rng,
                                     std::uint64_t first_id) {
  std::vector<Covariates> xs = sample_covariates(model.covariance, model.mu, n, rng);
  std::vector<Record> records(n);
  for (std::size_t i = 0; i < n; ++i) {
    records[i].x = xs[i];
    records[i].y = sample_outcome(log_odds(xs[i], model.params), rng);
    records[i].id = IndividualId{first_id + i};
  }
  return records;
}

double optimal_accuracy(const Covariance& cov, const Covariates& mu,
                        const OutcomeParams& params, std::size_t n_mc,
                        Rng& rng) {
  if (n_mc == 0) throw InvalidArgument("optimal_accuracy: n_mc must be >= 1");
  const std::vector<Covariates> xs = sample_covariates(cov, mu, n_mc, rng);
  double sum = 0.0;
  for (const auto& x : xs) {
    const double p1 = sigmoid(log_odds(x, params));
    sum += p1 > 0.5 ? p1 : 1.0 - p1;
  }
  return sum / static_cast<double>(n_mc);
}

}  // namespace stratcv
