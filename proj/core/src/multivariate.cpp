#include "twintt/multivariate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "twintt/special_functions.hpp"

namespace twintt {

namespace {

double asinh_ratio(double q, double nu) {
  const double s = q / nu;
  if (s > 1e16) return std::numbers::ln2 + std::log(q) - std::log(nu);
  return std::asinh(s);
}

}  // namespace

MultivariateTwinT::MultivariateTwinT(double nu, Eigen::VectorXd mu, Eigen::MatrixXd scale)
    : nu_(nu), mu_(std::move(mu)), scale_(std::move(scale)) {
  if (std::isnan(nu) || !(nu > 0.0) || std::isinf(nu)) {
    throw std::domain_error("multivariate twin-t: nu must be a positive finite real");
  }
  const int p = dim();
  if (p < 1) throw std::domain_error("multivariate twin-t: dimension must be >= 1");
  if (scale_.rows() != p || scale_.cols() != p) {
    throw std::invalid_argument("multivariate twin-t: scale matrix dimensions must match mu");
  }
  const double asym = (scale_ - scale_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * (1.0 + scale_.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("multivariate twin-t: scale matrix must be symmetric");
  }
  llt_.compute(scale_);
  if (llt_.info() != Eigen::Success) {
    throw std::runtime_error("multivariate twin-t: scale matrix is not positive definite");
  }
  half_log_det_ = llt_.matrixL().toDenseMatrix().diagonal().array().log().sum();
  log_norm_ = (2.0 + 0.5 * p) * std::numbers::ln2 + log_gamma_ratio(nu_ / 4.0, 0.5 * p + 1.0) -
              0.5 * p * std::log(nu_ * std::numbers::pi) - std::log(nu_ + p);
}

double MultivariateTwinT::mahalanobis_sq(const Eigen::VectorXd& x) const {
  if (x.size() != mu_.size()) {
    throw std::invalid_argument("multivariate twin-t: point dimension mismatch");
  }
  Eigen::VectorXd z = x - mu_;
  llt_.matrixL().solveInPlace(z);
  return z.squaredNorm();
}

double MultivariateTwinT::log_pdf(const Eigen::VectorXd& x) const {
  const double q = mahalanobis_sq(x);
  return log_norm_ - half_log_det_ - 0.5 * (nu_ + dim()) * asinh_ratio(q, nu_);
}

double MultivariateTwinT::pdf(const Eigen::VectorXd& x) const { return std::exp(log_pdf(x)); }

std::optional<double> MultivariateTwinT::second_moment_coefficient(double nu, int p) {
  if (!(nu > 2.0)) return std::nullopt;
  const double a = nu / 4.0;
  return nu / (nu - 2.0) *
         std::exp(log_gamma_ratio(a, 0.5) - log_gamma_ratio(a + 0.5 * p + 1.0, 0.5));
}

std::optional<Eigen::MatrixXd> MultivariateTwinT::second_moment() const {
  const auto coeff = second_moment_coefficient(nu_, dim());
  if (!coeff) return std::nullopt;
  return (*coeff * scale_).eval();
}

double MultivariateTwinT::draw_radius(Rng& rng) const {
  const int p = dim();
  // Squared-radius substitution: q ~ mixture of Beta(nu/4, p/2) and
  // Beta(nu/4+1, p/2) with weights proportional to their beta functions.
  const double w1 = (nu_ + 2.0 * p) / (2.0 * nu_ + 2.0 * p);
  const double a = rng.uniform() < w1 ? nu_ / 4.0 : nu_ / 4.0 + 1.0;
  const double q = rng.beta(a, 0.5 * p);
  const double s = (1.0 - q) / (2.0 * std::sqrt(q));
  return std::sqrt(nu_ * s);
}

Eigen::MatrixXd MultivariateTwinT::sample(std::size_t n, std::uint64_t seed) const {
  const int p = dim();
  Rng rng(seed);
  Eigen::MatrixXd out(n, p);
  Eigen::VectorXd dir(p);
  for (std::size_t i = 0; i < n; ++i) {
    double norm_sq = 0.0;
    do {
      for (int j = 0; j < p; ++j) dir[j] = rng.normal();
      norm_sq = dir.squaredNorm();
    } while (norm_sq == 0.0);
    dir *= draw_radius(rng) / std::sqrt(norm_sq);
    out.row(i) = (mu_ + llt_.matrixL() * dir).transpose();
  }
  return out;
}

MomentInit method_of_moments_init(const Eigen::MatrixXd& data, double nu_fixed) {
  const auto n = data.rows();
  const auto p = data.cols();
  if (n <= p) throw std::invalid_argument("method_of_moments_init: need more rows than columns");
  const auto coeff = MultivariateTwinT::second_moment_coefficient(nu_fixed, static_cast<int>(p));
  if (!coeff) throw std::domain_error("method_of_moments_init: nu_fixed must be > 2");

  MomentInit init;
  init.mu = data.colwise().mean();
  Eigen::MatrixXd centered = data.rowwise() - init.mu.transpose();
  Eigen::MatrixXd cov = centered.transpose() * centered / double(n - 1);
  Eigen::LLT<Eigen::MatrixXd> check(cov);
  if (check.info() != Eigen::Success) {
    throw std::runtime_error("method_of_moments_init: sample covariance is rank-deficient");
  }
  init.scale = cov / *coeff;
  return init;
}

}  // namespace twintt
