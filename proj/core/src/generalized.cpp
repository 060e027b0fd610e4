#include "twintt/generalized.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "twintt/skew.hpp"
#include "twintt/special_functions.hpp"
#include "twintt/twin_t.hpp"

namespace twintt {

namespace {

void check_params(double power, double shape) {
  if (!(power > 0.0) || !std::isfinite(power) || !(shape > 0.0) || !std::isfinite(shape)) {
    throw std::domain_error("generalized twin-t: power and shape must be positive finite");
  }
}

// asinh(s) where ln s is supplied, avoiding overflow/underflow of s itself.
double asinh_from_log(double log_s) {
  if (log_s > 40.0) return std::numbers::ln2 + log_s;
  if (log_s < -40.0) return std::exp(log_s);
  return std::asinh(std::exp(log_s));
}

}  // namespace

GeneralizedTwinT::GeneralizedTwinT(double power, double shape)
    : beta_(power), gam_(shape) {
  check_params(power, shape);
  log_norm_ = -(std::log(gam_ / 2.0) / beta_ + std::log(gam_ + 1.0 / beta_) +
                log_beta(gam_ / 2.0, 1.0 / beta_ + 1.0));
}

double GeneralizedTwinT::log_kernel_arg(double x) const {
  const double ax = std::fabs(x);
  if (ax == 0.0) return 0.0;
  return asinh_from_log(beta_ * std::log(ax) - std::log(gam_));
}

double GeneralizedTwinT::pdf(double x) const { return std::exp(log_pdf(x)); }

double GeneralizedTwinT::log_pdf(double x) const {
  if (std::isnan(x)) throw std::domain_error("generalized twin-t: x must not be NaN");
  return log_norm_ - (gam_ + 1.0 / beta_) * log_kernel_arg(x);
}

double GeneralizedTwinT::cdf(double x) const {
  if (std::isnan(x)) throw std::domain_error("generalized twin-t: x must not be NaN");
  if (std::isinf(x)) return x > 0.0 ? 1.0 : 0.0;
  if (x == 0.0) return 0.5;
  const double ax = std::fabs(x);
  // Same single-incomplete-beta structure as the base family:
  // F = 1 + x f(x) - I((C+S)^-2; g/2, 1/b + 1) / 2 for x > 0.
  const double a2 = 2.0 * log_kernel_arg(ax);
  const double q = std::exp(-a2);
  const double one_minus_q = -std::expm1(-a2);
  const double upper =
      1.0 + ax * pdf(ax) -
      0.5 * reg_inc_beta_c(q, one_minus_q, gam_ / 2.0, 1.0 / beta_ + 1.0);
  return x > 0.0 ? upper : 1.0 - upper;
}

double GeneralizedTwinT::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::domain_error("generalized twin-t quantile: u must lie inside (0, 1)");
  }
  if (u == 0.5) return 0.0;
  const double target = u >= 0.5 ? u : 1.0 - u;
  double lo = 0.0;
  double hi = 1.0;
  while (cdf(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) {
      throw std::runtime_error("generalized twin-t quantile: outside representable range");
    }
  }
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 300; ++iter) {
    const double fx = cdf(x) - target;
    if (std::fabs(fx) <= 1e-10 && hi - lo <= 1e-9 * std::max(1.0, std::fabs(x))) break;
    if (fx > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double dens = pdf(x);
    double next = dens > 0.0 ? x - fx / dens : 0.5 * (lo + hi);
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    x = next;
  }
  if (std::fabs(cdf(x) - target) > 1e-10) {
    throw std::runtime_error("generalized twin-t quantile: failed to converge");
  }
  return u >= 0.5 ? x : -x;
}

std::optional<double> GeneralizedTwinT::abs_moment(double r) const {
  if (!(r > 0.0)) throw std::domain_error("generalized twin-t abs_moment: r must be > 0");
  if (!(r < beta_ * gam_)) return std::nullopt;
  const double log_val = (r / beta_) * std::log(gam_ / 2.0) + std::log(gam_ + 2.0 / beta_) +
                         log_beta(gam_ / 2.0 - r / (2.0 * beta_), (r + 1.0) / beta_) -
                         std::log(gam_ + r / beta_ + 2.0 / beta_) -
                         log_beta(gam_ / 2.0, 1.0 / beta_);
  return std::exp(log_val);
}

std::vector<double> GeneralizedTwinT::sample(std::size_t n, std::uint64_t seed) const {
  const TwinT proposal(beta_ * gam_);  // same tail exponent -(bg+1)
  auto density = [this](double x) { return pdf(x); };
  const double m = envelope_constant(density, proposal);
  return rejection_sample(density, proposal, m, n, seed);
}

// ---------------------------------------------------------------------------

GeneralizedMvTwinT::GeneralizedMvTwinT(double power, double shape, Eigen::VectorXd mu,
                                       Eigen::MatrixXd scale)
    : beta_(power), gam_(shape), mu_(std::move(mu)), scale_(std::move(scale)) {
  check_params(power, shape);
  const int p = dim();
  if (p < 1) throw std::domain_error("generalized mv twin-t: dimension must be >= 1");
  if (scale_.rows() != p || scale_.cols() != p) {
    throw std::invalid_argument("generalized mv twin-t: scale dimensions must match mu");
  }
  llt_.compute(scale_);
  if (llt_.info() != Eigen::Success) {
    throw std::runtime_error("generalized mv twin-t: scale matrix is not positive definite");
  }
  half_log_det_ = llt_.matrixL().toDenseMatrix().diagonal().array().log().sum();
  log_norm_ = std::log(beta_) + std::lgamma(0.5 * p + 1.0) + std::log(gam_ + 2.0 * p / beta_) -
              std::log(gam_ + p / beta_) - (p / beta_) * std::log(gam_ / 2.0) -
              std::log(static_cast<double>(p)) - 0.5 * p * std::log(std::numbers::pi) -
              log_beta(gam_ / 2.0, p / beta_);
}

double GeneralizedMvTwinT::log_pdf(const Eigen::VectorXd& x) const {
  if (x.size() != mu_.size()) {
    throw std::invalid_argument("generalized mv twin-t: point dimension mismatch");
  }
  Eigen::VectorXd z = x - mu_;
  llt_.matrixL().solveInPlace(z);
  const double q = z.squaredNorm();
  const double arg = q == 0.0
                         ? 0.0
                         : asinh_from_log(0.5 * beta_ * std::log(q) - std::log(gam_));
  return log_norm_ - half_log_det_ - (gam_ + dim() / beta_) * arg;
}

double GeneralizedMvTwinT::pdf(const Eigen::VectorXd& x) const { return std::exp(log_pdf(x)); }

}  // namespace twintt
