#include "twintt/student_t.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "twintt/special_functions.hpp"

namespace twintt {

namespace {
constexpr double kLnSqrt2Pi = 0.9189385332046727417803297364;
constexpr double kNuNormalLimit = 1e7;
}  // namespace

StudentT::StudentT(double nu) : nu_(nu) {
  if (std::isnan(nu) || !(nu > 0.0)) throw std::domain_error("student-t: nu must be > 0");
  normal_limit_ = nu > kNuNormalLimit;
  log_norm_ = normal_limit_
                  ? -kLnSqrt2Pi
                  : log_gamma_ratio(nu / 2.0, 0.5) - 0.5 * std::log(nu * std::numbers::pi);
}

double StudentT::pdf(double x) const { return std::exp(log_pdf(x)); }

double StudentT::log_pdf(double x) const {
  if (normal_limit_) return -0.5 * x * x - kLnSqrt2Pi;
  return log_norm_ - 0.5 * (nu_ + 1.0) * std::log1p(x * x / nu_);
}

double StudentT::cdf(double x) const {
  if (normal_limit_) return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0);
  if (x == 0.0) return 0.5;
  const double x2 = x * x;
  const double z = nu_ / (nu_ + x2);
  const double tail = 0.5 * reg_inc_beta_c(z, x2 / (nu_ + x2), nu_ / 2.0, 0.5);
  return x > 0.0 ? 1.0 - tail : tail;
}

double StudentT::draw(Rng& rng) const {
  return normal_limit_ ? rng.normal() : rng.student_t(nu_);
}

}  // namespace twintt
