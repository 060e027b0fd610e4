#include "twintt/twin_t.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "twintt/special_functions.hpp"

namespace twintt {

namespace {

constexpr double kLnSqrt2Pi = 0.9189385332046727417803297364;  // ln sqrt(2 pi)
constexpr double kNuNormalLimit = 1e7;
constexpr double kNuMin = 1e-3;

void check_finite(double x, const char* where) {
  if (std::isnan(x)) throw std::domain_error(std::string(where) + ": x must not be NaN");
}

// asinh(x^2/nu), safe against x*x overflow for |x| up to DBL_MAX.
double log_kernel_arg(double nu, double x) {
  const double ax = std::fabs(x);
  if (ax > 1e140) {
    // asinh(S) = ln(2S) to machine precision once S >> 1.
    return std::numbers::ln2 + 2.0 * std::log(ax) - std::log(nu);
  }
  return std::asinh(ax * ax / nu);
}

double std_normal_pdf(double x) { return std::exp(-0.5 * x * x - kLnSqrt2Pi); }
double std_normal_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

}  // namespace

KernelTerms kernel_terms(double nu, double x) {
  const double S = x * x / nu;
  const double C = std::hypot(1.0, S);
  const double p = std::exp(-2.0 * std::asinh(S));
  return KernelTerms{S, C, p};
}

double log_c_plus_s(double nu, double x) { return log_kernel_arg(nu, x); }

TwinT::TwinT(double nu) : nu_(nu) {
  if (std::isnan(nu) || !(nu > 0.0)) {
    throw std::domain_error("twin-t: nu must be > 0 (negative degrees of freedom give no "
                            "new distribution), got " + std::to_string(nu));
  }
  if (nu < kNuMin) {
    throw std::domain_error("twin-t: nu below the supported range [1e-3, 1e7]");
  }
  normal_limit_ = nu > kNuNormalLimit;
  if (normal_limit_) {
    log_norm_ = -kLnSqrt2Pi;
    return;
  }
  // ln k with k = 2^(5/2) Gamma(nu/4+3/2) / (sqrt(pi nu) Gamma(nu/4) (nu+1)).
  log_norm_ = 2.5 * std::numbers::ln2 + log_gamma_ratio(nu / 4.0, 1.5) -
              0.5 * std::log(std::numbers::pi * nu) - std::log1p(nu);
}

double TwinT::pdf(double x) const {
  check_finite(x, "twin-t pdf");
  if (normal_limit_) return std_normal_pdf(x);
  return std::exp(log_pdf(x));
}

double TwinT::log_pdf(double x) const {
  check_finite(x, "twin-t log_pdf");
  if (normal_limit_) return -0.5 * x * x - kLnSqrt2Pi;
  return log_norm_ - 0.5 * (nu_ + 1.0) * log_kernel_arg(nu_, x);
}

double TwinT::cdf(double x) const {
  check_finite(x, "twin-t cdf");
  if (std::isinf(x)) return x > 0.0 ? 1.0 : 0.0;
  if (normal_limit_) return std_normal_cdf(x);
  if (x == 0.0) return 0.5;
  const double ax = std::fabs(x);
  // For x > 0: F = 1 + x f(x) - I((C+S)^-2; nu/4, 3/2) / 2, the single
  // incomplete-beta form. Negative x by symmetry.
  const double a2 = 2.0 * log_kernel_arg(nu_, ax);
  const double p = std::exp(-a2);
  const double one_minus_p = -std::expm1(-a2);
  const double upper =
      1.0 + ax * pdf(ax) - 0.5 * reg_inc_beta_c(p, one_minus_p, nu_ / 4.0, 1.5);
  return x > 0.0 ? upper : 1.0 - upper;
}

double TwinT::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::domain_error("twin-t quantile: u must lie strictly inside (0, 1)");
  }
  if (u == 0.5) return 0.0;
  // Solve on the upper half by symmetry, then restore the sign.
  const double target = u >= 0.5 ? u : 1.0 - u;

  double lo = 0.0;
  double hi = 1.0;
  while (cdf(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) {
      throw std::runtime_error("twin-t quantile: value outside representable range");
    }
  }

  double x = 0.0;  // Newton start, per the defining iteration
  double fx = 0.5 - target;
  double step = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 200; ++iter) {
    // Converge in both the cdf value and the abscissa; the cdf criterion
    // alone leaves x under-determined where the density is tiny.
    const double x_scale = std::max(1.0, std::fabs(x));
    if (std::fabs(fx) <= 1e-10 && (step <= 1e-9 * x_scale || hi - lo <= 1e-12 * x_scale)) {
      break;
    }
    const double dens = pdf(x);
    double next = dens > 0.0 ? x - fx / dens : std::numeric_limits<double>::quiet_NaN();
    if (!std::isfinite(next) || next <= lo || next >= hi) {
      next = 0.5 * (lo + hi);  // bisect when Newton leaves the bracket
    }
    step = std::fabs(next - x);
    x = next;
    fx = cdf(x) - target;
    if (fx > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
  }
  if (std::fabs(fx) <= 1e-10) return u >= 0.5 ? x : -x;
  throw std::runtime_error("twin-t quantile: Newton/bisection failed to converge");
}

double TwinT::draw(Rng& rng, std::uint64_t* proposals) const {
  if (normal_limit_) {
    if (proposals) ++*proposals;
    return rng.normal();
  }
  for (;;) {
    if (proposals) ++*proposals;
    const double x = rng.student_t(nu_);
    const double S = x * x / nu_;
    // Accept with probability ((1+S)/(C+S))^((nu+1)/2).
    const double log_accept = 0.5 * (nu_ + 1.0) * (std::log1p(S) - std::asinh(S));
    if (std::log(rng.uniform()) < log_accept) return x;
  }
}

std::vector<double> TwinT::sample(std::size_t n, std::uint64_t seed) const {
  return sample_counted(n, seed).values;
}

SampleResult TwinT::sample_counted(std::size_t n, std::uint64_t seed) const {
  Rng rng(seed);
  SampleResult out;
  out.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.values.push_back(draw(rng, &out.proposals));
  return out;
}

std::optional<double> TwinT::variance() const {
  if (normal_limit_) return 1.0;
  if (!(nu_ > 2.0)) return std::nullopt;
  const double log_ratio = log_gamma_ratio(nu_ / 4.0, 0.5);
  return 4.0 * (nu_ + 2.0) / ((nu_ + 4.0) * (nu_ - 2.0)) * std::exp(2.0 * log_ratio);
}

std::optional<double> TwinT::fourth_moment() const {
  if (normal_limit_) return 3.0;
  if (!(nu_ > 4.0)) return std::nullopt;
  return 3.0 * nu_ * nu_ / ((nu_ - 4.0) * (nu_ + 6.0));
}

std::optional<double> TwinT::even_moment(int m) const {
  if (m < 1) throw std::invalid_argument("even_moment: m must be >= 1");
  if (normal_limit_) {
    double v = 1.0;  // (2m-1)!!
    for (int j = 3; j <= 2 * m - 1; j += 2) v *= j;
    return v;
  }
  if (!(nu_ > 2.0 * m)) return std::nullopt;
  const double md = m;
  const double log_val = (3.0 - 3.0 * md) * std::numbers::ln2 + md * std::log(nu_) +
                         std::lgamma(2.0 * md) - std::lgamma(md) -
                         std::log(nu_ + 2.0 * md + 2.0) -
                         log_gamma_ratio(nu_ / 4.0 - md / 2.0, md / 2.0) -
                         log_gamma_ratio(nu_ / 4.0 + 1.5, (md - 2.0) / 2.0);
  return std::exp(log_val);
}

std::optional<double> TwinT::abs_moment() const {
  if (normal_limit_) return std::sqrt(2.0 / std::numbers::pi);
  if (!(nu_ > 1.0)) return std::nullopt;
  const double log_val = 3.5 * std::numbers::ln2 + 0.5 * std::log(nu_) +
                         log_gamma_ratio(nu_ / 4.0, 1.5) -
                         0.5 * std::log(std::numbers::pi) - std::log(nu_ - 1.0) -
                         std::log(nu_ + 3.0);
  return std::exp(log_val);
}

double TwinT::log_pdf_series(double x, int terms) const {
  if (terms < 1 || terms > 3) {
    throw std::invalid_argument("log_pdf_series: terms must be 1, 2 or 3");
  }
  const double u = x * x / nu_;
  double series = u;
  if (terms >= 2) series -= u * u * u / 6.0;
  if (terms >= 3) series += 3.0 * std::pow(u, 5) / 40.0;
  return log_norm_ - 0.5 * (nu_ + 1.0) * series;
}

}  // namespace twintt
