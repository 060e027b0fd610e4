#include "twintt/skew.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "twintt/quadrature.hpp"

namespace twintt {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void check_x(double x, const char* where) {
  if (std::isnan(x)) throw std::domain_error(std::string(where) + ": x must not be NaN");
}

// Signed offset p(x) - 1/2 = sqrt(C) (x/sqrt(nu)) / (C + S); all factors
// positive for x > 0, so no cancellation in the offset itself.
double skew_offset(double nu, double x) {
  if (std::fabs(x) > 1e140) return std::copysign(0.5, x);
  const double S = x * x / nu;
  const double C = std::hypot(1.0, S);
  return std::sqrt(C) * (x / std::sqrt(nu)) / (C + S);
}

}  // namespace

double skew_weight(const TwinT& d, double x) {
  check_x(x, "skew_weight");
  const double off = skew_offset(d.nu(), x);
  if (off > 0.25) {
    // p close to 1: recover 1-p from p(1-p) = 1/(4(C+S)^4) and subtract.
    const double p = 0.5 + off;
    return 1.0 - std::exp(-kLn2 * 2.0 - std::log(p) - 4.0 * log_c_plus_s(d.nu(), x));
  }
  if (off < -0.25) {
    const double q = 0.5 - off;  // accurate: 1 - p(x) = p(-x)
    return std::exp(-kLn2 * 2.0 - std::log(q) - 4.0 * log_c_plus_s(d.nu(), x));
  }
  return 0.5 + off;
}

SkewWeightLogs skew_weight_logs(double nu, double x) {
  const double off = skew_offset(nu, x);
  // The smaller weight comes out of the product identity; the larger one is
  // then recovered through log1p so it keeps its (tiny) negative value.
  auto larger_from = [](double log_smaller) {
    return log_smaller > -37.0 ? std::log1p(-std::exp(log_smaller))
                               : -std::exp(log_smaller);
  };
  if (off >= 0.0) {
    const double log_q =
        -2.0 * kLn2 - std::log(0.5 + off) - 4.0 * log_c_plus_s(nu, x);
    return {larger_from(log_q), log_q};
  }
  const double log_p = -2.0 * kLn2 - std::log(0.5 - off) - 4.0 * log_c_plus_s(nu, x);
  return {log_p, larger_from(log_p)};
}

// ---------------------------------------------------------------------------
// Two-piece

TwoPieceTwinT::TwoPieceTwinT(TwinT base, double gamma) : base_(base), gamma_(gamma) {
  if (std::isnan(gamma) || !(gamma > 0.0) || std::isinf(gamma)) {
    throw std::domain_error("two-piece: gamma must be a positive finite real");
  }
  log_scale_ = kLn2 - std::log(gamma + 1.0 / gamma);
}

double TwoPieceTwinT::pdf(double x) const { return std::exp(log_pdf(x)); }

double TwoPieceTwinT::log_pdf(double x) const {
  check_x(x, "two-piece log_pdf");
  const double z = x >= 0.0 ? x / gamma_ : x * gamma_;
  return log_scale_ + base_.log_pdf(z);
}

double TwoPieceTwinT::cdf(double x) const {
  check_x(x, "two-piece cdf");
  const double g2 = gamma_ * gamma_;
  if (x < 0.0) return 2.0 / (1.0 + g2) * base_.cdf(gamma_ * x);
  return 1.0 - 2.0 * g2 / (1.0 + g2) * (1.0 - base_.cdf(x / gamma_));
}

double TwoPieceTwinT::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::domain_error("two-piece quantile: u must lie strictly inside (0, 1)");
  }
  const double g2 = gamma_ * gamma_;
  const double split = 1.0 / (1.0 + g2);  // cdf at 0
  if (u < split) return base_.quantile(0.5 * u * (1.0 + g2)) / gamma_;
  if (u == split) return 0.0;
  return gamma_ * base_.quantile(1.0 - 0.5 * (1.0 - u) * (1.0 + g2) / g2);
}

std::optional<double> TwoPieceTwinT::moment(int r) const {
  if (r < 1) throw std::invalid_argument("two-piece moment: r must be >= 1");
  if (!(base_.nu() > r)) return std::nullopt;

  double abs_moment;  // M_r = E|X|^r under the symmetric base
  if (r == 1) {
    abs_moment = *base_.abs_moment();
  } else if (r % 2 == 0) {
    abs_moment = *base_.even_moment(r / 2);
  } else {
    const TwinT& f = base_;
    auto integrand = [&f, r](double s) { return 2.0 * std::pow(s, r) * f.pdf(s); };
    const QuadratureResult q = integrate_half_line(integrand, 1e-10);
    if (!q.converged) throw std::runtime_error("two-piece moment: quadrature failed");
    abs_moment = q.value;
  }
  const double bracket =
      std::pow(gamma_, r + 1) - std::pow(-1.0 / gamma_, r + 1);
  return abs_moment * bracket / (gamma_ + 1.0 / gamma_);
}

double TwoPieceTwinT::draw(Rng& rng) const {
  const double g2 = gamma_ * gamma_;
  const double p_positive = g2 / (1.0 + g2);
  if (base_.normal_limit()) {
    const double t = std::fabs(rng.normal());
    const bool positive = rng.uniform() < p_positive;
    return positive ? gamma_ * t : -t / gamma_;
  }
  const double nu = base_.nu();
  for (;;) {
    const double t = std::fabs(rng.student_t(nu));
    const bool positive = rng.uniform() < p_positive;
    const double S = t * t / nu;
    const double log_accept = 0.5 * (nu + 1.0) * (std::log1p(S) - std::asinh(S));
    if (std::log(rng.uniform()) < log_accept) {
      return positive ? gamma_ * t : -t / gamma_;
    }
  }
}

std::vector<double> TwoPieceTwinT::sample(std::size_t n, std::uint64_t seed) const {
  Rng rng(seed);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(draw(rng));
  return out;
}

// ---------------------------------------------------------------------------
// Jones-style

JonesTwinT::JonesTwinT(double a, double b) : a_(a), b_(b), base_(a + b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::domain_error("jones: shape parameters a and b must be positive finite");
  }
  const double nu = base_.nu();
  auto kernel = [this, nu](double x) {
    const SkewWeightLogs w = skew_weight_logs(nu, x);
    return std::exp(0.25 * (nu + 1.0) * kLn2 + 0.25 * (a_ + 0.5) * w.log_p +
                    0.25 * (b_ + 0.5) * w.log_q);
  };
  const QuadratureResult q = integrate_real_line(kernel, 1e-10, 20000);
  if (!q.converged) {
    throw std::runtime_error("jones: normalization quadrature did not reach tolerance");
  }
  log_norm_ = -std::log(q.value);
}

double JonesTwinT::pdf(double x) const { return std::exp(log_pdf(x)); }

double JonesTwinT::log_pdf(double x) const {
  check_x(x, "jones log_pdf");
  const double nu = base_.nu();
  const SkewWeightLogs w = skew_weight_logs(nu, x);
  return log_norm_ + 0.25 * (nu + 1.0) * kLn2 + 0.25 * (a_ + 0.5) * w.log_p +
         0.25 * (b_ + 0.5) * w.log_q;
}

std::vector<double> JonesTwinT::sample(std::size_t n, std::uint64_t seed) const {
  // Envelope with matching heavier-tail exponent: both tails of the target
  // fall off at least as fast as x^-(2 min(a,b)+1).
  const TwinT proposal(2.0 * std::min(a_, b_));
  auto density = [this](double x) { return pdf(x); };
  const double m = envelope_constant(density, proposal);
  return rejection_sample(density, proposal, m, n, seed);
}

// ---------------------------------------------------------------------------
// Azzalini-style

AzzaliniTwinT::AzzaliniTwinT(TwinT base, double phi) : base_(base), phi_(phi) {
  if (std::isnan(phi) || !(phi > -1.0 && phi < 1.0)) {
    throw std::domain_error("azzalini: phi must lie strictly inside (-1, 1)");
  }
}

double AzzaliniTwinT::skewing_cdf(double x) const {
  return 0.5 * (1.0 - phi_) + phi_ * skew_weight(base_, x);
}

double AzzaliniTwinT::pdf(double x) const {
  check_x(x, "azzalini pdf");
  return 2.0 * skewing_cdf(x) * base_.pdf(x);
}

double AzzaliniTwinT::log_pdf(double x) const {
  check_x(x, "azzalini log_pdf");
  const double g = skewing_cdf(x);
  if (g <= 0.0) return -std::numeric_limits<double>::infinity();
  return kLn2 + std::log(g) + base_.log_pdf(x);
}

std::vector<double> AzzaliniTwinT::sample(std::size_t n, std::uint64_t seed) const {
  auto density = [this](double x) { return pdf(x); };
  // 2G <= 1 + |phi| pointwise.
  const double m = 1.0 + std::fabs(phi_) + 1e-12;
  return rejection_sample(density, base_, m, n, seed);
}

// ---------------------------------------------------------------------------
// Generic rejection machinery

namespace {

std::vector<double> validation_grid() {
  std::vector<double> grid;
  for (double x = -8.0; x <= 8.0; x += 0.05) grid.push_back(x);
  for (int k = 0; k <= 64; ++k) {
    const double x = std::pow(10.0, k / 8.0);
    grid.push_back(x);
    grid.push_back(-x);
  }
  return grid;
}

}  // namespace

double envelope_constant(const std::function<double(double)>& density,
                         const TwinT& proposal) {
  double worst = 0.0;
  for (double x : validation_grid()) {
    const double prop = proposal.pdf(x);
    if (prop <= 0.0) continue;
    worst = std::max(worst, density(x) / prop);
  }
  if (!(worst > 0.0) || !std::isfinite(worst)) {
    throw std::runtime_error("envelope_constant: density/proposal ratio not usable");
  }
  return 1.05 * worst;
}

std::vector<double> rejection_sample(const std::function<double(double)>& density,
                                     const TwinT& proposal, double m, std::size_t n,
                                     std::uint64_t seed) {
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw std::domain_error("rejection_sample: envelope constant must be positive finite");
  }
  for (double x : validation_grid()) {
    const double bound = m * proposal.pdf(x);
    if (density(x) > bound * (1.0 + 1e-9)) {
      throw std::runtime_error("rejection_sample: envelope violated at x = " +
                               std::to_string(x));
    }
  }
  Rng rng(seed);
  std::vector<double> out;
  out.reserve(n);
  while (out.size() < n) {
    const double x = proposal.draw(rng);
    const double bound = m * proposal.pdf(x);
    if (rng.uniform() * bound <= density(x)) out.push_back(x);
  }
  return out;
}

}  // namespace twintt
