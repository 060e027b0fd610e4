#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "twintt/rng.hpp"

namespace twintt {

/// The quantities S = x^2/nu, C = sqrt(1+S^2) and p = (C+S)^-2 that every
/// closed-form expression of the family is written in. (C+S)(C-S) = 1.
struct KernelTerms {
  double S;
  double C;
  double p;
};

KernelTerms kernel_terms(double nu, double x);

/// ln(C + S) = asinh(x^2/nu), evaluated without forming x^2 when that would
/// overflow; finite for every finite x.
double log_c_plus_s(double nu, double x);

struct SampleResult {
  std::vector<double> values;
  std::uint64_t proposals = 0;
};

/// Standard twin-t distribution: density proportional to
/// (x^2/nu + sqrt(1 + (x^2/nu)^2))^-((nu+1)/2). Heavy t-like power tails
/// with a Gaussian-like body; converges to the standard normal as
/// nu -> infinity.
///
/// nu is accepted on [1e-3, 1e7]; larger values (including infinity) are
/// evaluated as the exact standard normal limit. Instances are immutable
/// and safe to share across threads.
class TwinT {
 public:
  explicit TwinT(double nu);

  double nu() const { return nu_; }
  bool normal_limit() const { return normal_limit_; }

  /// ln k, the log of the normalization constant in front of the kernel.
  double log_norm_const() const { return log_norm_; }

  double pdf(double x) const;
  double log_pdf(double x) const;
  double cdf(double x) const;

  /// Inverse cdf to |cdf(x) - u| <= 1e-10, bracketed Newton from x = 0.
  double quantile(double u) const;

  /// One draw by rejection from the t(nu) proposal; counts proposals used.
  double draw(Rng& rng, std::uint64_t* proposals = nullptr) const;

  std::vector<double> sample(std::size_t n, std::uint64_t seed) const;
  SampleResult sample_counted(std::size_t n, std::uint64_t seed) const;

  /// Moments; empty when the existence condition on nu fails.
  std::optional<double> variance() const;            // nu > 2
  std::optional<double> fourth_moment() const;       // nu > 4
  std::optional<double> even_moment(int m) const;    // E(X^2m), nu > 2m
  std::optional<double> abs_moment() const;          // E|X|, nu > 1

  /// Truncated log-density expansion around 0 (1 to 3 terms of the odd
  /// series in x^2/nu); diagnostic companion to log_pdf.
  double log_pdf_series(double x, int terms) const;

 private:
  double nu_;
  double log_norm_;
  bool normal_limit_;
};

/// Location-scale wrapper: density(y) = base.pdf((y-mu)/sigma)/sigma.
template <class Base>
class LocationScale {
 public:
  LocationScale(Base base, double mu, double sigma);

  const Base& base() const { return base_; }
  double mu() const { return mu_; }
  double sigma() const { return sigma_; }

  double pdf(double y) const { return base_.pdf((y - mu_) / sigma_) / sigma_; }
  double log_pdf(double y) const {
    return base_.log_pdf((y - mu_) / sigma_) - std::log(sigma_);
  }

  double cdf(double y) const
    requires requires(const Base& b, double v) { b.cdf(v); }
  {
    return base_.cdf((y - mu_) / sigma_);
  }

  double quantile(double u) const
    requires requires(const Base& b, double v) { b.quantile(v); }
  {
    return mu_ + sigma_ * base_.quantile(u);
  }

  double draw(Rng& rng) const
    requires requires(const Base& b, Rng& r) { b.draw(r); }
  {
    return mu_ + sigma_ * base_.draw(rng);
  }

 private:
  Base base_;
  double mu_;
  double sigma_;
};

template <class Base>
LocationScale<Base>::LocationScale(Base base, double mu, double sigma)
    : base_(std::move(base)), mu_(mu), sigma_(sigma) {
  if (!(sigma > 0.0)) throw std::domain_error("LocationScale: sigma must be > 0");
}

}  // namespace twintt
