#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "twintt/rng.hpp"
#include "twintt/twin_t.hpp"

namespace twintt {

/// The skewing weight p(x) = 1/2 + sqrt(C) (x/sqrt(nu)) / (C + x^2/nu),
/// an increasing map of the real line onto (0,1) with p(-x) = 1 - p(x)
/// and (p(1-p))^(1/4) = 2^(-1/2)/(C+S).
double skew_weight(const TwinT& d, double x);

/// ln p(x) and ln(1 - p(x)) computed together; the smaller factor is
/// recovered from the product identity p(1-p) = 1/(4 (C+S)^4) so both stay
/// accurate deep into the tails.
struct SkewWeightLogs {
  double log_p;
  double log_q;  // ln(1 - p)
};
SkewWeightLogs skew_weight_logs(double nu, double x);

/// Two-piece skew twin-t: the symmetric density rescaled by gamma on the
/// positive side and 1/gamma on the negative side. gamma = 1 recovers the
/// symmetric distribution; P(X > 0) = gamma^2/(1+gamma^2).
class TwoPieceTwinT {
 public:
  TwoPieceTwinT(TwinT base, double gamma);

  const TwinT& base() const { return base_; }
  double gamma() const { return gamma_; }

  double pdf(double x) const;
  double log_pdf(double x) const;
  double cdf(double x) const;
  double quantile(double u) const;

  /// E(X^r) = M_r (gamma^(r+1) - (-1/gamma)^(r+1)) / (gamma + 1/gamma) with
  /// M_r the absolute moment of the symmetric base; empty when nu <= r.
  std::optional<double> moment(int r) const;

  double draw(Rng& rng) const;
  std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

 private:
  TwinT base_;
  double gamma_;
  double log_scale_;  // ln(2/(gamma + 1/gamma))
};

/// Jones-style skew twin-t: the symmetric kernel split into the factors
/// p(x) and 1-p(x) raised to powers (a+1/2)/4 and (b+1/2)/4 with a+b = nu.
/// The normalization constant comes from numerical integration and is
/// cached at construction. a = b = nu/2 recovers the symmetric density.
class JonesTwinT {
 public:
  JonesTwinT(double a, double b);

  double a() const { return a_; }
  double b() const { return b_; }
  double nu() const { return base_.nu(); }
  const TwinT& base() const { return base_; }

  /// ln c, cached; equals the symmetric twin-t constant when a = b.
  double log_norm_const() const { return log_norm_; }

  double pdf(double x) const;
  double log_pdf(double x) const;

  std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

 private:
  double a_;
  double b_;
  TwinT base_;
  double log_norm_;
};

/// Azzalini-style skew twin-t with pdf 2 G(x; phi) f(x), where the skewing
/// function G(x; phi) = (1-phi)/2 + phi p(x) satisfies G(x) + G(-x) = 1.
/// phi = 0 recovers the symmetric density; even moments are unchanged.
class AzzaliniTwinT {
 public:
  AzzaliniTwinT(TwinT base, double phi);

  const TwinT& base() const { return base_; }
  double phi() const { return phi_; }

  double skewing_cdf(double x) const;  // G(x; phi)
  double pdf(double x) const;
  double log_pdf(double x) const;

  std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

 private:
  TwinT base_;
  double phi_;
};

/// Largest density/envelope ratio over a wide deterministic grid, padded by
/// 5%; a starting envelope constant for rejection_sample.
double envelope_constant(const std::function<double(double)>& density,
                         const TwinT& proposal);

/// Exact rejection sampling of `density` from a scaled twin-t proposal.
/// The domination density(x) <= m * proposal.pdf(x) is checked on a grid up
/// front; a violation throws std::runtime_error before any draw is made.
std::vector<double> rejection_sample(const std::function<double(double)>& density,
                                     const TwinT& proposal, double m, std::size_t n,
                                     std::uint64_t seed);

}  // namespace twintt
