#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

namespace twintt {

/// Generalized twin-t with kernel
/// (sqrt(1+(|x|^b/g)^2) + |x|^b/g)^(-g-1/b), the heavy-tailed analogue of
/// the generalized-t family: b controls the shape of the body, the tail
/// falls off like |x|^(-bg-1). b = 2, g = nu/2 recovers the twin-t with the
/// variable scaled by 1/sqrt(2).
class GeneralizedTwinT {
 public:
  GeneralizedTwinT(double power, double shape);

  double power() const { return beta_; }  // b above
  double shape() const { return gam_; }   // g above

  double pdf(double x) const;
  double log_pdf(double x) const;
  double cdf(double x) const;

  /// Inverse cdf to |cdf(x) - u| <= 1e-10.
  double quantile(double u) const;

  /// Fractional absolute moment E|X|^r for 0 < r < power*shape; empty when
  /// the tail condition fails.
  std::optional<double> abs_moment(double r) const;

  /// Rejection draws from a scaled twin-t envelope with the matching tail
  /// exponent.
  std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

 private:
  double log_kernel_arg(double x) const;  // asinh(|x|^b / g)

  double beta_;
  double gam_;
  double log_norm_;
};

/// Multivariate generalized twin-t: the univariate kernel with Q^(b/2)/g in
/// place of |x|^b/g, Q the Mahalanobis quadratic form under SPD scale V.
class GeneralizedMvTwinT {
 public:
  GeneralizedMvTwinT(double power, double shape, Eigen::VectorXd mu, Eigen::MatrixXd scale);

  int dim() const { return static_cast<int>(mu_.size()); }
  double log_pdf(const Eigen::VectorXd& x) const;
  double pdf(const Eigen::VectorXd& x) const;

 private:
  double beta_;
  double gam_;
  Eigen::VectorXd mu_;
  Eigen::MatrixXd scale_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double half_log_det_ = 0.0;
  double log_norm_ = 0.0;
};

}  // namespace twintt
