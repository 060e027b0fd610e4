#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cstdint>
#include <optional>

#include "twintt/rng.hpp"

namespace twintt {

/// Elliptical p-dimensional twin-t with location mu and SPD scale matrix V.
/// Density depends on x only through Q = (x-mu)^T V^-1 (x-mu); p = 1
/// recovers the univariate density. Immutable; the Cholesky factor of V is
/// cached at construction.
class MultivariateTwinT {
 public:
  MultivariateTwinT(double nu, Eigen::VectorXd mu, Eigen::MatrixXd scale);

  int dim() const { return static_cast<int>(mu_.size()); }
  double nu() const { return nu_; }
  const Eigen::VectorXd& mu() const { return mu_; }
  const Eigen::MatrixXd& scale_matrix() const { return scale_; }

  double log_pdf(const Eigen::VectorXd& x) const;
  double pdf(const Eigen::VectorXd& x) const;

  /// Quadratic form Q via Cholesky solve (no explicit inverse).
  double mahalanobis_sq(const Eigen::VectorXd& x) const;

  /// E{(x-mu)(x-mu)^T} = coefficient(nu, p) * V for nu > 2; empty otherwise.
  std::optional<Eigen::MatrixXd> second_moment() const;
  static std::optional<double> second_moment_coefficient(double nu, int p);

  /// n draws (rows) by radial decomposition: the squared-radius substitution
  /// q = (C+S)^-2 turns the radial law into a two-component beta mixture,
  /// which is sampled exactly; directions are uniform on the sphere.
  Eigen::MatrixXd sample(std::size_t n, std::uint64_t seed) const;

  double draw_radius(Rng& rng) const;

 private:
  double nu_;
  Eigen::VectorXd mu_;
  Eigen::MatrixXd scale_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double half_log_det_ = 0.0;
  double log_norm_ = 0.0;  // excludes the |V|^(-1/2) factor
};

/// Method-of-moments starting values at a fixed nu > 2: mu from column
/// means, V from the sample covariance divided by the second-moment
/// coefficient. Throws std::runtime_error when the sample covariance is
/// rank-deficient.
struct MomentInit {
  Eigen::VectorXd mu;
  Eigen::MatrixXd scale;
};
MomentInit method_of_moments_init(const Eigen::MatrixXd& data, double nu_fixed);

}  // namespace twintt
