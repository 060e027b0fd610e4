#pragma once

#include <functional>
#include <vector>

namespace twintt {

/// Distribution function of a density that has no closed-form cdf.
///
/// The real line is mapped to (-1,1) by x = t/(1-t^2); the cdf is integrated
/// once at construction and stored as a piecewise Chebyshev-Lobatto
/// interpolant in t, so evaluation and quantile lookups afterwards cost no
/// further quadrature. The stored curve is renormalized by the total mass,
/// which for a proper density differs from 1 only by quadrature error.
class NumericCdf {
 public:
  explicit NumericCdf(std::function<double(double)> pdf, int panels = 48,
                      int degree = 16, double node_tol = 1e-12);

  double operator()(double x) const;

  /// Inverse cdf to |cdf(x) - u| <= 1e-10.
  double quantile(double u) const;

  /// Integral of the supplied pdf before renormalization.
  double total_mass() const { return total_; }

 private:
  double eval_t(double t) const;

  int panels_;
  int degree_;
  double total_;
  std::vector<double> nodes_;   // (degree+1) per panel, ascending in t
  std::vector<double> values_;  // accumulated cdf at the nodes
};

}  // namespace twintt
