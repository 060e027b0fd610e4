#pragma once

#include <cstddef>
#include <functional>

namespace twintt {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
};

/// Globally adaptive Gauss-Kronrod (7,15) integration of f over [a, b].
/// Panels are split worst-first until the summed error estimate drops below
/// abs_tol or the panel budget is exhausted.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol = 1e-10, std::size_t max_panels = 4000);

/// Integral of f over the whole real line via the map x = t/(1-t^2),
/// which turns polynomial tails into integrable endpoint behaviour on (-1,1).
QuadratureResult integrate_real_line(const std::function<double(double)>& f,
                                     double abs_tol = 1e-10, std::size_t max_panels = 4000);

/// Integral of f over (0, infinity) via x = t/(1-t^2) on (0,1).
QuadratureResult integrate_half_line(const std::function<double(double)>& f,
                                     double abs_tol = 1e-10, std::size_t max_panels = 4000);

}  // namespace twintt
