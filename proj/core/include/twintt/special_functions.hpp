#pragma once

namespace twintt {

/// Natural log of the gamma function for x > 0.
/// Throws std::domain_error for x <= 0 or non-finite x.
double log_gamma(double x);

/// ln Gamma(x + d) - ln Gamma(x) evaluated without the cancellation that a
/// naive difference of two large log-gamma values suffers from. Requires
/// x > 0 and x + d > 0.
double log_gamma_ratio(double x, double d);

/// ln B(a, b) for a, b > 0.
double log_beta(double a, double b);

/// Regularized incomplete beta function I(z; a, b) for z in [0, 1] and
/// a, b > 0. Continued-fraction evaluation with the symmetry switch at
/// z = (a+1)/(a+b+2), absolute accuracy ~1e-14.
double reg_inc_beta(double z, double a, double b);

/// Same as reg_inc_beta but taking 1-z as an explicit argument, for callers
/// that can compute the complement without cancellation (z near 1).
double reg_inc_beta_c(double z, double one_minus_z, double a, double b);

}  // namespace twintt
