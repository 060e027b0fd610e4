#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

namespace twintt {

using Objective = std::function<double(const std::vector<double>&)>;

struct OptimizeConfig {
  double f_tol = 1e-10;        // relative function-value tolerance
  double x_tol = 1e-8;         // parameter spread tolerance
  int max_simplex_iter = 5000;
  int max_polish_iter = 500;   // quasi-Newton steps after the simplex
};

struct OptimizeResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Derivative-free maximization: Nelder-Mead simplex refinement followed by
/// a BFGS polish with central-difference gradients. Non-finite objective
/// values are treated as -infinity. Deterministic given x0 and config.
OptimizeResult maximize(const Objective& f, std::vector<double> x0,
                        const OptimizeConfig& config = {});

/// Central-difference Hessian with steps h_j = max(1e-4, 1e-4 |x_j|);
/// symmetric by construction.
Eigen::MatrixXd numerical_hessian(const Objective& f, const std::vector<double>& x);

/// Ordinary least squares with intercept; covariates are columns.
struct OlsFit {
  std::vector<double> beta;        // beta[0] is the intercept
  std::vector<double> std_errors;
  double residual_sd = 0.0;        // sqrt(rss / (n - k))
  double rss = 0.0;
};
OlsFit ols_fit(const std::vector<const std::vector<double>*>& covariates,
               const std::vector<double>& y);

}  // namespace twintt
