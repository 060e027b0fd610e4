#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twintt/dataset.hpp"
#include "twintt/optimize.hpp"

namespace twintt {

enum class ErrorFamily { normal, student_t, twin_t };
enum class SkewKind { none, two_piece, jones, azzalini };
enum class CurveFamily { twin_t, student_t };

/// Linear regression with a chosen error law. With heteroscedastic = true
/// the error scale follows log sigma^2 = lambda0 + lambda1 * x over the
/// designated dispersion covariate (the first covariate when unset).
struct RegressionSpec {
  ErrorFamily error_family = ErrorFamily::twin_t;
  bool heteroscedastic = false;
  std::string response_column;
  std::vector<std::string> covariate_columns;
  std::string dispersion_column;  // optional; defaults to covariate_columns[0]
};

/// Location-scale(-skew) fit of a univariate sample.
struct CurveFitSpec {
  CurveFamily family = CurveFamily::twin_t;
  SkewKind skew = SkewKind::none;
  std::string column;
};

struct FitConfig {
  OptimizeConfig optimizer;
  bool multistart = true;          // extra ln(nu) starts {ln 1, ln 10, ln 100}
  int bootstrap_replicates = 0;    // resampled-refit standard errors when > 0
  std::uint64_t bootstrap_seed = 1729;
};

struct FitReport {
  std::vector<std::pair<std::string, double>> estimates;   // natural scale
  std::vector<std::pair<std::string, double>> std_errors;  // present iff hessian_ok
  double loglik = 0.0;
  double aic = 0.0;
  std::size_t n_obs = 0;
  bool converged = false;
  int iterations = 0;
  bool hessian_ok = false;
  std::optional<std::pair<double, double>> nu_ci;  // 95% Wald interval, ln nu scale
  std::vector<std::string> warnings;

  double estimate(const std::string& name) const;
  std::optional<double> std_error(const std::string& name) const;
};

/// Log-likelihood of the regression at the given working parameters,
/// ordered (beta..., ln sigma | lambda0 lambda1, ln nu when the family has
/// one). Returns -infinity instead of propagating non-finite values.
double regress_loglik(const RegressionSpec& spec, const std::vector<double>& params,
                      const Dataset& data);

FitReport fit_regression(const RegressionSpec& spec, const Dataset& data,
                         const FitConfig& config = {});

FitReport fit_curve(const CurveFitSpec& spec, const std::vector<double>& sample,
                    const FitConfig& config = {});

}  // namespace twintt
