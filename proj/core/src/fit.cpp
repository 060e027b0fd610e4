#include "twintt/fit.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "twintt/rng.hpp"
#include "twintt/skew.hpp"
#include "twintt/student_t.hpp"
#include "twintt/twin_t.hpp"

namespace twintt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLnSqrt2Pi = 0.9189385332046727417803297364;
constexpr double kNuReportCap = 1e4;
constexpr double kNuFloor = 1e-3;

double safe_exp_nu(double log_nu) {
  const double nu = std::exp(log_nu);
  return nu < kNuFloor ? -1.0 : nu;  // negative marks an out-of-range value
}

bool family_has_nu(ErrorFamily f) { return f != ErrorFamily::normal; }

// Standardized log-density factory for the regression error families.
// Returns false when the parameters are outside the usable domain.
class ErrorDensity {
 public:
  bool reset(ErrorFamily family, double nu) {
    family_ = family;
    if (family == ErrorFamily::normal) return true;
    if (!(nu > 0.0)) return false;
    try {
      if (family == ErrorFamily::student_t) {
        t_.emplace(nu);
      } else {
        tt_.emplace(nu);
      }
    } catch (const std::domain_error&) {
      return false;
    }
    return true;
  }

  double log_pdf(double z) const {
    switch (family_) {
      case ErrorFamily::normal:
        return -0.5 * z * z - kLnSqrt2Pi;
      case ErrorFamily::student_t:
        return t_->log_pdf(z);
      case ErrorFamily::twin_t:
        return tt_->log_pdf(z);
    }
    return kNegInf;
  }

 private:
  ErrorFamily family_ = ErrorFamily::normal;
  std::optional<StudentT> t_;
  std::optional<TwinT> tt_;
};

struct RegressionLayout {
  std::size_t n_cov = 0;
  bool hetero = false;
  bool has_nu = false;
  std::size_t n_params() const { return 1 + n_cov + (hetero ? 2 : 1) + (has_nu ? 1 : 0); }
  std::size_t scale_index() const { return 1 + n_cov; }
  std::size_t nu_index() const { return scale_index() + (hetero ? 2 : 1); }
};

RegressionLayout layout_for(const RegressionSpec& spec) {
  RegressionLayout l;
  l.n_cov = spec.covariate_columns.size();
  l.hetero = spec.heteroscedastic;
  l.has_nu = family_has_nu(spec.error_family);
  return l;
}

const std::vector<double>& dispersion_column(const RegressionSpec& spec, const Dataset& data) {
  const std::string& name =
      spec.dispersion_column.empty() ? spec.covariate_columns.front() : spec.dispersion_column;
  return data.column(name);
}

double wrap_loglik(const RegressionSpec& spec, const RegressionLayout& layout,
                   const std::vector<double>& params, const Dataset& data,
                   ErrorDensity& density) {
  const std::vector<double>& y = data.column(spec.response_column);
  const std::size_t n = y.size();

  double nu = 0.0;
  if (layout.has_nu) {
    nu = safe_exp_nu(params[layout.nu_index()]);
    if (nu < 0.0) return kNegInf;
  }
  if (!density.reset(spec.error_family, nu)) return kNegInf;

  std::vector<const std::vector<double>*> covs;
  covs.reserve(layout.n_cov);
  for (const auto& name : spec.covariate_columns) covs.push_back(&data.column(name));

  const std::vector<double>* disp = layout.hetero ? &dispersion_column(spec, data) : nullptr;
  const double lambda0 = params[layout.scale_index()];
  const double lambda1 = layout.hetero ? params[layout.scale_index() + 1] : 0.0;

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double mean = params[0];
    for (std::size_t j = 0; j < layout.n_cov; ++j) mean += params[1 + j] * (*covs[j])[i];
    const double log_sigma =
        layout.hetero ? 0.5 * (lambda0 + lambda1 * (*disp)[i]) : lambda0;
    const double sigma = std::exp(log_sigma);
    if (!(sigma > 0.0) || !std::isfinite(sigma)) return kNegInf;
    total += -log_sigma + density.log_pdf((y[i] - mean) / sigma);
  }
  return std::isfinite(total) ? total : kNegInf;
}

struct NaturalizeOutcome {
  std::vector<std::pair<std::string, double>> estimates;
  std::vector<double> scale_factors;  // d(natural)/d(working) for delta-method SEs
  bool nu_capped = false;
};

// Multistart driver shared by both fitting entry points.
OptimizeResult run_multistart(const Objective& objective, std::vector<double> start,
                              std::optional<std::size_t> nu_index, const FitConfig& config) {
  OptimizeResult best = maximize(objective, start, config.optimizer);
  if (nu_index && config.multistart) {
    for (double log_nu : {0.0, std::log(10.0), std::log(100.0)}) {
      std::vector<double> alt = start;
      alt[*nu_index] = log_nu;
      if (!std::isfinite(objective(alt))) continue;
      OptimizeResult r = maximize(objective, alt, config.optimizer);
      if (r.value > best.value) best = std::move(r);
    }
  }
  return best;
}

// Standard errors from the observed information (inverse negative Hessian).
bool hessian_std_errors(const Objective& objective, const std::vector<double>& x,
                        std::vector<double>& out) {
  const Eigen::MatrixXd hess = numerical_hessian(objective, x);
  if (!hess.allFinite()) return false;
  Eigen::LLT<Eigen::MatrixXd> llt(-hess);
  if (llt.info() != Eigen::Success) return false;
  const Eigen::MatrixXd cov =
      llt.solve(Eigen::MatrixXd::Identity(hess.rows(), hess.cols()));
  out.resize(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!(cov(j, j) > 0.0)) return false;
    out[j] = std::sqrt(cov(j, j));
  }
  return true;
}

}  // namespace

double FitReport::estimate(const std::string& name) const {
  for (const auto& [key, value] : estimates) {
    if (key == name) return value;
  }
  throw std::out_of_range("FitReport: no estimate named '" + name + "'");
}

std::optional<double> FitReport::std_error(const std::string& name) const {
  for (const auto& [key, value] : std_errors) {
    if (key == name) return value;
  }
  return std::nullopt;
}

double regress_loglik(const RegressionSpec& spec, const std::vector<double>& params,
                      const Dataset& data) {
  if (spec.covariate_columns.empty()) {
    throw std::invalid_argument("regression: need at least one covariate column");
  }
  const RegressionLayout layout = layout_for(spec);
  if (params.size() != layout.n_params()) {
    throw std::invalid_argument("regression: expected " + std::to_string(layout.n_params()) +
                                " parameters, got " + std::to_string(params.size()));
  }
  ErrorDensity density;
  return wrap_loglik(spec, layout, params, data, density);
}

FitReport fit_regression(const RegressionSpec& spec, const Dataset& data,
                         const FitConfig& config) {
  if (spec.covariate_columns.empty()) {
    throw std::invalid_argument("regression: need at least one covariate column");
  }
  const RegressionLayout layout = layout_for(spec);
  const std::vector<double>& y = data.column(spec.response_column);
  if (y.size() <= layout.n_params()) {
    throw std::invalid_argument("regression: need more observations than parameters");
  }

  // Starting values: OLS coefficients, residual spread, nu = 5.
  std::vector<const std::vector<double>*> covs;
  for (const auto& name : spec.covariate_columns) covs.push_back(&data.column(name));
  const OlsFit ols = ols_fit(covs, y);
  const double log_sd0 = std::log(std::max(ols.residual_sd, 1e-8));

  std::vector<double> start;
  start.insert(start.end(), ols.beta.begin(), ols.beta.end());
  if (layout.hetero) {
    start.push_back(2.0 * log_sd0);
    start.push_back(0.0);
  } else {
    start.push_back(log_sd0);
  }
  if (layout.has_nu) start.push_back(std::log(5.0));

  ErrorDensity density;
  auto objective = [&](const std::vector<double>& p) {
    return wrap_loglik(spec, layout, p, data, density);
  };
  std::optional<std::size_t> nu_index;
  if (layout.has_nu) nu_index = layout.nu_index();
  const OptimizeResult opt = run_multistart(objective, start, nu_index, config);

  FitReport report;
  report.n_obs = y.size();
  report.converged = opt.converged;
  report.iterations = opt.iterations;
  report.loglik = opt.value;
  report.aic = 2.0 * static_cast<double>(layout.n_params()) - 2.0 * opt.value;

  std::vector<double> se_working;
  report.hessian_ok = hessian_std_errors(objective, opt.x, se_working);

  for (std::size_t j = 0; j <= layout.n_cov; ++j) {
    report.estimates.emplace_back("beta" + std::to_string(j), opt.x[j]);
    if (report.hessian_ok) {
      report.std_errors.emplace_back("beta" + std::to_string(j), se_working[j]);
    }
  }
  if (layout.hetero) {
    report.estimates.emplace_back("lambda0", opt.x[layout.scale_index()]);
    report.estimates.emplace_back("lambda1", opt.x[layout.scale_index() + 1]);
    if (report.hessian_ok) {
      report.std_errors.emplace_back("lambda0", se_working[layout.scale_index()]);
      report.std_errors.emplace_back("lambda1", se_working[layout.scale_index() + 1]);
    }
  } else {
    const double sigma = std::exp(opt.x[layout.scale_index()]);
    report.estimates.emplace_back("sigma", sigma);
    if (report.hessian_ok) {
      report.std_errors.emplace_back("sigma", sigma * se_working[layout.scale_index()]);
    }
  }
  if (layout.has_nu) {
    const double log_nu = opt.x[layout.nu_index()];
    const double nu = std::exp(log_nu);
    if (nu > kNuReportCap) {
      report.estimates.emplace_back("nu", kNuReportCap);
      report.warnings.push_back("nu reached the normal limit; tail exponent not identified");
    } else {
      report.estimates.emplace_back("nu", nu);
      if (report.hessian_ok) {
        const double se = se_working[layout.nu_index()];
        report.std_errors.emplace_back("nu", nu * se);
        report.nu_ci = std::make_pair(std::exp(log_nu - 1.959963984540054 * se),
                                      std::exp(log_nu + 1.959963984540054 * se));
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Curve fitting

namespace {

struct CurveLayout {
  bool has_skew = false;
  std::size_t n_params() const { return 3 + (has_skew ? 1 : 0); }
};

// log f((y - mu)/sigma)/sigma summed over the sample.
double curve_loglik(const CurveFitSpec& spec, const std::vector<double>& params,
                    const std::vector<double>& sample) {
  const double mu = params[0];
  const double log_sigma = params[1];
  const double sigma = std::exp(log_sigma);
  if (!(sigma > 0.0) || !std::isfinite(sigma)) return kNegInf;
  const double nu = safe_exp_nu(params[2]);
  if (nu < 0.0) return kNegInf;

  auto accumulate = [&](auto&& log_pdf_std) {
    double total = 0.0;
    for (double y : sample) total += -log_sigma + log_pdf_std((y - mu) / sigma);
    return std::isfinite(total) ? total : kNegInf;
  };

  try {
    if (spec.family == CurveFamily::student_t) {
      const StudentT t(nu);
      return accumulate([&t](double z) { return t.log_pdf(z); });
    }
    switch (spec.skew) {
      case SkewKind::none: {
        const TwinT f(nu);
        return accumulate([&f](double z) { return f.log_pdf(z); });
      }
      case SkewKind::two_piece: {
        const TwoPieceTwinT f(TwinT(nu), std::exp(params[3]));
        return accumulate([&f](double z) { return f.log_pdf(z); });
      }
      case SkewKind::jones: {
        const double logit = params[3];
        if (std::fabs(logit) > 15.0) return kNegInf;  // degenerate tail split
        const double frac = 1.0 / (1.0 + std::exp(-logit));
        const JonesTwinT f(nu * frac, nu * (1.0 - frac));
        return accumulate([&f](double z) { return f.log_pdf(z); });
      }
      case SkewKind::azzalini: {
        const AzzaliniTwinT f(TwinT(nu), std::tanh(params[3]));
        return accumulate([&f](double z) { return f.log_pdf(z); });
      }
    }
  } catch (const std::exception&) {
    return kNegInf;
  }
  return kNegInf;
}

const char* skew_param_name(SkewKind skew) {
  switch (skew) {
    case SkewKind::two_piece:
      return "gamma";
    case SkewKind::jones:
      return "a";
    case SkewKind::azzalini:
      return "phi";
    default:
      return "";
  }
}

FitReport fit_curve_once(const CurveFitSpec& spec, const std::vector<double>& sample,
                         const FitConfig& config, const std::vector<double>& start,
                         bool multistart);

std::vector<double> curve_start(const std::vector<double>& sample, bool has_skew) {
  const double n = static_cast<double>(sample.size());
  const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / n;
  double ss = 0.0;
  for (double y : sample) ss += (y - mean) * (y - mean);
  const double sd = std::sqrt(ss / std::max(1.0, n - 1.0));
  std::vector<double> start{mean, std::log(std::max(sd, 1e-8)), std::log(5.0)};
  if (has_skew) start.push_back(0.0);
  return start;
}

}  // namespace

FitReport fit_curve(const CurveFitSpec& spec, const std::vector<double>& sample,
                    const FitConfig& config) {
  if (sample.size() < 8) {
    throw std::invalid_argument("fit_curve: need at least 8 observations");
  }
  if (spec.skew != SkewKind::none && spec.family != CurveFamily::twin_t) {
    throw std::invalid_argument("fit_curve: skew variants are defined for the twin-t family");
  }
  CurveLayout layout{spec.skew != SkewKind::none};
  const std::vector<double> start = curve_start(sample, layout.has_skew);
  FitReport report = fit_curve_once(spec, sample, config, start, config.multistart);

  if (spec.skew == SkewKind::two_piece) {
    report.warnings.push_back(
        "two-piece family: curvature-based standard errors can be unreliable at the fold; "
        "bootstrap standard errors are recommended");
    if (config.bootstrap_replicates > 0) {
      // Resample rows, refit from the point estimate, report the spread.
      std::vector<double> working{report.estimate("mu"),
                                  std::log(report.estimate("sigma")),
                                  std::log(report.estimate("nu")),
                                  std::log(report.estimate("gamma"))};
      std::vector<std::vector<double>> draws(working.size());
      FitConfig boot_config = config;
      boot_config.bootstrap_replicates = 0;
      boot_config.multistart = false;
      std::vector<double> resampled(sample.size());
      int used = 0;
      for (int rep = 0; rep < config.bootstrap_replicates; ++rep) {
        Rng rng(config.bootstrap_seed, static_cast<std::uint64_t>(rep) + 1);
        for (auto& v : resampled) {
          v = sample[static_cast<std::size_t>(rng.uniform() * sample.size())];
        }
        try {
          FitReport r = fit_curve_once(spec, resampled, boot_config, working, false);
          if (!r.converged) continue;
          draws[0].push_back(r.estimate("mu"));
          draws[1].push_back(r.estimate("sigma"));
          draws[2].push_back(r.estimate("nu"));
          draws[3].push_back(r.estimate("gamma"));
          ++used;
        } catch (const std::exception&) {
          continue;
        }
      }
      if (used >= 10) {
        const char* names[4] = {"mu", "sigma", "nu", "gamma"};
        report.std_errors.clear();
        for (int j = 0; j < 4; ++j) {
          const auto& d = draws[j];
          const double mean = std::accumulate(d.begin(), d.end(), 0.0) / d.size();
          double ss = 0.0;
          for (double v : d) ss += (v - mean) * (v - mean);
          report.std_errors.emplace_back(names[j], std::sqrt(ss / (d.size() - 1.0)));
        }
        report.warnings.push_back("standard errors from " + std::to_string(used) +
                                  " bootstrap replicates");
      } else {
        report.warnings.push_back("bootstrap requested but too few replicates converged");
      }
    }
  }
  return report;
}

namespace {

FitReport fit_curve_once(const CurveFitSpec& spec, const std::vector<double>& sample,
                         const FitConfig& config, const std::vector<double>& start,
                         bool multistart) {
  auto objective = [&](const std::vector<double>& p) {
    return curve_loglik(spec, p, sample);
  };
  FitConfig local = config;
  local.multistart = multistart;
  const OptimizeResult opt = run_multistart(objective, start, std::size_t{2}, local);

  FitReport report;
  report.n_obs = sample.size();
  report.converged = opt.converged;
  report.iterations = opt.iterations;
  report.loglik = opt.value;
  report.aic = 2.0 * static_cast<double>(start.size()) - 2.0 * opt.value;

  std::vector<double> se_working;
  report.hessian_ok = hessian_std_errors(objective, opt.x, se_working);

  const double sigma = std::exp(opt.x[1]);
  const double log_nu = opt.x[2];
  const double nu = std::exp(log_nu);
  const bool capped = nu > kNuReportCap;

  report.estimates.emplace_back("mu", opt.x[0]);
  report.estimates.emplace_back("sigma", sigma);
  report.estimates.emplace_back("nu", capped ? kNuReportCap : nu);
  if (capped) {
    report.warnings.push_back("nu reached the normal limit; tail exponent not identified");
  }
  if (report.hessian_ok) {
    report.std_errors.emplace_back("mu", se_working[0]);
    report.std_errors.emplace_back("sigma", sigma * se_working[1]);
    if (!capped) {
      report.std_errors.emplace_back("nu", nu * se_working[2]);
      report.nu_ci = std::make_pair(std::exp(log_nu - 1.959963984540054 * se_working[2]),
                                    std::exp(log_nu + 1.959963984540054 * se_working[2]));
    }
  }

  if (spec.skew != SkewKind::none) {
    const double raw = opt.x[3];
    switch (spec.skew) {
      case SkewKind::two_piece: {
        const double gamma = std::exp(raw);
        report.estimates.emplace_back("gamma", gamma);
        if (report.hessian_ok) {
          report.std_errors.emplace_back("gamma", gamma * se_working[3]);
        }
        break;
      }
      case SkewKind::jones: {
        const double frac = 1.0 / (1.0 + std::exp(-raw));
        const double a = (capped ? kNuReportCap : nu) * frac;
        report.estimates.emplace_back("a", a);
        report.estimates.emplace_back("b", (capped ? kNuReportCap : nu) - a);
        if (report.hessian_ok) {
          // d a / d raw = nu * frac * (1 - frac) at fixed nu
          report.std_errors.emplace_back("a", nu * frac * (1.0 - frac) * se_working[3]);
        }
        break;
      }
      case SkewKind::azzalini: {
        const double phi = std::tanh(raw);
        report.estimates.emplace_back("phi", phi);
        if (report.hessian_ok) {
          report.std_errors.emplace_back("phi", (1.0 - phi * phi) * se_working[3]);
        }
        break;
      }
      default:
        break;
    }
  }
  return report;
}

}  // namespace

}  // namespace twintt
