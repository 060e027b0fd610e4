// twintt: heavy-tailed twin-t distribution toolkit.
//
// Subcommands:
//   dist          pdf/cdf/quantile/sample for the distribution families
//   fit regress   robust linear regression (normal, t, twin-t errors)
//   fit curve     location-scale(-skew) frequency-curve fitting
//   simulate      regression robustness study with ecdf summaries
//
// Exit codes: 0 success, 2 usage or parameter error, 3 data error,
// 4 convergence failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "twintt/dataset.hpp"
#include "twintt/fit.hpp"
#include "twintt/generalized.hpp"
#include "twintt/multivariate.hpp"
#include "twintt/numeric_cdf.hpp"
#include "twintt/simulation.hpp"
#include "twintt/skew.hpp"
#include "twintt/twin_t.hpp"

namespace {

constexpr std::uint64_t kDefaultSeed = 1729;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// dist

struct DistOptions {
  std::string family;
  std::string action;
  double nu = 0.0;
  double gamma = 1.0;
  double a = 0.0;
  double b = 0.0;
  double phi = 0.0;
  double power = 0.0;        // --beta
  double shape = 0.0;        // --gamma-param
  std::string mu_text;       // multivariate location, comma separated
  std::string cov_text;      // multivariate scale, rows split by ';'
  std::vector<double> x;
  std::size_t n = 0;
  std::uint64_t seed = kDefaultSeed;
  std::string out_path;
};

Eigen::VectorXd parse_vector(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError("cannot parse '" + item + "' as a real number");
    }
  }
  if (values.empty()) throw UsageError("empty vector argument");
  Eigen::VectorXd v(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) v[i] = values[i];
  return v;
}

Eigen::MatrixXd parse_matrix(const std::string& text) {
  std::vector<Eigen::VectorXd> rows;
  std::stringstream ss(text);
  std::string row;
  while (std::getline(ss, row, ';')) rows.push_back(parse_vector(row));
  const auto cols = rows.front().size();
  Eigen::MatrixXd m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw UsageError("ragged matrix argument");
    m.row(i) = rows[i].transpose();
  }
  return m;
}

void emit_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw twintt::DataError("cannot write '" + out_path + "'");
  out << text;
}

void emit_lines(const std::vector<double>& values, const std::string& out_path) {
  std::ostringstream text;
  for (double v : values) text << twintt::format_double(v) << '\n';
  emit_text(text.str(), out_path);
}

// pdf/cdf/quantile/sample closures for the scalar families.
struct ScalarDist {
  std::function<double(double)> pdf;
  std::function<double(double)> cdf;
  std::function<double(double)> quantile;
  std::function<std::vector<double>(std::size_t, std::uint64_t)> sample;
};

void run_scalar_action(const ScalarDist& dist, const DistOptions& opt) {
  if (opt.action == "sample") {
    if (opt.n == 0) throw UsageError("--n must be positive for sampling");
    emit_lines(dist.sample(opt.n, opt.seed), opt.out_path);
    return;
  }
  if (opt.x.empty()) throw UsageError("provide at least one --x value");
  std::vector<double> out;
  out.reserve(opt.x.size());
  for (double x : opt.x) {
    if (opt.action == "pdf") {
      out.push_back(dist.pdf(x));
    } else if (opt.action == "cdf") {
      out.push_back(dist.cdf(x));
    } else if (opt.action == "quantile") {
      out.push_back(dist.quantile(x));
    } else {
      throw UsageError("unknown action '" + opt.action + "'");
    }
  }
  emit_lines(out, opt.out_path);
}

void run_dist(const DistOptions& opt) {
  using namespace twintt;
  if (opt.family == "twin-t") {
    const TwinT d(opt.nu);
    run_scalar_action({[d](double x) { return d.pdf(x); },
                       [d](double x) { return d.cdf(x); },
                       [d](double u) { return d.quantile(u); },
                       [d](std::size_t n, std::uint64_t s) { return d.sample(n, s); }},
                      opt);
    return;
  }
  if (opt.family == "two-piece") {
    const TwoPieceTwinT d(TwinT(opt.nu), opt.gamma);
    run_scalar_action({[d](double x) { return d.pdf(x); },
                       [d](double x) { return d.cdf(x); },
                       [d](double u) { return d.quantile(u); },
                       [d](std::size_t n, std::uint64_t s) { return d.sample(n, s); }},
                      opt);
    return;
  }
  if (opt.family == "jones" || opt.family == "azzalini") {
    std::function<double(double)> pdf;
    std::function<std::vector<double>(std::size_t, std::uint64_t)> sample;
    if (opt.family == "jones") {
      const auto d = std::make_shared<JonesTwinT>(opt.a, opt.b);
      pdf = [d](double x) { return d->pdf(x); };
      sample = [d](std::size_t n, std::uint64_t s) { return d->sample(n, s); };
    } else {
      const auto d = std::make_shared<AzzaliniTwinT>(TwinT(opt.nu), opt.phi);
      pdf = [d](double x) { return d->pdf(x); };
      sample = [d](std::size_t n, std::uint64_t s) { return d->sample(n, s); };
    }
    // the integrated cdf is built once and only when needed
    auto cache = std::make_shared<std::shared_ptr<NumericCdf>>();
    auto ensure = [cache, pdf]() {
      if (!*cache) *cache = std::make_shared<NumericCdf>(pdf);
      return *cache;
    };
    run_scalar_action({pdf,
                       [ensure](double x) { return (*ensure())(x); },
                       [ensure](double u) { return ensure()->quantile(u); },
                       sample},
                      opt);
    return;
  }
  if (opt.family == "generalized") {
    const GeneralizedTwinT d(opt.power, opt.shape);
    run_scalar_action({[d](double x) { return d.pdf(x); },
                       [d](double x) { return d.cdf(x); },
                       [d](double u) { return d.quantile(u); },
                       [d](std::size_t n, std::uint64_t s) { return d.sample(n, s); }},
                      opt);
    return;
  }
  if (opt.family == "multivariate") {
    if (opt.mu_text.empty() || opt.cov_text.empty()) {
      throw UsageError("multivariate family needs --mu and --cov");
    }
    const MultivariateTwinT d(opt.nu, parse_vector(opt.mu_text), parse_matrix(opt.cov_text));
    const std::size_t dim = static_cast<std::size_t>(d.dim());
    if (opt.action == "pdf") {
      if (opt.x.empty() || opt.x.size() % dim != 0) {
        throw UsageError("--x must list points as groups of " + std::to_string(dim) +
                         " coordinates");
      }
      std::vector<double> out;
      for (std::size_t i = 0; i < opt.x.size(); i += dim) {
        Eigen::VectorXd point(dim);
        for (std::size_t j = 0; j < dim; ++j) point[j] = opt.x[i + j];
        out.push_back(d.pdf(point));
      }
      emit_lines(out, opt.out_path);
      return;
    }
    if (opt.action == "sample") {
      if (opt.n == 0) throw UsageError("--n must be positive for sampling");
      const Eigen::MatrixXd draws = d.sample(opt.n, opt.seed);
      std::ostringstream text;
      for (Eigen::Index i = 0; i < draws.rows(); ++i) {
        for (Eigen::Index j = 0; j < draws.cols(); ++j) {
          text << (j ? "," : "") << twintt::format_double(draws(i, j));
        }
        text << '\n';
      }
      emit_text(text.str(), opt.out_path);
      return;
    }
    throw UsageError("multivariate family supports actions pdf and sample");
  }
  throw UsageError("unknown family '" + opt.family + "'");
}

// ---------------------------------------------------------------------------
// fit reporting

void write_report_text(const twintt::FitReport& report, std::ostream& out) {
  out << "converged=" << (report.converged ? "true" : "false") << '\n';
  out << "n_obs=" << report.n_obs << '\n';
  out << "iterations=" << report.iterations << '\n';
  out << "loglik=" << twintt::format_double(report.loglik) << '\n';
  out << "aic=" << twintt::format_double(report.aic) << '\n';
  out << "hessian_ok=" << (report.hessian_ok ? "true" : "false") << '\n';
  for (const auto& [name, value] : report.estimates) {
    out << "estimate." << name << '=' << twintt::format_double(value) << '\n';
  }
  for (const auto& [name, value] : report.std_errors) {
    out << "se." << name << '=' << twintt::format_double(value) << '\n';
  }
  if (report.nu_ci) {
    out << "nu_ci_lower=" << twintt::format_double(report.nu_ci->first) << '\n';
    out << "nu_ci_upper=" << twintt::format_double(report.nu_ci->second) << '\n';
  }
  for (const auto& warning : report.warnings) out << "warning=" << warning << '\n';
}

void write_report_json(const twintt::FitReport& report, std::ostream& out) {
  nlohmann::json j;
  j["converged"] = report.converged;
  j["n_obs"] = report.n_obs;
  j["iterations"] = report.iterations;
  j["loglik"] = report.loglik;
  j["aic"] = report.aic;
  j["hessian_ok"] = report.hessian_ok;
  j["estimates"] = nlohmann::json::object();
  j["std_errors"] = nlohmann::json::object();
  for (const auto& [name, value] : report.estimates) j["estimates"][name] = value;
  for (const auto& [name, value] : report.std_errors) j["std_errors"][name] = value;
  if (report.nu_ci) j["nu_ci"] = {report.nu_ci->first, report.nu_ci->second};
  j["warnings"] = report.warnings;
  out << j.dump(2) << '\n';
}

void emit_report(const twintt::FitReport& report, bool as_json, const std::string& out_path) {
  std::ostringstream text;
  if (as_json) {
    write_report_json(report, text);
  } else {
    write_report_text(report, text);
  }
  emit_text(text.str(), out_path);
  if (!report.converged) throw ConvergenceError("fit did not converge");
}

// ---------------------------------------------------------------------------
// simulate

std::string df_label(double df) {
  if (std::isinf(df)) return "inf";
  std::ostringstream s;
  s << df;
  return s.str();
}

double parse_df(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "normal") {
    return std::numeric_limits<double>::infinity();
  }
  try {
    return std::stod(text);
  } catch (const std::exception&) {
    throw UsageError("cannot parse --df-true value '" + text + "'");
  }
}

void run_simulate(const std::vector<std::size_t>& sizes, const std::vector<std::string>& dfs,
                  std::size_t replicates, std::uint64_t seed, const std::string& out_dir) {
  namespace fs = std::filesystem;
  using namespace twintt;
  fs::create_directories(out_dir);

  const std::vector<std::pair<RegressionModel, RegressionModel>> pairs = {
      {RegressionModel::twin_t, RegressionModel::ols},
      {RegressionModel::student_t, RegressionModel::ols},
      {RegressionModel::twin_t, RegressionModel::student_t},
      {RegressionModel::ols, RegressionModel::student_t},
  };
  const std::vector<double> thresholds = {1e-4, 1e-3, 1e-2};

  std::ofstream summary(fs::path(out_dir) / "near_zero_summary.csv");
  summary << "n,df,pair,parameter,threshold,fraction\n";

  for (std::size_t n : sizes) {
    for (const std::string& df_text : dfs) {
      ScenarioConfig config;
      config.n = n;
      config.true_df = parse_df(df_text);
      config.replicates = replicates;
      config.seed = seed;
      const EstimateTable table = run_scenario(config);

      const std::string tag = "_n" + std::to_string(n) + "_df" + df_label(config.true_df);
      std::ofstream est(fs::path(out_dir) / ("estimates" + tag + ".csv"));
      write_estimate_table_csv(table, est);

      for (const auto& [model_a, model_b] : pairs) {
        const std::string pair_tag = model_name(model_a) + "_vs_" + model_name(model_b);
        for (int param = 0; param <= 1; ++param) {
          const EcdfCurve curve = abs_diff_ecdf(table, model_a, model_b, param);
          const std::string param_tag = param == 0 ? "intercept" : "slope";
          std::ofstream out(fs::path(out_dir) /
                            ("ecdf_" + param_tag + "_" + pair_tag + tag + ".csv"));
          write_ecdf_csv(curve, out);
          for (double threshold : thresholds) {
            summary << n << ',' << df_label(config.true_df) << ',' << pair_tag << ','
                    << param_tag << ',' << format_double(threshold) << ','
                    << format_double(curve.fraction_below(threshold)) << '\n';
          }
        }
      }
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twin-t distribution toolkit: densities, fitting, simulation"};
  app.require_subcommand(1);

  // ---- dist
  DistOptions dist_opt;
  CLI::App* dist = app.add_subcommand("dist", "evaluate or sample a distribution");
  dist->add_option("--family", dist_opt.family,
                   "twin-t | two-piece | jones | azzalini | generalized | multivariate")
      ->required();
  dist->add_option("--action", dist_opt.action, "pdf | cdf | quantile | sample")->required();
  dist->add_option("--nu", dist_opt.nu, "degrees of freedom");
  dist->add_option("--gamma", dist_opt.gamma, "two-piece asymmetry");
  dist->add_option("--a", dist_opt.a, "first tail-split shape");
  dist->add_option("--b", dist_opt.b, "second tail-split shape");
  dist->add_option("--phi", dist_opt.phi, "skewing weight in (-1,1)");
  dist->add_option("--beta", dist_opt.power, "generalized family power");
  dist->add_option("--gamma-param", dist_opt.shape, "generalized family shape");
  dist->add_option("--mu", dist_opt.mu_text, "multivariate location, comma separated");
  dist->add_option("--cov", dist_opt.cov_text, "multivariate scale rows, ';' separated");
  dist->add_option("--x", dist_opt.x, "evaluation points (probabilities for quantile)");
  dist->add_option("--n", dist_opt.n, "number of draws for sampling");
  dist->add_option("--seed", dist_opt.seed, "random seed (default 1729)");
  dist->add_option("--out", dist_opt.out_path, "output file (default stdout)");

  // ---- fit
  CLI::App* fit = app.add_subcommand("fit", "maximum-likelihood fitting");
  fit->require_subcommand(1);

  std::string fit_data, fit_family = "twin-t", response, covariates_text, dispersion;
  bool hetero = false, fit_json = false;
  std::string fit_out;
  CLI::App* regress = fit->add_subcommand("regress", "linear regression");
  regress->add_option("--data", fit_data, "CSV file with a header row")->required();
  regress->add_option("--family", fit_family, "normal | t | twin-t (default twin-t)");
  regress->add_option("--response", response, "response column (default: first)");
  regress->add_option("--covariates", covariates_text,
                      "comma-separated covariate columns (default: all others)");
  regress->add_flag("--hetero", hetero, "log sigma^2 linear in the dispersion covariate");
  regress->add_option("--dispersion-col", dispersion,
                      "dispersion covariate (default: first covariate)");
  regress->add_flag("--json", fit_json, "structured JSON report");
  regress->add_option("--out", fit_out, "output file (default stdout)");

  std::string curve_data, curve_family = "twin-t", curve_column, curve_skew = "none";
  int bootstrap = 0;
  bool curve_json = false;
  std::string curve_out;
  std::uint64_t curve_seed = kDefaultSeed;
  CLI::App* curve = fit->add_subcommand("curve", "frequency-curve fit");
  curve->add_option("--data", curve_data, "CSV file with a header row")->required();
  curve->add_option("--column", curve_column, "sample column (default: first)");
  curve->add_option("--family", curve_family, "twin-t | t (default twin-t)");
  curve->add_option("--skew", curve_skew, "none | two-piece | jones | azzalini");
  curve->add_option("--bootstrap", bootstrap, "bootstrap replicates for standard errors");
  curve->add_option("--seed", curve_seed, "bootstrap seed (default 1729)");
  curve->add_flag("--json", curve_json, "structured JSON report");
  curve->add_option("--out", curve_out, "output file (default stdout)");

  // ---- simulate
  std::vector<std::size_t> sim_sizes;
  std::vector<std::string> sim_dfs;
  std::size_t sim_replicates = 200;
  std::uint64_t sim_seed = kDefaultSeed;
  std::string sim_out;
  CLI::App* simulate = app.add_subcommand("simulate", "regression robustness study");
  simulate->add_option("--out", sim_out, "output directory")->required();
  simulate->add_option("--n", sim_sizes, "dataset sizes (default 50 100 200)");
  simulate->add_option("--df-true", sim_dfs, "true error df values, e.g. 3 5 8 inf");
  simulate->add_option("--replicates", sim_replicates, "replicates per scenario (default 200)");
  simulate->add_option("--seed", sim_seed, "random seed (default 1729)");

  try {
    app.parse(argc, argv);

    if (dist->parsed()) {
      run_dist(dist_opt);
      return 0;
    }

    if (regress->parsed()) {
      const twintt::Dataset data = twintt::read_csv(fit_data);
      if (data.n_cols() < 2) throw twintt::DataError("need at least two columns");
      twintt::RegressionSpec spec;
      if (fit_family == "normal") {
        spec.error_family = twintt::ErrorFamily::normal;
      } else if (fit_family == "t" || fit_family == "student-t") {
        spec.error_family = twintt::ErrorFamily::student_t;
      } else if (fit_family == "twin-t") {
        spec.error_family = twintt::ErrorFamily::twin_t;
      } else {
        throw UsageError("unknown error family '" + fit_family + "'");
      }
      spec.heteroscedastic = hetero;
      spec.response_column = response.empty() ? data.column_names.front() : response;
      if (covariates_text.empty()) {
        for (const auto& name : data.column_names) {
          if (name != spec.response_column) spec.covariate_columns.push_back(name);
        }
      } else {
        std::stringstream ss(covariates_text);
        std::string item;
        while (std::getline(ss, item, ',')) spec.covariate_columns.push_back(item);
      }
      spec.dispersion_column = dispersion;
      emit_report(twintt::fit_regression(spec, data), fit_json, fit_out);
      return 0;
    }

    if (curve->parsed()) {
      const twintt::Dataset data = twintt::read_csv(curve_data);
      twintt::CurveFitSpec spec;
      if (curve_family == "twin-t") {
        spec.family = twintt::CurveFamily::twin_t;
      } else if (curve_family == "t" || curve_family == "student-t") {
        spec.family = twintt::CurveFamily::student_t;
      } else {
        throw UsageError("unknown family '" + curve_family + "'");
      }
      if (curve_skew == "none") {
        spec.skew = twintt::SkewKind::none;
      } else if (curve_skew == "two-piece") {
        spec.skew = twintt::SkewKind::two_piece;
      } else if (curve_skew == "jones") {
        spec.skew = twintt::SkewKind::jones;
      } else if (curve_skew == "azzalini") {
        spec.skew = twintt::SkewKind::azzalini;
      } else {
        throw UsageError("unknown skew kind '" + curve_skew + "'");
      }
      spec.column = curve_column.empty() ? data.column_names.front() : curve_column;
      twintt::FitConfig config;
      config.bootstrap_replicates = bootstrap;
      config.bootstrap_seed = curve_seed;
      emit_report(twintt::fit_curve(spec, data.column(spec.column), config), curve_json,
                  curve_out);
      return 0;
    }

    if (simulate->parsed()) {
      if (sim_sizes.empty()) sim_sizes = {50, 100, 200};
      if (sim_dfs.empty()) sim_dfs = {"3", "5", "8", "inf"};
      run_simulate(sim_sizes, sim_dfs, sim_replicates, sim_seed, sim_out);
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << "error[usage]: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error[usage]: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error[usage]: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error[usage]: " << e.what() << '\n';
    return 2;
  } catch (const twintt::DataError& e) {
    std::cerr << "error[data]: " << e.what() << '\n';
    return 3;
  } catch (const ConvergenceError& e) {
    std::cerr << "error[convergence]: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
