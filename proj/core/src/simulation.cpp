#include "twintt/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

#include "twintt/optimize.hpp"
#include "twintt/rng.hpp"
#include "twintt/student_t.hpp"

namespace twintt {

std::string model_name(RegressionModel m) {
  switch (m) {
    case RegressionModel::ols:
      return "ols";
    case RegressionModel::student_t:
      return "student-t";
    case RegressionModel::twin_t:
      return "twin-t";
  }
  return "?";
}

double EcdfCurve::fraction_below(double threshold) const {
  const auto it =
      std::upper_bound(sorted_values.begin(), sorted_values.end(), threshold);
  return static_cast<double>(it - sorted_values.begin()) /
         static_cast<double>(sorted_values.size());
}

std::vector<double> make_design(std::size_t n) {
  if (n < 2) throw std::invalid_argument("make_design: need n >= 2");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = 0.1 + 9.9 * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return x;
}

Dataset simulate_dataset(const ScenarioConfig& config, std::size_t replicate_index) {
  std::vector<double> x = make_design(config.n);
  Rng rng(config.seed, replicate_index);
  const StudentT error_law(config.true_df);
  std::vector<double> y(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    y[i] = -0.5 + 2.0 * x[i] + error_law.draw(rng);
  }
  Dataset data;
  data.add_column("y", std::move(y));
  data.add_column("x", std::move(x));
  return data;
}

EstimateTable run_scenario(const ScenarioConfig& config) {
  if (config.replicates < 1) throw std::invalid_argument("run_scenario: replicates >= 1");
  if (config.n < 3) throw std::invalid_argument("run_scenario: n >= 3");

  EstimateTable table;
  table.config = config;
  table.rows.reserve(config.replicates * 3);

  RegressionSpec t_spec{ErrorFamily::student_t, false, "y", {"x"}, {}};
  RegressionSpec tt_spec{ErrorFamily::twin_t, false, "y", {"x"}, {}};
  const FitConfig fit_config;

  for (std::size_t rep = 0; rep < config.replicates; ++rep) {
    const Dataset data = simulate_dataset(config, rep);
    bool replicate_ok = true;

    const OlsFit ols = ols_fit({&data.column("x")}, data.column("y"));
    table.rows.push_back({rep, RegressionModel::ols, ols.beta[0], ols.beta[1], true});

    for (const auto& [model, spec] :
         {std::pair{RegressionModel::student_t, &t_spec},
          std::pair{RegressionModel::twin_t, &tt_spec}}) {
      const FitReport fit = fit_regression(*spec, data, fit_config);
      table.rows.push_back({rep, model, fit.estimate("beta0"), fit.estimate("beta1"),
                            fit.converged});
      replicate_ok = replicate_ok && fit.converged;
    }
    if (!replicate_ok) ++table.failed_replicates;
  }
  return table;
}

EcdfCurve abs_diff_ecdf(const EstimateTable& table, RegressionModel model_a,
                        RegressionModel model_b, int parameter_index) {
  if (table.rows.empty()) throw std::invalid_argument("abs_diff_ecdf: empty estimate table");
  if (parameter_index != 0 && parameter_index != 1) {
    throw std::invalid_argument("abs_diff_ecdf: parameter_index must be 0 or 1");
  }

  std::map<std::size_t, std::pair<const EstimateRow*, const EstimateRow*>> paired;
  for (const auto& row : table.rows) {
    if (!row.converged) continue;
    if (row.model == model_a) paired[row.replicate].first = &row;
    if (row.model == model_b) paired[row.replicate].second = &row;
  }

  EcdfCurve curve;
  for (const auto& [rep, pair] : paired) {
    if (!pair.first || !pair.second) continue;
    const double a = parameter_index == 0 ? pair.first->beta0 : pair.first->beta1;
    const double b = parameter_index == 0 ? pair.second->beta0 : pair.second->beta1;
    curve.sorted_values.push_back(std::fabs(a - b));
  }
  if (curve.sorted_values.empty()) {
    throw std::runtime_error("abs_diff_ecdf: no converged replicate pairs");
  }
  std::sort(curve.sorted_values.begin(), curve.sorted_values.end());
  const double n = static_cast<double>(curve.sorted_values.size());
  curve.probs.resize(curve.sorted_values.size());
  for (std::size_t k = 0; k < curve.probs.size(); ++k) {
    curve.probs[k] = static_cast<double>(k + 1) / n;
  }
  return curve;
}

void write_estimate_table_csv(const EstimateTable& table, std::ostream& out) {
  out << "replicate,model,beta0,beta1,converged\n";
  for (const auto& row : table.rows) {
    out << row.replicate << ',' << model_name(row.model) << ','
        << format_double(row.beta0) << ',' << format_double(row.beta1) << ','
        << (row.converged ? 1 : 0) << '\n';
  }
}

void write_ecdf_csv(const EcdfCurve& curve, std::ostream& out) {
  out << "abs_diff,prob\n";
  for (std::size_t k = 0; k < curve.sorted_values.size(); ++k) {
    out << format_double(curve.sorted_values[k]) << ',' << format_double(curve.probs[k])
        << '\n';
  }
}

}  // namespace twintt
