#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "twintt/dataset.hpp"
#include "twintt/fit.hpp"

namespace twintt {

/// One robustness-study scenario: straight-line data y = -0.5 + 2x with
/// i.i.d. t(true_df) errors (standard normal when true_df is infinite) on a
/// fixed design evenly spaced over [0.1, 10].
struct ScenarioConfig {
  std::size_t n = 100;
  double true_df = std::numeric_limits<double>::infinity();
  std::size_t replicates = 200;
  std::uint64_t seed = 1729;
};

enum class RegressionModel { ols, student_t, twin_t };
std::string model_name(RegressionModel m);

struct EstimateRow {
  std::size_t replicate;
  RegressionModel model;
  double beta0;
  double beta1;
  bool converged;
};

struct EstimateTable {
  ScenarioConfig config;
  std::vector<EstimateRow> rows;
  std::size_t failed_replicates = 0;
};

/// Step-function cdf of a sample: probs rise from 1/N to 1 over the sorted
/// values.
struct EcdfCurve {
  std::vector<double> sorted_values;
  std::vector<double> probs;

  /// Fraction of values <= threshold.
  double fraction_below(double threshold) const;
};

/// x_i = 0.1 + 9.9 (i-1)/(n-1), i = 1..n. Requires n >= 2.
std::vector<double> make_design(std::size_t n);

/// Columns "y" and "x"; deterministic per (config.seed, replicate_index).
Dataset simulate_dataset(const ScenarioConfig& config, std::size_t replicate_index);

/// Fit ordinary least squares, t-errors and twin-t-errors regressions to
/// each replicate. Replicates where a likelihood fit fails to converge are
/// flagged in place and counted.
EstimateTable run_scenario(const ScenarioConfig& config);

/// Ecdf of |estimate_a - estimate_b| over replicates where both models
/// converged; parameter_index 0 is the intercept, 1 the slope.
EcdfCurve abs_diff_ecdf(const EstimateTable& table, RegressionModel model_a,
                        RegressionModel model_b, int parameter_index);

void write_estimate_table_csv(const EstimateTable& table, std::ostream& out);
void write_ecdf_csv(const EcdfCurve& curve, std::ostream& out);

}  // namespace twintt
