#include <cmath>
#include <sstream>

#include "doctest.h"
#include "support/oracles.hpp"
#include "twintt/fit.hpp"
#include "twintt/optimize.hpp"
#include "twintt/simulation.hpp"

using namespace twintt;

TEST_SUITE("simulation") {

TEST_CASE("design grid") {
  const auto x50 = make_design(50);
  CHECK(x50.front() == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(x50.back() == doctest::Approx(10.0).epsilon(1e-15));
  const auto x100 = make_design(100);
  CHECK(x100[1] - x100[0] == doctest::Approx(0.1).epsilon(1e-12));
  const auto x2 = make_design(2);
  CHECK(x2[0] == doctest::Approx(0.1));
  CHECK(x2[1] == doctest::Approx(10.0));
  CHECK_THROWS_AS(make_design(1), std::invalid_argument);
}

TEST_CASE("simulated datasets are deterministic per replicate") {
  ScenarioConfig config;
  config.n = 50;
  config.true_df = 3.0;
  config.seed = 99;
  const Dataset a = simulate_dataset(config, 4);
  const Dataset b = simulate_dataset(config, 4);
  CHECK(a.column("y") == b.column("y"));
  const Dataset c = simulate_dataset(config, 5);
  CHECK(a.column("y") != c.column("y"));
}

TEST_CASE("normal-truth residual variance is one") {
  ScenarioConfig config;
  config.n = 100000;
  config.seed = 7;
  const Dataset d = simulate_dataset(config, 0);
  const auto& x = d.column("x");
  const auto& y = d.column("y");
  std::vector<double> resid(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) resid[i] = y[i] - (-0.5 + 2.0 * x[i]);
  const auto mo = oracle::sample_moments(resid);
  CHECK(std::fabs(mo.mean) < 0.02);
  CHECK(std::fabs(mo.variance - 1.0) < 0.02);
}

TEST_CASE("t(3) truth produces excess kurtosis") {
  ScenarioConfig config;
  config.n = 200;
  config.true_df = 3.0;
  config.seed = 555;
  int heavy = 0;
  const int reps = 200;
  for (int rep = 0; rep < reps; ++rep) {
    const Dataset d = simulate_dataset(config, rep);
    const auto& x = d.column("x");
    const auto& y = d.column("y");
    std::vector<double> resid(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) resid[i] = y[i] - (-0.5 + 2.0 * x[i]);
    const auto mo = oracle::sample_moments(resid);
    const double kurtosis = mo.m4 / (mo.variance * mo.variance);
    heavy += kurtosis > 3.0;
  }
  CHECK(static_cast<double>(heavy) / reps >= 0.95);
}

TEST_CASE("run_scenario shape, OLS column and determinism") {
  ScenarioConfig config;
  config.n = 100;
  config.replicates = 10;
  config.seed = 1;
  const EstimateTable table = run_scenario(config);
  CHECK(table.rows.size() == 30);  // 10 replicates x 3 models

  for (const auto& row : table.rows) {
    CHECK(std::isfinite(row.beta0));
    CHECK(std::isfinite(row.beta1));
    if (row.model != RegressionModel::ols) continue;
    // independent simple-regression formulas
    const Dataset d = simulate_dataset(config, row.replicate);
    const auto& x = d.column("x");
    const auto& y = d.column("y");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sx += x[i];
      sy += y[i];
      sxx += x[i] * x[i];
      sxy += x[i] * y[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(row.beta1 == doctest::Approx(slope).epsilon(1e-10));
    CHECK(row.beta0 == doctest::Approx((sy - slope * sx) / n).epsilon(1e-10));
  }

  const EstimateTable again = run_scenario(config);
  REQUIRE(again.rows.size() == table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    CHECK(table.rows[i].beta0 == again.rows[i].beta0);
    CHECK(table.rows[i].beta1 == again.rows[i].beta1);
  }
}

TEST_CASE("fitted likelihood beats the true parameters") {
  ScenarioConfig config;
  config.n = 100;
  config.true_df = 3.0;
  config.seed = 17;
  RegressionSpec spec{ErrorFamily::twin_t, false, "y", {"x"}, {}};
  for (std::size_t rep = 0; rep < 3; ++rep) {
    const Dataset data = simulate_dataset(config, rep);
    const FitReport fit = fit_regression(spec, data);
    const double at_truth =
        regress_loglik(spec, {-0.5, 2.0, 0.0, std::log(3.0)}, data);
    CHECK(fit.loglik >= at_truth - 1e-9);
  }
}

TEST_CASE("ecdf construction") {
  ScenarioConfig config;
  config.n = 50;
  config.replicates = 8;
  config.seed = 3;
  const EstimateTable table = run_scenario(config);

  const EcdfCurve same = abs_diff_ecdf(table, RegressionModel::ols, RegressionModel::ols, 1);
  for (double v : same.sorted_values) CHECK(v == 0.0);

  const EcdfCurve curve =
      abs_diff_ecdf(table, RegressionModel::twin_t, RegressionModel::ols, 1);
  REQUIRE(!curve.probs.empty());
  CHECK(curve.probs.back() == doctest::Approx(1.0));
  for (std::size_t k = 1; k < curve.probs.size(); ++k) {
    CHECK(curve.probs[k] > curve.probs[k - 1]);
    CHECK(curve.sorted_values[k] >= curve.sorted_values[k - 1]);
  }
  CHECK(curve.fraction_below(1e18) == 1.0);

  EstimateTable empty;
  CHECK_THROWS_AS(abs_diff_ecdf(empty, RegressionModel::ols, RegressionModel::twin_t, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(abs_diff_ecdf(table, RegressionModel::ols, RegressionModel::twin_t, 2),
                  std::invalid_argument);
}

TEST_CASE("csv writers") {
  ScenarioConfig config;
  config.n = 50;
  config.replicates = 2;
  config.seed = 5;
  const EstimateTable table = run_scenario(config);
  std::ostringstream est;
  write_estimate_table_csv(table, est);
  CHECK(est.str().find("replicate,model,beta0,beta1,converged") == 0);
  CHECK(est.str().find("twin-t") != std::string::npos);

  std::ostringstream ecdf;
  write_ecdf_csv(abs_diff_ecdf(table, RegressionModel::twin_t, RegressionModel::ols, 0),
                 ecdf);
  CHECK(ecdf.str().find("abs_diff,prob") == 0);
}

}  // TEST_SUITE
