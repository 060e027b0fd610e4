#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support/oracles.hpp"
#include "twintt/quadrature.hpp"
#include "twintt/rng.hpp"
#include "twintt/student_t.hpp"

using namespace twintt;

TEST_SUITE("quadrature") {

TEST_CASE("polynomial and gaussian integrals") {
  auto sq = integrate([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(sq.converged);
  CHECK(sq.value == doctest::Approx(1.0 / 3.0).epsilon(1e-13));

  auto gauss = integrate_real_line([](double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  });
  CHECK(gauss.converged);
  CHECK(gauss.value == doctest::Approx(1.0).epsilon(1e-12));

  auto expo = integrate_half_line([](double x) { return std::exp(-x); });
  CHECK(expo.converged);
  CHECK(expo.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("endpoint singularity") {
  auto root = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-9, 100000);
  CHECK(root.value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("heavy-tailed density integrates to one") {
  const StudentT t3(3.0);
  auto total = integrate_real_line([&t3](double x) { return t3.pdf(x); });
  CHECK(total.converged);
  CHECK(total.value == doctest::Approx(1.0).epsilon(1e-10));
}

}  // TEST_SUITE

TEST_SUITE("rng") {

TEST_CASE("determinism and stream separation") {
  Rng a(123), b(123), c(123, 1);
  bool all_equal = true;
  bool any_diff_stream = false;
  for (int i = 0; i < 1000; ++i) {
    const auto va = a.next_u64();
    all_equal = all_equal && (va == b.next_u64());
    any_diff_stream = any_diff_stream || (va != c.next_u64());
  }
  CHECK(all_equal);
  CHECK(any_diff_stream);
}

TEST_CASE("uniform range and mean") {
  Rng rng(5);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::fabs(sum / n - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST_CASE("normal draws pass a KS test") {
  Rng rng(17);
  std::vector<double> z(100000);
  for (auto& v : z) v = rng.normal();
  const double d = oracle::ks_statistic(z, [](double x) { return oracle::normal_cdf(x); });
  CHECK(d < oracle::ks_critical_1pct(z.size()));
}

TEST_CASE("polar t draws match the t cdf") {
  for (double nu : {1.0, 4.0, 20.0}) {
    const StudentT dist(nu);
    Rng rng(301 + static_cast<std::uint64_t>(nu));
    std::vector<double> z(100000);
    for (auto& v : z) v = rng.student_t(nu);
    const double d = oracle::ks_statistic(z, [&dist](double x) { return dist.cdf(x); });
    CHECK(d < oracle::ks_critical_1pct(z.size()));
  }
}

TEST_CASE("gamma moments") {
  for (double shape : {0.3, 1.0, 2.5, 30.0}) {
    Rng rng(900 + static_cast<std::uint64_t>(10 * shape));
    const int n = 200000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double g = rng.gamma(shape);
      sum += g;
      sum_sq += g * g;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(mean == doctest::Approx(shape).epsilon(0.02));
    CHECK(var == doctest::Approx(shape).epsilon(0.06));
  }
}

TEST_CASE("beta moments") {
  Rng rng(41);
  const double a = 2.5, b = 0.8;
  const int n = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = rng.beta(a, b);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  const double exact_mean = a / (a + b);
  const double exact_var = a * b / ((a + b) * (a + b) * (a + b + 1.0));
  CHECK(mean == doctest::Approx(exact_mean).epsilon(0.01));
  CHECK(var == doctest::Approx(exact_var).epsilon(0.05));
}

}  // TEST_SUITE
