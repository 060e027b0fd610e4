#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support/oracles.hpp"
#include "twintt/rng.hpp"
#include "twintt/special_functions.hpp"
#include "twintt/student_t.hpp"
#include "twintt/twin_t.hpp"

using namespace twintt;

namespace {

constexpr double kPi = std::numbers::pi;

// Closed-form cdf for nu = 2 (valid for x >= 0; negative x by symmetry).
double cdf_nu2(double x) {
  if (x < 0.0) return 1.0 - cdf_nu2(-x);
  const double S = x * x / 2.0;
  const double CS = std::hypot(1.0, S) + S;
  return 1.0 + x * std::pow(CS, -1.5) / (3.0 * kPi) - std::asin(1.0 / CS) / kPi;
}

// Closed-form cdf for nu = 4 (odd around 1/2, valid for all x).
double cdf_nu4(double x) {
  const double S = x * x / 4.0;
  const double CS = std::hypot(1.0, S) + S;
  return 0.5 + 0.6 * std::pow(2.0, -0.5) * x * std::pow(CS, -2.5) +
         std::pow(2.0, -2.5) * x * x * x * std::pow(CS, -1.5);
}

}  // namespace

TEST_SUITE("twin_t") {

TEST_CASE("construction domain") {
  CHECK_THROWS_AS(TwinT(0.0), std::domain_error);
  CHECK_THROWS_AS(TwinT(-3.0), std::domain_error);
  CHECK_THROWS_AS(TwinT(std::nan("")), std::domain_error);
  CHECK_THROWS_AS(TwinT(1e-4), std::domain_error);
  CHECK(TwinT(std::numeric_limits<double>::infinity()).normal_limit());
  CHECK_FALSE(TwinT(1e6).normal_limit());
}

TEST_CASE("kernel terms identity") {
  for (double nu : {0.5, 2.0, 6.0, 40.0}) {
    for (double x : {0.0, 0.3, 1.7, 9.0, 120.0}) {
      const KernelTerms k = kernel_terms(nu, x);
      CHECK(k.S >= 0.0);
      CHECK(k.C >= 1.0);
      CHECK(k.p > 0.0);
      CHECK(k.p <= 1.0);
      // (C+S)(C-S) = 1 within a few ulps
      CHECK(std::fabs((k.C + k.S) * (k.C - k.S) - 1.0) <= 4e-16 * (k.C + k.S) * k.C);
      if (x == 0.0) CHECK(k.p == 1.0);
      if (x != 0.0) CHECK(k.p < 1.0);
    }
  }
}

TEST_CASE("normalization constant closed forms") {
  // nu = 4: k = 3 * 2^(5/2) / 40
  CHECK(std::exp(TwinT(4.0).log_norm_const()) ==
        doctest::Approx(3.0 * std::pow(2.0, 2.5) / 40.0).epsilon(1e-13));
  // nu = 2: k = 4 / (3 pi), via Gamma(3/2) = sqrt(pi)/2
  CHECK(std::exp(TwinT(2.0).log_norm_const()) ==
        doctest::Approx(4.0 / (3.0 * kPi)).epsilon(1e-13));
}

TEST_CASE("normalization constant equals the beta-function form") {
  for (double nu : {1e-3, 0.05, 0.5, 2.0, 4.0, 17.0, 200.0, 1e4, 1e6}) {
    const double form_gamma = 2.5 * std::numbers::ln2 + log_gamma_ratio(nu / 4.0, 1.5) -
                              0.5 * std::log(kPi * nu) - std::log1p(nu);
    const double form_beta = 1.5 * std::numbers::ln2 - 0.5 * std::log(nu) -
                             std::log1p(nu) - log_beta(nu / 4.0, 1.5);
    CHECK(std::fabs(std::expm1(form_gamma - form_beta)) <= 1e-13);
    CHECK(TwinT(nu).log_norm_const() == doctest::Approx(form_gamma).epsilon(1e-14));
  }
}

TEST_CASE("normalization constant against quadrature") {
  for (double nu : {0.5, 1.0, 2.0, 4.0, 8.0, 30.0, 200.0}) {
    const double kernel_integral = oracle::integrate_line([nu](double x) {
      return std::exp(-0.5 * (nu + 1.0) * std::asinh(x * x / nu));
    });
    CHECK(std::exp(TwinT(nu).log_norm_const()) ==
          doctest::Approx(1.0 / kernel_integral).epsilon(1e-10));
  }
}

TEST_CASE("normal limit of the constant") {
  CHECK(TwinT(1e6).log_norm_const() ==
        doctest::Approx(std::log(1.0 / std::sqrt(2.0 * kPi))).epsilon(1e-5));
}

TEST_CASE("pdf basics") {
  const TwinT d(4.0);
  CHECK(d.pdf(0.0) == doctest::Approx(0.42426406871192851).epsilon(1e-12));
  CHECK(d.pdf(1.3) == doctest::Approx(std::exp(d.log_pdf(1.3))).epsilon(1e-15));
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const double x = rng.uniform(-30.0, 30.0);
    CHECK(d.pdf(x) == doctest::Approx(d.pdf(-x)).epsilon(1e-14));
    CHECK(d.pdf(x) > 0.0);
    if (x != 0.0) CHECK(d.pdf(x) < d.pdf(0.0));
  }
}

TEST_CASE("tail ratio against the t distribution approaches a constant") {
  const TwinT tt(2.0);
  const StudentT t(2.0);
  const double r3 = tt.log_pdf(1e3) - t.log_pdf(1e3);
  const double r4 = tt.log_pdf(1e4) - t.log_pdf(1e4);
  CHECK(std::fabs(r4 - r3) < 1e-4);  // log-ratio has converged
}

TEST_CASE("replacing S^2 by zero recovers the t kernel") {
  for (double nu : {1.0, 5.0}) {
    for (double x : {0.4, 2.0, 7.0}) {
      const double S = x * x / nu;
      const double modified = std::pow(S + std::sqrt(1.0 + 0.0), -0.5 * (nu + 1.0));
      const double t_kernel = std::pow(1.0 + S, -0.5 * (nu + 1.0));
      CHECK(modified == doctest::Approx(t_kernel).epsilon(1e-15));
    }
  }
}

TEST_CASE("log_pdf extreme arguments") {
  const TwinT d3(3.0);
  CHECK(d3.log_pdf(0.0) == d3.log_norm_const());
  const double lp = d3.log_pdf(1e100);
  CHECK(std::isfinite(lp));
  // asinh(u) ~ ln(2u) for huge u
  const double expected = d3.log_norm_const() - 2.0 * std::log(2.0 * 1e200 / 3.0);
  CHECK(lp == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::isfinite(d3.log_pdf(1e150)));
  CHECK(std::isfinite(d3.log_pdf(1e308)));
  const TwinT d5(5.0);
  CHECK(d5.log_pdf(2.7) == d5.log_pdf(-2.7));
}

TEST_CASE("cdf center, symmetry and monotonicity") {
  for (double nu : {0.5, 1.0, 3.0, 12.0}) {
    const TwinT d(nu);
    CHECK(d.cdf(0.0) == 0.5);
    Rng rng(11);
    double prev = 0.0;
    for (double x = -25.0; x <= 25.0; x += 0.5) {
      const double value = d.cdf(x);
      CHECK(value >= prev);
      prev = value;
    }
    for (int i = 0; i < 40; ++i) {
      const double x = rng.uniform(-20.0, 20.0);
      CHECK(d.cdf(x) + d.cdf(-x) == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("cdf closed forms at nu = 2 and nu = 4") {
  const TwinT d2(2.0);
  const TwinT d4(4.0);
  for (int i = 0; i <= 100; ++i) {
    const double x = -10.0 + 0.2 * i;
    CHECK(std::fabs(d2.cdf(x) - cdf_nu2(x)) <= 1e-12);
    CHECK(std::fabs(d4.cdf(x) - cdf_nu4(x)) <= 1e-12);
  }
}

TEST_CASE("cdf matches the reflected incomplete-beta form") {
  // The two-beta-argument arrangement, used only as a cross-check here.
  for (double nu : {0.7, 3.0, 9.0}) {
    const TwinT d(nu);
    for (double x : {0.2, 1.1, 3.3, 8.0}) {
      const KernelTerms k = kernel_terms(nu, x);
      const double alt = 0.5 + x * d.pdf(x) +
                         0.5 * reg_inc_beta(1.0 - k.p, 1.5, nu / 4.0);
      CHECK(d.cdf(x) == doctest::Approx(alt).epsilon(1e-12));
    }
  }
}

TEST_CASE("cdf derivative matches pdf") {
  const TwinT d(5.0);
  Rng rng(23);
  const double h = 1e-5;
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform(-10.0, 10.0);
    const double deriv = (d.cdf(x + h) - d.cdf(x - h)) / (2.0 * h);
    CHECK(std::fabs(deriv - d.pdf(x)) <= 1e-6);
  }
}

TEST_CASE("cdf against quadrature") {
  for (double nu : {0.5, 4.0, 30.0}) {
    const TwinT d(nu);
    for (double x : {-6.0, -1.5, 0.7, 2.0, 11.0}) {
      const double upper = oracle::tanh_sinh([&d](double s) { return d.pdf(s); }, 0.0,
                                             std::fabs(x));
      const double expected = x >= 0.0 ? 0.5 + upper : 0.5 - upper;
      CHECK(d.cdf(x) == doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("quantile basics") {
  const TwinT d6(6.0);
  CHECK(d6.quantile(0.5) == 0.0);
  const TwinT d3(3.0);
  for (double u : {0.01, 0.2, 0.45, 0.7, 0.999}) {
    CHECK(d3.quantile(u) == doctest::Approx(-d3.quantile(1.0 - u)).epsilon(1e-10));
    CHECK(std::fabs(d3.cdf(d3.quantile(u)) - u) <= 1e-10);
  }
  CHECK_THROWS_AS(d3.quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(d3.quantile(1.0), std::domain_error);
  CHECK_THROWS_AS(d3.quantile(-0.2), std::domain_error);
}

TEST_CASE("quantile agrees with a bisection oracle") {
  const TwinT d(4.0);
  const double u = 0.975;
  double lo = 0.0, hi = 64.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (d.cdf(mid) < u ? lo : hi) = mid;
  }
  CHECK(d.quantile(u) == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-9));
}

TEST_CASE("quantile round trip") {
  for (double nu : {1.0, 6.0}) {
    const TwinT d(nu);
    for (double x = -20.0; x <= 20.0; x += 0.8) {
      const double u = d.cdf(x);
      if (u <= 0.0 || u >= 1.0) continue;
      CHECK(d.quantile(u) == doctest::Approx(x).epsilon(1e-8));
    }
  }
}

TEST_CASE("sampler determinism") {
  const TwinT d(1.0);
  const auto a = d.sample(500, 99);
  const auto b = d.sample(500, 99);
  CHECK(a == b);
  const auto c = d.sample(500, 100);
  CHECK(a != c);
}

TEST_CASE("sampler acceptance cost") {
  const std::size_t n = 200000;
  const auto r1 = TwinT(1.0).sample_counted(n, 2024);
  const double per1 = static_cast<double>(r1.proposals) / n;
  CHECK(std::fabs(per1 - 1.271) < 0.02);

  const auto r20 = TwinT(20.0).sample_counted(n, 2024);
  const double per20 = static_cast<double>(r20.proposals) / n;
  CHECK(std::fabs(per20 - 1.035) < 0.01);
}

TEST_CASE("sampler distribution - KS against the cdf") {
  const TwinT d(6.0);
  const auto sample = d.sample(200000, 31);
  const double ks = oracle::ks_statistic(sample, [&d](double x) { return d.cdf(x); });
  CHECK(ks < oracle::ks_critical_1pct(sample.size()));
}

TEST_CASE("moment closed forms") {
  CHECK(*TwinT(4.0).variance() == doctest::Approx(3.0 * kPi / 8.0).epsilon(1e-13));
  CHECK(*TwinT(8.0).fourth_moment() == doctest::Approx(24.0 / 7.0).epsilon(1e-13));
  CHECK(*TwinT(4.0).abs_moment() == doctest::Approx(std::pow(2.0, 3.5) / 14.0).epsilon(1e-13));
}

TEST_CASE("moment existence conditions") {
  CHECK_FALSE(TwinT(2.0).variance().has_value());
  CHECK_FALSE(TwinT(4.0).fourth_moment().has_value());
  CHECK_FALSE(TwinT(1.0).abs_moment().has_value());
  CHECK_FALSE(TwinT(6.0).even_moment(3).has_value());
  CHECK(TwinT(6.5).even_moment(3).has_value());
  CHECK_THROWS_AS(TwinT(6.0).even_moment(0), std::invalid_argument);
}

TEST_CASE("general even moment is consistent with the explicit forms") {
  for (double nu : {5.0, 9.0, 12.0, 33.0}) {
    const TwinT d(nu);
    CHECK(*d.even_moment(1) == doctest::Approx(*d.variance()).epsilon(1e-12));
    if (nu > 4.0) {
      CHECK(*d.even_moment(2) == doctest::Approx(*d.fourth_moment()).epsilon(1e-12));
    }
  }
}

TEST_CASE("moments against quadrature") {
  for (double nu : {6.0, 10.0}) {
    const TwinT d(nu);
    const double var_quad =
        oracle::integrate_line([&d](double x) { return x * x * d.pdf(x); });
    CHECK(*d.variance() == doctest::Approx(var_quad).epsilon(1e-9));
    // |x| f(x) has a kink at zero, so integrate the half line and double.
    const double abs_quad =
        2.0 * oracle::integrate_upper([&d](double x) { return x * d.pdf(x); }, 0.0);
    CHECK(*d.abs_moment() == doctest::Approx(abs_quad).epsilon(1e-9));
  }
  const TwinT d8(8.0);
  const double m4_quad =
      oracle::integrate_line([&d8](double x) { return std::pow(x, 4) * d8.pdf(x); });
  CHECK(*d8.fourth_moment() == doctest::Approx(m4_quad).epsilon(1e-8));
}

TEST_CASE("sample variance matches the closed form") {
  const TwinT d(6.0);
  const auto sample = d.sample(1000000, 512);
  const auto mo = oracle::sample_moments(sample);
  const double se = std::sqrt((mo.m4 - mo.variance * mo.variance) / sample.size());
  CHECK(std::fabs(mo.variance - *d.variance()) < 4.0 * se);
}

TEST_CASE("log-density series") {
  const TwinT d(10.0);
  CHECK(d.log_pdf_series(0.0, 1) == d.log_norm_const());
  CHECK(d.log_pdf_series(0.0, 3) == d.log_norm_const());
  CHECK_THROWS_AS(d.log_pdf_series(0.1, 0), std::invalid_argument);
  CHECK_THROWS_AS(d.log_pdf_series(0.1, 4), std::invalid_argument);
  // Three terms reproduce the exact log-density to machine precision here.
  CHECK(std::fabs(d.log_pdf_series(0.2, 3) - d.log_pdf(0.2)) <= 2e-16);
}

TEST_CASE("first correction to the gaussian body scales like x^6") {
  const double nu = 10.0;
  // Residual of the exact log-density against its one-term (gaussian-like)
  // truncation, in the cancellation-free form ((nu+1)/2)(u - asinh u).
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double x = 1e-3; x <= 1e-2; x *= 1.12) {
    const double u = x * x / nu;
    const double residual = 0.5 * (nu + 1.0) * oracle::asinh_remainder(u);
    const double ratio = residual / std::pow(x, 6);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK((hi - lo) / hi < 0.10);
  // And the limiting constant is (nu+1) / (12 nu^3).
  CHECK(hi == doctest::Approx((nu + 1.0) / (12.0 * nu * nu * nu)).epsilon(1e-3));
}

TEST_CASE("density normalization across nu") {
  for (double nu : {0.5, 1.0, 2.0, 4.0, 8.0, 30.0, 200.0}) {
    const TwinT d(nu);
    const double total = oracle::integrate_line([&d](double x) { return d.pdf(x); });
    CHECK(std::fabs(total - 1.0) <= 1e-8);
  }
}

TEST_CASE("gaussian limit at nu = 1e6") {
  const TwinT d(1e6);
  double worst = 0.0;
  for (double x = -5.0; x <= 5.0; x += 0.01) {
    const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
    worst = std::max(worst, std::fabs(d.pdf(x) - phi));
  }
  CHECK(worst <= 2e-6);
}

TEST_CASE("location-scale wrapper") {
  const LocationScale<TwinT> m(TwinT(4.0), 1.5, 2.0);
  const TwinT base(4.0);
  CHECK(m.pdf(1.5) == doctest::Approx(base.pdf(0.0) / 2.0).epsilon(1e-15));
  CHECK(m.cdf(1.5) == 0.5);
  CHECK(m.quantile(0.8) == doctest::Approx(1.5 + 2.0 * base.quantile(0.8)).epsilon(1e-12));
  CHECK(m.log_pdf(3.0) ==
        doctest::Approx(base.log_pdf(0.75) - std::log(2.0)).epsilon(1e-13));
  CHECK_THROWS_AS(LocationScale<TwinT>(TwinT(4.0), 0.0, -1.0), std::domain_error);
  Rng rng(8);
  const double draw = m.draw(rng);
  CHECK(std::isfinite(draw));
}

}  // TEST_SUITE
