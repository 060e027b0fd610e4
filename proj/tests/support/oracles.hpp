#pragma once

// Test-side numerical oracles, intentionally independent of the library's
// adaptive Gauss-Kronrod integrator: double-exponential (tanh-sinh)
// quadrature plus small sample-statistics helpers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

// Tanh-sinh quadrature over a finite interval of g(x, da, db), where
// da = x - a and db = b - x are supplied exactly; integrands with endpoint
// singularities must use the distances rather than recomputing them from x,
// which would quantize to zero near the ends. Refines until two successive
// levels agree to rel_tol.
inline double tanh_sinh_endpoints(
    const std::function<double(double, double, double)>& g, double a, double b,
    double rel_tol = 1e-13) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  const double t_max = 6.0;

  auto node_sum = [&](double h, bool odd_only) {
    double sum = 0.0;
    const int k_max = static_cast<int>(t_max / h);
    for (int k = odd_only ? 1 : 0; k <= k_max; k += odd_only ? 2 : 1) {
      const double t = k * h;
      const double s = std::sinh(t) * std::numbers::pi / 2.0;
      const double e2 = std::exp(-2.0 * s);
      const double dist = 2.0 * e2 / (1.0 + e2);        // 1 - tanh(s)
      const double sech = 2.0 * std::exp(-s) / (1.0 + e2);  // 1/cosh(s)
      const double w = (std::numbers::pi / 2.0) * std::cosh(t) * sech * sech;
      if (!(w > 0.0) || !std::isfinite(w)) continue;
      double term;
      if (k == 0) {
        term = g(mid, half, half) * w;
      } else {
        const double near = half * dist;
        const double far = (b - a) - near;
        if (near <= 0.0) continue;
        term = (g(a + near, near, far) + g(b - near, far, near)) * w;
      }
      if (std::isfinite(term)) sum += term;
    }
    return sum;
  };

  double h = 0.5;
  double value = node_sum(h, false) * h * half;
  int agreements = 0;
  for (int level = 0; level < 11; ++level) {
    h *= 0.5;
    const double refined = 0.5 * value + node_sum(h, true) * h * half;
    const bool close =
        std::fabs(refined - value) <= rel_tol * std::fabs(refined) + 1e-305;
    agreements = close ? agreements + 1 : 0;
    value = refined;
    if (level >= 3 && agreements >= 2) return value;
  }
  return value;
}

// Convenience form for integrands that are regular at the endpoints.
inline double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-13) {
  return tanh_sinh_endpoints([&f](double x, double, double) { return f(x); }, a, b,
                             rel_tol);
}

// Whole-line integral via x = t/(1-t^2); 1-t^2 is formed from the exact
// endpoint distances so the power-law tails keep their mass.
inline double integrate_line(const std::function<double(double)>& f,
                             double rel_tol = 1e-13) {
  auto mapped = [&f](double t, double da, double db) {
    const double om = da * db;  // (1+t)(1-t)
    const double v = f(t / om);
    return v == 0.0 ? 0.0 : v * (1.0 + t * t) / (om * om);
  };
  return tanh_sinh_endpoints(mapped, -1.0, 1.0, rel_tol);
}

// Integral over (lo, +infinity) via x = lo + t/(1-t), t in (0,1).
inline double integrate_upper(const std::function<double(double)>& f, double lo,
                              double rel_tol = 1e-13) {
  auto g = [&f, lo](double t, double, double db) {
    const double v = f(lo + t / db);
    return v == 0.0 ? 0.0 : v / (db * db);
  };
  return tanh_sinh_endpoints(g, 0.0, 1.0, rel_tol);
}

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

// One-sample Kolmogorov-Smirnov statistic against a continuous cdf.
inline double ks_statistic(std::vector<double> sample,
                           const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double u = cdf(sample[i]);
    d = std::max(d, std::fabs(u - (i + 1) / n));
    d = std::max(d, std::fabs(u - i / n));
  }
  return d;
}

// Asymptotic 1% critical value for the one-sample KS statistic.
inline double ks_critical_1pct(std::size_t n) {
  return 1.62762 / std::sqrt(static_cast<double>(n));
}

// Two-sample KS statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) {
      ++i;
    } else {
      ++j;
    }
    const double fa = static_cast<double>(i) / a.size();
    const double fb = static_cast<double>(j) / b.size();
    d = std::max(d, std::fabs(fa - fb));
  }
  return d;
}

inline double ks_two_sample_critical_1pct(std::size_t n, std::size_t m) {
  return 1.62762 * std::sqrt((static_cast<double>(n) + m) /
                             (static_cast<double>(n) * static_cast<double>(m)));
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double m4 = 0.0;   // central fourth moment
  std::size_t n = 0;
};

inline Moments sample_moments(const std::vector<double>& v) {
  Moments mo;
  mo.n = v.size();
  for (double x : v) mo.mean += x;
  mo.mean /= static_cast<double>(mo.n);
  for (double x : v) {
    const double d = x - mo.mean;
    mo.variance += d * d;
    mo.m4 += d * d * d * d;
  }
  mo.variance /= static_cast<double>(mo.n - 1);
  mo.m4 /= static_cast<double>(mo.n);
  return mo;
}

// Standard error of the mean of arbitrary values (empirical).
inline double standard_error(const std::vector<double>& v) {
  Moments mo = sample_moments(v);
  return std::sqrt(mo.variance / static_cast<double>(mo.n));
}

// u - asinh(u), evaluated through the series for small u where the direct
// subtraction would cancel catastrophically.
inline double asinh_remainder(double u) {
  if (std::fabs(u) < 0.01) {
    const double u2 = u * u;
    return u * u2 * (1.0 / 6.0 - u2 * (3.0 / 40.0 - u2 * (15.0 / 336.0)));
  }
  return u - std::asinh(u);
}

}  // namespace oracle
