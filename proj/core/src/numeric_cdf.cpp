#include "twintt/numeric_cdf.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "twintt/quadrature.hpp"

namespace twintt {

namespace {

double map_to_x(double t) { return t / (1.0 - t * t); }

double map_to_t(double x) {
  // Stable inverse of x = t/(1-t^2): t = 2x / (1 + sqrt(1+4x^2)).
  return 2.0 * x / (1.0 + std::sqrt(1.0 + 4.0 * x * x));
}

}  // namespace

NumericCdf::NumericCdf(std::function<double(double)> pdf, int panels, int degree,
                       double node_tol)
    : panels_(panels), degree_(degree) {
  if (panels < 2 || degree < 2) {
    throw std::invalid_argument("NumericCdf: need at least 2 panels and degree 2");
  }
  auto integrand = [&pdf](double t) {
    const double om = 1.0 - t * t;
    const double v = pdf(t / om);
    return v == 0.0 ? 0.0 : v * (1.0 + t * t) / (om * om);
  };

  const int per_panel = degree_ + 1;
  nodes_.reserve(static_cast<std::size_t>(panels_) * per_panel);
  values_.reserve(nodes_.capacity());

  double acc = 0.0;
  double prev_t = -1.0;
  for (int p = 0; p < panels_; ++p) {
    const double t0 = -1.0 + 2.0 * p / panels_;
    const double t1 = -1.0 + 2.0 * (p + 1) / panels_;
    for (int j = 0; j <= degree_; ++j) {
      // Chebyshev-Lobatto nodes, ascending.
      const double xi = -std::cos(std::numbers::pi * j / degree_);
      const double t = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * xi;
      if (t > prev_t) {
        const QuadratureResult q = integrate(integrand, prev_t, t, node_tol, 400);
        if (!std::isfinite(q.value)) {
          throw std::runtime_error("NumericCdf: non-finite integrand");
        }
        acc += q.value;
        prev_t = t;
      }
      nodes_.push_back(t);
      values_.push_back(acc);
    }
  }
  total_ = acc;
  if (!(total_ > 0.0) || !std::isfinite(total_)) {
    throw std::runtime_error("NumericCdf: total mass is not a positive finite number");
  }
}

double NumericCdf::eval_t(double t) const {
  if (t <= -1.0) return 0.0;
  if (t >= 1.0) return 1.0;
  int p = static_cast<int>((t + 1.0) * 0.5 * panels_);
  if (p >= panels_) p = panels_ - 1;
  const int base = p * (degree_ + 1);

  // Barycentric interpolation on the Lobatto nodes: weights (-1)^j, halved
  // at the panel ends.
  double num = 0.0;
  double den = 0.0;
  for (int j = 0; j <= degree_; ++j) {
    const double d = t - nodes_[base + j];
    if (d == 0.0) return values_[base + j] / total_;
    double w = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j == degree_) w *= 0.5;
    const double c = w / d;
    num += c * values_[base + j];
    den += c;
  }
  double v = num / den / total_;
  if (v < 0.0) v = 0.0;
  if (v > 1.0) v = 1.0;
  return v;
}

double NumericCdf::operator()(double x) const {
  if (std::isnan(x)) throw std::domain_error("NumericCdf: x must not be NaN");
  if (std::isinf(x)) return x > 0.0 ? 1.0 : 0.0;
  return eval_t(map_to_t(x));
}

double NumericCdf::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::domain_error("NumericCdf quantile: u must lie strictly inside (0, 1)");
  }
  double lo = -1.0;
  double hi = 1.0;
  double mid = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double v = eval_t(mid);
    if (std::fabs(v - u) <= 1e-10) break;
    if (v < u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return map_to_x(mid);
}

}  // namespace twintt
