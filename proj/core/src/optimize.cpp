#include "twintt/optimize.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace twintt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double guarded(const Objective& f, const std::vector<double>& x) {
  const double v = f(x);
  return std::isfinite(v) ? v : kNegInf;
}

struct SimplexOutcome {
  std::vector<double> x;
  double value;
  int iterations;
  bool converged;
};

SimplexOutcome nelder_mead(const Objective& f, const std::vector<double>& x0,
                           const OptimizeConfig& cfg) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  for (std::size_t j = 0; j < n; ++j) {
    pts[j + 1][j] += 0.1 * std::max(std::fabs(x0[j]), 1.0);
  }
  for (std::size_t i = 0; i <= n; ++i) vals[i] = guarded(f, pts[i]);

  std::vector<std::size_t> order(n + 1);
  int iter = 0;
  bool converged = false;
  for (; iter < cfg.max_simplex_iter; ++iter) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&vals](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();

    const double f_spread = vals[best] - vals[worst];
    double x_spread = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double lo = pts[0][j], hi = pts[0][j];
      for (std::size_t i = 1; i <= n; ++i) {
        lo = std::min(lo, pts[i][j]);
        hi = std::max(hi, pts[i][j]);
      }
      x_spread = std::max(x_spread, (hi - lo) / std::max(1.0, std::fabs(pts[best][j])));
    }
    if (std::isfinite(vals[best]) &&
        (f_spread <= cfg.f_tol * (std::fabs(vals[best]) + cfg.f_tol) ||
         x_spread <= cfg.x_tol)) {
      converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j];
    }
    for (auto& c : centroid) c /= static_cast<double>(n);

    auto blend = [&](double coef) {
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j) {
        p[j] = centroid[j] + coef * (pts[worst][j] - centroid[j]);
      }
      return p;
    };

    std::vector<double> reflected = blend(-1.0);
    const double fr = guarded(f, reflected);
    if (fr > vals[order[0]]) {
      std::vector<double> expanded = blend(-2.0);
      const double fe = guarded(f, expanded);
      if (fe > fr) {
        pts[worst] = std::move(expanded);
        vals[worst] = fe;
      } else {
        pts[worst] = std::move(reflected);
        vals[worst] = fr;
      }
      continue;
    }
    if (fr > vals[order[n - 1]]) {  // better than second worst
      pts[worst] = std::move(reflected);
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr > vals[worst];
    std::vector<double> contracted = blend(outside ? -0.5 : 0.5);
    const double fc = guarded(f, contracted);
    if (fc > (outside ? fr : vals[worst])) {
      pts[worst] = std::move(contracted);
      vals[worst] = fc;
      continue;
    }
    // shrink toward the best point
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j) {
        pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
      }
      vals[i] = guarded(f, pts[i]);
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (vals[i] > vals[best]) best = i;
  }
  return SimplexOutcome{pts[best], vals[best], iter, converged};
}

Eigen::VectorXd fd_gradient(const Objective& f, const std::vector<double>& x) {
  const std::size_t n = x.size();
  Eigen::VectorXd g(n);
  std::vector<double> probe = x;
  for (std::size_t j = 0; j < n; ++j) {
    const double h = 1e-6 * std::max(std::fabs(x[j]), 1.0);
    probe[j] = x[j] + h;
    const double fp = guarded(f, probe);
    probe[j] = x[j] - h;
    const double fm = guarded(f, probe);
    probe[j] = x[j];
    g[j] = (std::isfinite(fp) && std::isfinite(fm)) ? (fp - fm) / (2.0 * h) : 0.0;
  }
  return g;
}

struct PolishOutcome {
  std::vector<double> x;
  double value;
  int iterations;
  bool converged;
};

// BFGS on the negated objective (standard minimization form); returns the
// result in maximization terms.
PolishOutcome bfgs_polish(const Objective& f, std::vector<double> x, double fx,
                          const OptimizeConfig& cfg) {
  const std::size_t n = x.size();
  double m = -fx;                                   // minimized value
  Eigen::VectorXd grad = -fd_gradient(f, x);        // gradient of -f
  Eigen::MatrixXd b_inv = Eigen::MatrixXd::Identity(n, n);
  int iter = 0;
  bool converged = false;

  for (; iter < cfg.max_polish_iter; ++iter) {
    if (grad.lpNorm<Eigen::Infinity>() <= 1e-8 * std::max(1.0, std::fabs(m))) {
      converged = true;
      break;
    }
    Eigen::VectorXd dir = -b_inv * grad;
    double slope = dir.dot(grad);
    if (!dir.allFinite() || slope >= 0.0) {
      b_inv.setIdentity();
      dir = -grad;
      slope = dir.dot(grad);
    }

    double step = 1.0;
    double m_new = -kNegInf;
    std::vector<double> x_new(n);
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      for (std::size_t j = 0; j < n; ++j) x_new[j] = x[j] + step * dir[j];
      m_new = -guarded(f, x_new);
      if (std::isfinite(m_new) && m_new <= m + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    Eigen::VectorXd grad_new = -fd_gradient(f, x_new);
    Eigen::VectorXd s(n);
    for (std::size_t j = 0; j < n; ++j) s[j] = x_new[j] - x[j];
    const Eigen::VectorXd y = grad_new - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd left = Eigen::MatrixXd::Identity(n, n) - rho * s * y.transpose();
      b_inv = left * b_inv * left.transpose() + rho * s * s.transpose();
    }

    const double improvement = m - m_new;
    x = std::move(x_new);
    m = m_new;
    grad = std::move(grad_new);
    if (improvement <= cfg.f_tol * (std::fabs(m) + cfg.f_tol)) {
      converged = true;
      ++iter;
      break;
    }
  }
  return PolishOutcome{std::move(x), -m, iter, converged};
}

}  // namespace

OptimizeResult maximize(const Objective& f, std::vector<double> x0,
                        const OptimizeConfig& config) {
  if (x0.empty()) throw std::invalid_argument("maximize: empty start vector");
  if (!std::isfinite(f(x0))) {
    throw std::invalid_argument("maximize: objective not finite at start");
  }
  SimplexOutcome simplex = nelder_mead(f, x0, config);
  PolishOutcome polish = bfgs_polish(f, simplex.x, simplex.value, config);

  OptimizeResult result;
  if (polish.value >= simplex.value) {
    result.x = std::move(polish.x);
    result.value = polish.value;
  } else {
    result.x = std::move(simplex.x);
    result.value = simplex.value;
  }
  result.iterations = simplex.iterations + polish.iterations;
  result.converged = simplex.converged || polish.converged;
  return result;
}

Eigen::MatrixXd numerical_hessian(const Objective& f, const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> h(n);
  for (std::size_t j = 0; j < n; ++j) h[j] = std::max(1e-4, 1e-4 * std::fabs(x[j]));

  Eigen::MatrixXd hess(n, n);
  std::vector<double> probe = x;
  const double f0 = f(x);
  for (std::size_t i = 0; i < n; ++i) {
    probe[i] = x[i] + h[i];
    const double fp = f(probe);
    probe[i] = x[i] - h[i];
    const double fm = f(probe);
    probe[i] = x[i];
    hess(i, i) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      probe[i] = x[i] + h[i];
      probe[j] = x[j] + h[j];
      const double fpp = f(probe);
      probe[j] = x[j] - h[j];
      const double fpm = f(probe);
      probe[i] = x[i] - h[i];
      const double fmm = f(probe);
      probe[j] = x[j] + h[j];
      const double fmp = f(probe);
      probe[i] = x[i];
      probe[j] = x[j];
      const double v = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  return hess;
}

OlsFit ols_fit(const std::vector<const std::vector<double>*>& covariates,
               const std::vector<double>& y) {
  const std::size_t n = y.size();
  const std::size_t k = covariates.size() + 1;
  if (n <= k) throw std::invalid_argument("ols_fit: need more observations than parameters");
  Eigen::MatrixXd design(n, k);
  Eigen::VectorXd response(n);
  for (std::size_t i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    for (std::size_t j = 0; j < covariates.size(); ++j) design(i, j + 1) = (*covariates[j])[i];
    response[i] = y[i];
  }
  const Eigen::MatrixXd xtx = design.transpose() * design;
  Eigen::LDLT<Eigen::MatrixXd> solver(xtx);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("ols_fit: singular design matrix");
  }
  const Eigen::VectorXd beta = solver.solve(design.transpose() * response);
  const Eigen::VectorXd resid = response - design * beta;

  OlsFit fit;
  fit.beta.assign(beta.data(), beta.data() + k);
  fit.rss = resid.squaredNorm();
  fit.residual_sd = std::sqrt(fit.rss / static_cast<double>(n - k));
  const Eigen::MatrixXd cov =
      solver.solve(Eigen::MatrixXd::Identity(k, k)) * (fit.rss / static_cast<double>(n - k));
  fit.std_errors.resize(k);
  for (std::size_t j = 0; j < k; ++j) fit.std_errors[j] = std::sqrt(cov(j, j));
  return fit;
}

}  // namespace twintt
