// Shared helpers for the unit tests and the acceptance binary: random
// expression generators and finite-difference reference derivatives.
#ifndef CONFCURV_TESTS_SUPPORT_HPP
#define CONFCURV_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "confcurv/chart.hpp"
#include "confcurv/expr.hpp"

namespace confcurv::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline VectorXd random_point(Rng& rng, const ChartDomain& d, double inset = 0.1) {
  VectorXd x(d.dim());
  for (int i = 0; i < d.dim(); ++i) {
    const double w = d.upper()(i) - d.lower()(i);
    x(i) = uniform(rng, d.lower()(i) + inset * w, d.upper()(i) - inset * w);
  }
  return x;
}

/// Random expression in x1..xn that stays finite and in-domain for x in
/// [-1, 1]^n: logs and square roots only see arguments bounded away from 0.
inline Expr random_expression(Rng& rng, int n, int depth) {
  if (depth <= 0 || uniform_int(rng, 0, 4) == 0) {
    if (uniform_int(rng, 0, 2) == 0) return Expr::constant(std::round(uniform(rng, -2.0, 2.0) * 8) / 8);
    return Expr::variable(uniform_int(rng, 0, n - 1));
  }
  const Expr a = random_expression(rng, n, depth - 1);
  switch (uniform_int(rng, 0, 10)) {
    case 0: return a + random_expression(rng, n, depth - 1);
    case 1: return a - random_expression(rng, n, depth - 1);
    case 2:
    case 3: return a * random_expression(rng, n, depth - 1);
    case 4: return a / (Expr::constant(2.5) + sin(random_expression(rng, n, depth - 1)));
    case 5: return sin(a);
    case 6: return cos(a);
    case 7: return exp(Expr::constant(0.5) * sin(a));
    case 8: return log(Expr::constant(1.5) + cos(a));
    case 9: return sqrt(Expr::constant(1.0) + a * a);
    default: return pow(sin(a) + Expr::constant(0.3), Expr::constant(uniform_int(rng, 2, 3)));
  }
}

/// Random polynomial of total degree <= degree with coefficients in [-c, c].
inline Expr random_polynomial(Rng& rng, int n, int degree, double c) {
  Expr e = Expr::constant(uniform(rng, -c, c));
  for (int t = 0; t < 2 * n; ++t) {
    Expr m = Expr::constant(uniform(rng, -c, c));
    const int d = uniform_int(rng, 1, degree);
    for (int k = 0; k < d; ++k) m = m * Expr::variable(uniform_int(rng, 0, n - 1));
    e = e + m;
  }
  return e;
}

/// Random flat_perturbed metric with polynomial-trigonometric perturbations.
inline ChartMetric random_flat_perturbed(Rng& rng, int n, double epsilon) {
  BuiltinParams p;
  p.n = n;
  p.epsilon = epsilon;
  for (std::size_t k = 0; k < packed_size(static_cast<std::size_t>(n)); ++k) {
    const double a = std::round(uniform(rng, -2, 2) * 100) / 100;
    const double b = std::round(uniform(rng, -2, 2) * 100) / 100;
    const int i = uniform_int(rng, 1, n);
    const int j = uniform_int(rng, 1, n);
    p.perturbation.push_back("sin(" + std::to_string(a) + "*x" + std::to_string(i) + " + " +
                             std::to_string(b) + "*x" + std::to_string(j) + ") + x" +
                             std::to_string(i) + "*x" + std::to_string(j));
  }
  return builtin_metric("flat_perturbed", p);
}

using ScalarFn = std::function<double(const VectorXd&)>;

/// Fourth-order central difference of f along e_i, step h.
inline double fd_gradient(const ScalarFn& f, const VectorXd& x, int i, double h = 1e-3) {
  auto at = [&](double s) {
    VectorXd y = x;
    y(i) += s;
    return f(y);
  };
  return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
}

/// Fourth-order central second difference ∂_i∂_j f.
inline double fd_hessian(const ScalarFn& f, const VectorXd& x, int i, int j, double h = 1e-3) {
  if (i == j) {
    auto at = [&](double s) {
      VectorXd y = x;
      y(i) += s;
      return f(y);
    };
    return (-at(2 * h) + 16 * at(h) - 30 * at(0) + 16 * at(-h) - at(-2 * h)) / (12 * h * h);
  }
  const ScalarFn di = [&](const VectorXd& y) { return fd_gradient(f, y, i, h); };
  return fd_gradient(di, x, j, h);
}

/// Max-abs relative error ‖a − b‖∞ / max(1, ‖b‖∞).
inline double rel_error(const MatrixXd& a, const MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

}  // namespace confcurv::testing

#endif  // CONFCURV_TESTS_SUPPORT_HPP
