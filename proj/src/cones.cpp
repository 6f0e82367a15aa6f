#include "confcurv/cones.hpp"

#include <cmath>
#include <limits>

namespace confcurv {

VectorXd elementary_symmetric(const VectorXd& lambda) {
  const Eigen::Index n = lambda.size();
  VectorXd e = VectorXd::Zero(n + 1);
  e(0) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j >= 1; --j) e(j) += lambda(i) * e(j - 1);
  return e;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Cone::Cone(int n, int k) : n_(n), k_(k) {
  if (n < 1) throw std::invalid_argument("cone dimension must be positive");
  if (k < 1 || k > n)
    throw std::invalid_argument("gamma_k cone needs 1 <= k <= n (got k = " + std::to_string(k) +
                                ", n = " + std::to_string(n) + ")");
}

std::string Cone::name() const {
  return "Gamma_" + std::to_string(k_) + " (n=" + std::to_string(n_) + ")";
}

Membership contains(const Cone& cone, const VectorXd& lambda) {
  if (lambda.size() != cone.dim())
    throw std::invalid_argument("contains: eigenvalue vector has length " +
                                std::to_string(lambda.size()) + ", cone dimension is " +
                                std::to_string(cone.dim()));
  const double norm = lambda.norm();
  if (norm == 0.0) throw std::invalid_argument("contains: zero vector");
  const VectorXd sigma = elementary_symmetric(lambda / norm);
  double margin = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= cone.k(); ++j) margin = std::min(margin, sigma(j) / binomial(cone.dim(), j));
  return {margin > 0.0, margin};
}

namespace {

VectorXd boundary_probe(int n, double t) {
  VectorXd v = VectorXd::Ones(n);
  v(n - 1) = 1.0 - t;
  return v;
}

}  // namespace

double varrho(const Cone& cone, double tolerance) {
  const int n = cone.dim();
  double lo = 0.0;
  double hi = n + 1.0;
  if (!contains(cone, boundary_probe(n, lo)).member || contains(cone, boundary_probe(n, hi)).member)
    throw std::runtime_error("varrho: no membership flip on [0, n+1] for " + cone.name());
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    const VectorXd probe = boundary_probe(n, mid);
    if (probe.norm() != 0.0 && contains(cone, probe).member)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

ConeType classify_type(const Cone& cone) {
  const int n = cone.dim();
  auto probe = [&](double eps) {
    VectorXd v = VectorXd::Constant(n, eps);
    v(n - 1) = 1.0;
    return contains(cone, v);
  };
  const Membership coarse = probe(1e-6);
  const Membership fine = probe(1e-9);
  if (!coarse.member && !fine.member) return ConeType::Type1;
  if (coarse.member && fine.member) {
    const double ratio = fine.margin / coarse.margin;
    if (ratio > 0.5) return ConeType::Type2;
    if (ratio < 1e-2) return ConeType::Type1;
  }
  throw std::runtime_error("classify_type: inconsistent evidence at eps = 1e-6 and 1e-9 for " +
                           cone.name());
}

bool check_assumption_1_2(const Cone& cone, double tau) {
  if (tau == 1.0) throw std::invalid_argument("check_assumption_1_2: tau = 1 is excluded");
  const int n = cone.dim();
  const double t = (n - 2) / (tau - 1.0);
  const VectorXd probe = boundary_probe(n, t);
  const bool holds = probe.norm() != 0.0 && contains(cone, probe).member;
  if (tau > 1.0 && n > 2) {
    const double threshold = 1.0 + (n - 2) / varrho(cone);
    const bool scalar_form = tau > threshold;
    if (scalar_form != holds && std::abs(tau - threshold) > 1e-8)
      throw std::logic_error("check_assumption_1_2: vector and scalar forms disagree");
  }
  return holds;
}

}  // namespace confcurv
