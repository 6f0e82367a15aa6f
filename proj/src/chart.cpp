#include "confcurv/chart.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace confcurv {

ChartDomain::ChartDomain(VectorXd lower, VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size() || lower_.size() < 1)
    throw std::invalid_argument("chart domain bounds must have equal positive length");
  for (Eigen::Index i = 0; i < lower_.size(); ++i)
    if (!(lower_(i) < upper_(i)))
      throw std::invalid_argument("chart domain needs lower < upper on every axis");
}

ChartDomain ChartDomain::unit_cube(int n) { return cube(n, 0.0, 1.0); }

ChartDomain ChartDomain::cube(int n, double lo, double hi) {
  return ChartDomain(VectorXd::Constant(n, lo), VectorXd::Constant(n, hi));
}

bool ChartDomain::contains(const VectorXd& x) const {
  if (x.size() != lower_.size()) return false;
  return (x.array() >= lower_.array()).all() && (x.array() <= upper_.array()).all();
}

SampleGrid make_grid(const ChartDomain& domain, int resolution) {
  if (resolution < 2) throw std::invalid_argument("grid resolution must be >= 2");
  const int n = domain.dim();
  SampleGrid grid(domain, resolution);
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(resolution);
  grid.points_.reserve(total);
  std::vector<int> idx(n, 0);
  for (std::size_t p = 0; p < total; ++p) {
    VectorXd x(n);
    for (int i = 0; i < n; ++i) {
      if (idx[i] == resolution - 1)
        x(i) = domain.upper()(i);
      else
        x(i) = domain.lower()(i) +
               idx[i] * (domain.upper()(i) - domain.lower()(i)) / (resolution - 1);
    }
    grid.points_.push_back(std::move(x));
    for (int i = n - 1; i >= 0; --i) {
      if (++idx[i] < resolution) break;
      idx[i] = 0;
    }
  }
  return grid;
}

ScalarField::ScalarField(Expr e, int n, std::string name)
    : expr_(std::move(e)), n_(n), name_(std::move(name)) {
  if (expr_.arity() > n)
    throw std::invalid_argument("scalar field uses x" + std::to_string(expr_.arity()) +
                                " in dimension " + std::to_string(n));
  if (name_.empty()) name_ = print(expr_);
}

ScalarField ScalarField::parse(const std::string& text, int n) {
  return ScalarField(confcurv::parse(text, n), n, text);
}

MetricField::MetricField(int n, std::vector<ScalarField> lower, std::string name)
    : n_(n), lower_(std::move(lower)), name_(std::move(name)) {
  if (n < 1) throw std::invalid_argument("metric dimension must be positive");
  if (lower_.size() != packed_size(static_cast<std::size_t>(n)))
    throw std::invalid_argument("metric needs n(n+1)/2 entries");
  for (const ScalarField& f : lower_)
    if (f.dim() != n) throw std::invalid_argument("metric entry has the wrong dimension");
}

MetricField MetricField::from_matrix(const std::vector<std::vector<ScalarField>>& m,
                                     std::string name) {
  const int n = static_cast<int>(m.size());
  std::vector<ScalarField> lower;
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(m[i].size()) != n)
      throw std::invalid_argument("metric matrix is not square");
    for (int j = 0; j <= i; ++j) {
      if (!(m[i][j].expr() == m[j][i].expr()))
        throw std::invalid_argument("metric matrix is not symmetric at (" + std::to_string(i + 1) +
                                    "," + std::to_string(j + 1) + ")");
      lower.push_back(m[i][j]);
    }
  }
  return MetricField(n, std::move(lower), std::move(name));
}

const ScalarField& MetricField::entry(int i, int j) const {
  return lower_[packed_index(static_cast<std::size_t>(i), static_cast<std::size_t>(j))];
}

MatrixXd MetricField::value(const VectorXd& x) const {
  MatrixXd g(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j <= i; ++j) g(i, j) = g(j, i) = entry(i, j).value(x);
  return g;
}

MetricField MetricField::conformal(const ScalarField& u) const {
  const Expr factor = exp(Expr::constant(2.0) * u.expr());
  std::vector<ScalarField> lower;
  lower.reserve(lower_.size());
  for (const ScalarField& f : lower_) lower.emplace_back(factor * f.expr(), n_);
  return MetricField(n_, std::move(lower), "exp(2u)*(" + name_ + ")");
}

MetricJets<double> metric_jets(const MetricField& g, const VectorXd& x) {
  return metric_jets_from_entries<double>(
      g.dim(), [&](Eigen::Index i, Eigen::Index j) {
        return g.entry(static_cast<int>(i), static_cast<int>(j)).jet(x);
      });
}

double min_eigenvalue(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void check_spd_on_grid(const MetricField& g, const SampleGrid& grid) {
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const double m = min_eigenvalue(g.value(grid.point(p)));
    if (!(m > 1e-10))
      throw MetricNotSPD("metric " + g.name() + " is not positive definite at grid point " +
                         std::to_string(p) + " (smallest eigenvalue " + std::to_string(m) + ")");
  }
}

Expr default_perturbation(int i, int j) {
  const Expr xi = Expr::variable(i);
  const Expr xj = Expr::variable(j);
  return sin(Expr::constant(i + 1.0) * xj + Expr::constant(j + 1.0) * xi +
             Expr::constant(static_cast<double>(i + j)));
}

const std::vector<std::string>& builtin_metric_names() {
  static const std::vector<std::string> names = {"euclidean", "round_sphere_chart",
                                                 "hyperbolic_ball", "flat_perturbed",
                                                 "conformal_flat"};
  return names;
}

namespace {

Expr kron(int i, int j) { return Expr::constant(i == j ? 1.0 : 0.0); }

ChartMetric diagonal_scaled(const std::string& name, ChartDomain domain, const Expr& factor) {
  const int n = domain.dim();
  std::vector<ScalarField> lower;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      lower.emplace_back(i == j ? factor : Expr::constant(0.0), n);
  return {std::move(domain), MetricField(n, std::move(lower), name)};
}

}  // namespace

ChartMetric builtin_metric(const std::string& name, const BuiltinParams& p) {
  const int n = p.n;
  auto need_dim = [&](int lo) {
    if (n < lo)
      throw std::invalid_argument(name + " needs dimension >= " + std::to_string(lo));
  };

  ChartMetric result = [&]() -> ChartMetric {
    if (name == "euclidean") {
      need_dim(1);
      return diagonal_scaled("euclidean", ChartDomain::unit_cube(n), Expr::constant(1.0));
    }
    if (name == "round_sphere_chart") {
      if (n != 3) throw std::invalid_argument("round_sphere_chart is only defined for n = 3");
      if (!(p.radius > 0.0)) throw std::invalid_argument("round_sphere_chart needs radius > 0");
      VectorXd lo(3), hi(3);
      lo << 0.6, 0.6, 0.0;
      hi << 1.2, 1.2, 1.0;
      const Expr r2 = Expr::constant(p.radius * p.radius);
      const Expr s1 = sin(Expr::variable(0));
      const Expr s2 = sin(Expr::variable(1));
      const Expr zero = Expr::constant(0.0);
      std::vector<ScalarField> lower = {
          ScalarField(r2, 3),   ScalarField(zero, 3), ScalarField(r2 * s1 * s1, 3),
          ScalarField(zero, 3), ScalarField(zero, 3), ScalarField(r2 * s1 * s1 * s2 * s2, 3)};
      return {ChartDomain(lo, hi), MetricField(3, std::move(lower), "round_sphere_chart")};
    }
    if (name == "hyperbolic_ball") {
      need_dim(1);
      Expr r2 = Expr::variable(0) * Expr::variable(0);
      for (int i = 1; i < n; ++i) r2 = r2 + Expr::variable(i) * Expr::variable(i);
      const Expr factor =
          Expr::constant(4.0) * pow(Expr::constant(1.0) - r2, Expr::constant(-2.0));
      return diagonal_scaled("hyperbolic_ball", ChartDomain::cube(n, -0.4, 0.4), factor);
    }
    if (name == "flat_perturbed") {
      need_dim(1);
      const std::size_t count = packed_size(static_cast<std::size_t>(n));
      if (!p.perturbation.empty() && p.perturbation.size() != count)
        throw std::invalid_argument("flat_perturbed needs n(n+1)/2 = " + std::to_string(count) +
                                    " perturbation expressions");
      std::vector<ScalarField> lower;
      std::size_t k = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j, ++k) {
          const Expr h = p.perturbation.empty() ? default_perturbation(i, j)
                                                : confcurv::parse(p.perturbation[k], n);
          lower.emplace_back(kron(i, j) + Expr::constant(p.epsilon) * h, n);
        }
      return {ChartDomain::unit_cube(n), MetricField(n, std::move(lower), "flat_perturbed")};
    }
    if (name == "conformal_flat") {
      need_dim(1);
      const Expr phi = confcurv::parse(p.phi, n);
      return diagonal_scaled("conformal_flat", ChartDomain::unit_cube(n),
                             exp(Expr::constant(2.0) * phi));
    }
    throw std::invalid_argument("unknown builtin metric \"" + name + "\"");
  }();

  check_spd_on_grid(result.metric, make_grid(result.domain, 5));
  return result;
}

}  // namespace confcurv
