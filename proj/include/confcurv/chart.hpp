#ifndef CONFCURV_CHART_HPP
#define CONFCURV_CHART_HPP

#include <string>
#include <utility>
#include <vector>

#include "confcurv/curvature.hpp"
#include "confcurv/expr.hpp"
#include "confcurv/jet.hpp"

namespace confcurv {

/// Closed coordinate box ∏[lower_i, upper_i] standing in for a compact
/// manifold with boundary.
class ChartDomain {
 public:
  ChartDomain(VectorXd lower, VectorXd upper);
  static ChartDomain unit_cube(int n);
  static ChartDomain cube(int n, double lo, double hi);

  int dim() const { return static_cast<int>(lower_.size()); }
  const VectorXd& lower() const { return lower_; }
  const VectorXd& upper() const { return upper_; }
  bool contains(const VectorXd& x) const;

 private:
  VectorXd lower_;
  VectorXd upper_;
};

/// Tensor-product sample of a ChartDomain, boundary faces included. Points
/// are in lexicographic order of their axis indices (last axis fastest).
class SampleGrid {
 public:
  const ChartDomain& domain() const { return domain_; }
  int resolution() const { return resolution_; }
  std::size_t size() const { return points_.size(); }
  const VectorXd& point(std::size_t i) const { return points_[i]; }
  const std::vector<VectorXd>& points() const { return points_; }

 private:
  friend SampleGrid make_grid(const ChartDomain& domain, int resolution);
  SampleGrid(ChartDomain d, int r) : domain_(std::move(d)), resolution_(r) {}

  ChartDomain domain_;
  int resolution_;
  std::vector<VectorXd> points_;
};

/// r^n nodes lower_i + k (upper_i − lower_i)/(r − 1); throws for r < 2.
SampleGrid make_grid(const ChartDomain& domain, int resolution);

/// Scalar function on a chart, backed by an expression.
class ScalarField {
 public:
  ScalarField(Expr e, int n, std::string name = {});
  static ScalarField parse(const std::string& text, int n);

  int dim() const { return n_; }
  const Expr& expr() const { return expr_; }
  const std::string& name() const { return name_; }

  Jet2<double> jet(const VectorXd& x) const { return eval_jet2(expr_, x); }
  double value(const VectorXd& x) const { return eval(expr_, x); }

 private:
  Expr expr_;
  int n_;
  std::string name_;
};

/// Symmetric matrix of scalar fields; one field per unordered pair (i, j).
class MetricField {
 public:
  /// `lower` holds entries (0,0), (1,0), (1,1), (2,0), ... (packed lower triangle).
  MetricField(int n, std::vector<ScalarField> lower, std::string name = {});

  /// From a full n×n matrix of fields; only the lower triangle is kept, the
  /// upper one must match structurally.
  static MetricField from_matrix(const std::vector<std::vector<ScalarField>>& m,
                                 std::string name = {});

  int dim() const { return n_; }
  const ScalarField& entry(int i, int j) const;
  const std::string& name() const { return name_; }

  MatrixXd value(const VectorXd& x) const;

  /// Multiplies every entry by e^{2u}.
  MetricField conformal(const ScalarField& u) const;

 private:
  int n_;
  std::vector<ScalarField> lower_;
  std::string name_;
};

/// g(x), ∂g(x), ∂²g(x). Evaluation errors from expr propagate.
MetricJets<double> metric_jets(const MetricField& g, const VectorXd& x);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const MatrixXd& m);

/// Throws MetricNotSPD if the smallest eigenvalue of g is <= 1e-10 at any
/// grid point.
void check_spd_on_grid(const MetricField& g, const SampleGrid& grid);

struct ChartMetric {
  ChartDomain domain;
  MetricField metric;
};

/**
 * Parameters for the builtin catalog. Not every field applies to every name:
 *
 *   euclidean            n                           [0,1]^n, g = δ
 *   round_sphere_chart   radius (n = 3)              ψ, θ ∈ [0.6,1.2], φ ∈ [0,1]
 *   hyperbolic_ball      n                           |x_i| <= 0.4, g = 4(1−|x|²)^{-2} δ
 *   flat_perturbed       n, epsilon, perturbation    [0,1]^n, g = δ + ε h
 *   conformal_flat       n, phi                      [0,1]^n, g = e^{2φ} δ
 *
 * `perturbation` lists the packed lower triangle of h; when empty a fixed
 * smooth default with |h_ij| <= 1 is used.
 */
struct BuiltinParams {
  int n = 3;
  double radius = 1.0;
  double epsilon = 0.1;
  std::vector<std::string> perturbation;
  std::string phi = "0";
};

/// Default perturbation entry h_ij = sin((i+1) x_j + (j+1) x_i + i + j) (0-based).
Expr default_perturbation(int i, int j);

/// Throws std::invalid_argument for an unknown name or bad parameters and
/// MetricNotSPD when the metric is singular on its domain.
ChartMetric builtin_metric(const std::string& name, const BuiltinParams& params);

const std::vector<std::string>& builtin_metric_names();

}  // namespace confcurv

#endif  // CONFCURV_CHART_HPP
