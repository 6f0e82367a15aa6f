#include "confcurv/construct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "confcurv/spectrum.hpp"
#include "parallel.hpp"

namespace confcurv {

std::string to_string(PreconditionCode code) {
  switch (code) {
    case PreconditionCode::VBelowOne: return "v_below_one";
    case PreconditionCode::CriticalPoint: return "critical_point";
    case PreconditionCode::Overflow: return "overflow_guard";
    case PreconditionCode::MetricNotSPD: return "metric_not_spd";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Potential

Potential::Checked Potential::check(const MetricField& g, const ScalarField& v,
                                    const SampleGrid& grid, bool shift_v) {
  if (v.dim() != g.dim() || grid.domain().dim() != g.dim())
    throw std::invalid_argument("potential, metric and grid dimensions differ");
  try {
    check_spd_on_grid(g, grid);
  } catch (const MetricNotSPD& e) {
    throw PreconditionError(PreconditionCode::MetricNotSPD, e.what());
  }

  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -vmin;
  double min_grad = vmin;
  std::size_t min_grad_at = 0;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const VectorXd& x = grid.point(p);
    const Jet2<double> j = v.jet(x);
    vmin = std::min(vmin, j.value());
    vmax = std::max(vmax, j.value());
    const MatrixXd ginv = spd_inverse(g.value(x));
    const double grad = std::sqrt(std::max(0.0, j.grad().dot(ginv * j.grad())));
    if (grad < min_grad) {
      min_grad = grad;
      min_grad_at = p;
    }
  }
  if (min_grad < kCriticalThreshold)
    throw PreconditionError(PreconditionCode::CriticalPoint,
                            "v has a critical point: |grad v|_g = " + std::to_string(min_grad) +
                                " at grid point " + std::to_string(min_grad_at));

  Checked c{v, vmin, vmax, min_grad, false};
  if (vmin < 1.0) {
    if (!shift_v)
      throw PreconditionError(PreconditionCode::VBelowOne,
                              "v must be >= 1 on the grid (min v = " + std::to_string(vmin) +
                                  "); enable the v shift to enforce it");
    const double shift = 1.0 - vmin;
    c.v = ScalarField(v.expr() + Expr::constant(shift), v.dim(), "(" + v.name() + ") + shift");
    c.v_min = 1.0;
    c.v_max = vmax + shift;
    c.shifted = true;
  }
  return c;
}

Potential::Potential(Checked c, double n_factor)
    : v_(std::move(c.v)),
      n_factor_(n_factor),
      v_min_(c.v_min),
      v_max_(c.v_max),
      min_grad_(c.min_grad),
      shifted_(c.shifted) {
  if (!(n_factor >= 0.0)) throw std::invalid_argument("N must be non-negative");
  if (n_factor * v_max_ > kOverflowGuard)
    throw PreconditionError(PreconditionCode::Overflow,
                            "N * max v = " + std::to_string(n_factor * v_max_) +
                                " exceeds the overflow guard " + std::to_string(kOverflowGuard));
}

Potential::Potential(const MetricField& g, const ScalarField& v, double n_factor,
                     const SampleGrid& grid, bool shift_v)
    : Potential(check(g, v, grid, shift_v), n_factor) {}

ScalarField Potential::u() const {
  return ScalarField(exp(Expr::constant(n_factor_) * v_.expr()), v_.dim());
}

// ---------------------------------------------------------------------------
// Closed forms

VectorXd key3_spectrum(double grad_norm2, double v_at_x, double n_factor, double tau, int n) {
  if (!(grad_norm2 > 0.0)) throw std::invalid_argument("key3_spectrum needs |grad v|^2 > 0");
  const ConformalData<double> c(tau, n);
  const double e = std::exp(n_factor * v_at_x);
  const double base = 1.0 + c.gamma * e;
  VectorXd lam = VectorXd::Constant(n, base);
  lam(n - 1) = base + c.varrho * (e - 1.0);
  return grad_norm2 * lam;
}

MatrixXd key3_tensor(const CovariantJet<double>& v, const MatrixXd& g, double n_factor,
                     double tau) {
  const ConformalData<double> c(tau, static_cast<int>(g.rows()));
  const double e = std::exp(n_factor * v.value);
  return ((1.0 + c.gamma * e) * v.grad_norm2) * g + (c.varrho * (e - 1.0)) * v.du_du;
}

CovariantJet<double> exp_potential_jet(const CovariantJet<double>& v, double n_factor) {
  const double e = std::exp(n_factor * v.value);
  const double n1 = n_factor * e;
  const double n2 = n_factor * n_factor * e;
  const double n2e2 = n2 * e;
  CovariantJet<double> u;
  u.value = e;
  u.du = n1 * v.du;
  u.hess = n1 * v.hess + n2 * v.du_du;
  u.laplacian = n1 * v.laplacian + n2 * v.grad_norm2;
  u.grad_norm2 = n2e2 * v.grad_norm2;
  u.du_du = n2e2 * v.du_du;
  return u;
}

MatrixXd v_of_exp_potential(const CovariantJet<double>& v, const MatrixXd& g, double n_factor,
                            const MatrixXd& a, double tau) {
  if (n_factor * v.value > kOverflowGuard)
    throw PreconditionError(PreconditionCode::Overflow,
                            "N * v = " + std::to_string(n_factor * v.value) +
                                " exceeds the overflow guard");
  const ConformalData<double> c(tau, static_cast<int>(g.rows()));
  const double e = std::exp(n_factor * v.value);
  return (n_factor * n_factor * e) * key3_tensor(v, g, n_factor, tau) +
         (n_factor * e) * (v.laplacian * g - c.varrho * v.hess) + a;
}

MatrixXd minus_schouten_exp_potential(const MatrixXd& a_g, const CovariantJet<double>& v,
                                      const MatrixXd& g, double n_factor) {
  if (n_factor * v.value > kOverflowGuard)
    throw PreconditionError(PreconditionCode::Overflow,
                            "N * v = " + std::to_string(n_factor * v.value) +
                                " exceeds the overflow guard");
  const double e = std::exp(n_factor * v.value);
  const double n2 = n_factor * n_factor;
  return -a_g + (n_factor * e) * v.hess + (n2 * e) * v.du_du +
         (n2 * e * e) * ((0.5 * v.grad_norm2) * g - v.du_du);
}

// ---------------------------------------------------------------------------
// Verification

bool VerificationReport::verified() const {
  if (!(min_margin > 0.0)) return false;
  if (sectional && !(sectional->max_sectional < 0.0)) return false;
  return true;
}

namespace {

double relative_gap(const MatrixXd& a, const MatrixXd& b) {
  return (a - b).norm() / (1.0 + b.norm());
}

struct PointResult {
  double margin = 0;
  double residual = 0;
};

PointResult verify_point(const MetricField& g, const Potential& pot, const VerifyConfig& cfg,
                         const VectorXd& x) {
  const int n = g.dim();
  const MetricJets<double> jets = metric_jets(g, x);
  const CurvaturePoint<double> curv = riemann(jets);
  const CovariantJet<double> vj = covariant_hessian(pot.v().jet(x), curv.gamma, jets.value);
  const CovariantJet<double> uj = exp_potential_jet(vj, pot.N());

  PointResult r;
  MatrixXd tensor;
  if (cfg.tau != 1.0) {
    const MatrixXd a_tau = modified_schouten(curv.ric, curv.scal, jets.value, cfg.tau);
    const double scale = (n - 2) / (cfg.tau - 1.0);
    const MatrixXd a = scale * a_tau;
    const MatrixXd v_exp = v_of_exp_potential(vj, jets.value, pot.N(), a, cfg.tau);
    r.residual = relative_gap(v_exp, v_operator(uj, a, jets.value, cfg.tau));
    tensor = v_exp / scale;
  } else {
    const MatrixXd a_g = modified_schouten(curv.ric, curv.scal, jets.value, 1.0);
    tensor = -minus_schouten_exp_potential(a_g, vj, jets.value, pot.N());
    r.residual = relative_gap(tensor, transform_schouten(a_g, uj, jets.value));
  }
  if (cfg.alpha == -1) tensor = -tensor;

  const VectorXd lambda = generalized_eigs(tensor, jets.value);
  r.margin = lambda.norm() == 0.0 ? 0.0 : contains(cfg.cone, lambda).margin;
  return r;
}

VerificationReport verify_with(const MetricField& g, const Potential& pot,
                               const VerifyConfig& cfg, const SampleGrid& grid) {
  if (cfg.cone.dim() != g.dim())
    throw std::invalid_argument("cone dimension does not match the metric");
  if (cfg.alpha != 1 && cfg.alpha != -1) throw std::invalid_argument("alpha must be +1 or -1");

  std::vector<PointResult> results(grid.size());
  detail::parallel_for(grid.size(), cfg.jobs, [&](std::size_t p) {
    results[p] = verify_point(g, pot, cfg, grid.point(p));
  });

  VerificationReport rep;
  rep.metric = g.name();
  rep.potential = pot.v().name();
  const ChartDomain& d = grid.domain();
  rep.lower.assign(d.lower().data(), d.lower().data() + d.dim());
  rep.upper.assign(d.upper().data(), d.upper().data() + d.dim());
  rep.resolution = grid.resolution();
  rep.tau = cfg.tau;
  rep.alpha = cfg.alpha;
  rep.cone_n = cfg.cone.dim();
  rep.cone_k = cfg.cone.k();
  rep.v_shifted = pot.shifted();
  rep.N = pot.N();
  rep.margins.reserve(results.size());
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < results.size(); ++p) {
    rep.margins.push_back(results[p].margin);
    if (results[p].margin < rep.min_margin) {
      rep.min_margin = results[p].margin;
      rep.min_margin_point = p;
    }
    rep.cross_check_residual = std::max(rep.cross_check_residual, results[p].residual);
  }
  return rep;
}

}  // namespace

VerificationReport verify_at_N(const MetricField& g, const ScalarField& v, double n_factor,
                               const VerifyConfig& cfg, const SampleGrid& grid) {
  const Potential pot(g, v, n_factor, grid, cfg.shift_v);
  return verify_with(g, pot, cfg, grid);
}

SearchResult search_min_N(const MetricField& g, const ScalarField& v, const VerifyConfig& cfg,
                          const SampleGrid& grid, int n_max) {
  if (n_max < 1) throw std::invalid_argument("N_max must be >= 1");
  const Potential::Checked checked = Potential::check(g, v, grid, cfg.shift_v);

  SearchSummary summary;
  summary.N_max = n_max;
  summary.N_cap = std::floor(kOverflowGuard / checked.v_max);
  const int limit = static_cast<int>(std::min<double>(n_max, summary.N_cap));

  std::map<int, VerificationReport> reports;
  auto probe = [&](int n) -> bool {
    VerificationReport r = verify_with(g, Potential(checked, n), cfg, grid);
    summary.probes.push_back({static_cast<double>(n), r.min_margin});
    const bool ok = r.verified();
    reports.emplace(n, std::move(r));
    return ok;
  };

  SearchResult result;
  int last_fail = 0;
  int first_success = 0;
  for (int n = 1; n <= limit;) {
    if (probe(n)) {
      first_success = n;
      break;
    }
    last_fail = n;
    if (n == limit) break;
    n = std::min(2 * n, limit);
  }

  if (first_success == 0) {
    summary.found = false;
    if (reports.empty()) {
      // Overflow guard leaves no admissible N; report the N = 0 state.
      result.report = verify_with(g, Potential(checked, 0.0), cfg, grid);
    } else {
      result.report = reports.rbegin()->second;
    }
    result.report.search = summary;
    return result;
  }

  int lo = last_fail;
  int hi = first_success;
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (probe(mid))
      hi = mid;
    else
      lo = mid;
  }

  summary.found = true;
  if (2.0 * hi <= summary.N_cap) {
    VerificationReport r = verify_with(g, Potential(checked, 2.0 * hi), cfg, grid);
    summary.recheck = ProbeRecord{2.0 * hi, r.min_margin};
    if (!r.verified()) summary.non_monotone = true;
  }
  for (const ProbeRecord& a : summary.probes)
    for (const ProbeRecord& b : summary.probes)
      if (a.N < b.N && a.min_margin > 0.0 && !(b.min_margin > 0.0)) summary.non_monotone = true;

  result.found = true;
  result.N_star = hi;
  result.report = reports.at(hi);
  result.report.search = summary;
  return result;
}

SectionalSummary verify_negative_sectional_dim3(const MetricField& g, const ScalarField& u,
                                                const SampleGrid& grid, int planes_per_point,
                                                std::uint64_t seed, int jobs) {
  if (g.dim() != 3 || u.dim() != 3)
    throw DimensionError("sectional curvature verification is only available for n = 3");
  if (planes_per_point < 1) throw std::invalid_argument("planes_per_point must be >= 1");

  struct Local {
    double max_k = -std::numeric_limits<double>::infinity();
    double min_eig = std::numeric_limits<double>::infinity();
    double residual = 0;
  };
  std::vector<Local> locals(grid.size());

  detail::parallel_for(grid.size(), jobs, [&](std::size_t p) {
    const VectorXd& x = grid.point(p);
    // Jets of e^{2(u - u(x))} g; e^{2u} itself is never formed.
    Jet2<double> uj = u.jet(x);
    uj.value() = 0.0;
    const Jet2<double> factor = exp(2.0 * uj);
    const MetricJets<double> jets = metric_jets_from_entries<double>(
        3, [&](Eigen::Index i, Eigen::Index j) {
          return factor * g.entry(static_cast<int>(i), static_cast<int>(j)).jet(x);
        });
    const CurvaturePoint<double> curv = riemann(jets);
    const MatrixXd ein = einstein(curv.ric, curv.scal, jets.value);

    Local& out = locals[p];
    out.min_eig = generalized_eigs(ein, jets.value).minCoeff();

    std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(p) + 1)));
    std::normal_distribution<double> normal;
    for (int k = 0; k < planes_per_point; ++k) {
      VectorXd v1(3), v2(3);
      for (int i = 0; i < 3; ++i) v1(i) = normal(rng);
      for (int i = 0; i < 3; ++i) v2(i) = normal(rng);
      const MatrixXd basis = orthonormal_completion<double>(jets.value, v1, v2);
      const VectorXd e1 = basis.col(0);
      const VectorXd e2 = basis.col(1);
      const VectorXd normal_vec = basis.col(2);
      const double kval = sectional(curv, jets.value, e1, e2);
      const double gnn = normal_vec.dot(ein * normal_vec);
      out.max_k = std::max(out.max_k, kval);
      out.residual = std::max(out.residual, std::abs(gnn + kval) / (1.0 + std::abs(kval)));
    }
  });

  SectionalSummary s;
  s.planes_per_point = planes_per_point;
  s.seed = seed;
  s.max_sectional = -std::numeric_limits<double>::infinity();
  s.min_einstein_eig = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < locals.size(); ++p) {
    if (locals[p].max_k > s.max_sectional) {
      s.max_sectional = locals[p].max_k;
      s.max_sectional_point = p;
    }
    if (locals[p].min_eig < s.min_einstein_eig) {
      s.min_einstein_eig = locals[p].min_eig;
      s.min_einstein_point = p;
    }
    s.max_identity_residual = std::max(s.max_identity_residual, locals[p].residual);
  }
  return s;
}

}  // namespace confcurv
