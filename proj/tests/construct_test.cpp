#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "confcurv/conformal.hpp"
#include "confcurv/construct.hpp"
#include "confcurv/spectrum.hpp"
#include "support.hpp"

namespace confcurv {
namespace {

using testing::Rng;

CovariantJet<double> random_jet(Rng& rng, const MatrixXd& g) {
  const int n = static_cast<int>(g.rows());
  CovariantJet<double> v;
  v.value = testing::uniform(rng, 1.0, 2.0);
  v.du = VectorXd(n);
  MatrixXd h(n, n);
  for (int i = 0; i < n; ++i) {
    v.du(i) = testing::uniform(rng, -1, 1);
    for (int j = 0; j < n; ++j) h(i, j) = testing::uniform(rng, -1, 1);
  }
  v.hess = (h + h.transpose()) / 2;
  const MatrixXd ginv = spd_inverse(g);
  v.laplacian = ginv.cwiseProduct(v.hess).sum();
  v.grad_norm2 = v.du.dot(ginv * v.du);
  v.du_du = v.du * v.du.transpose();
  return v;
}

MatrixXd random_spd(Rng& rng, int n) {
  MatrixXd b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = testing::uniform(rng, -0.5, 0.5);
  return b * b.transpose() + MatrixXd::Identity(n, n);
}

VectorXd sorted(VectorXd v) {
  std::sort(v.data(), v.data() + v.size());
  return v;
}

struct Family {
  ChartMetric chart = builtin_metric("flat_perturbed", {});
  ScalarField v = ScalarField::parse("1 + x1", 3);
};

TEST(Key3, SpectrumAtZeroN) {
  for (double tau : {2.0, 3.0, 0.5}) {
    const ConformalData<double> c(tau, 4);
    const VectorXd s = key3_spectrum(0.8, 1.3, 0.0, tau, 4);
    EXPECT_LT((s - VectorXd::Constant(4, 0.8 * (1 + c.gamma))).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Key3, ClosedFormMatchesAssembledTensor) {
  Rng rng(131);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = testing::uniform_int(rng, 3, 6);
    const double tau = testing::uniform_int(rng, 0, 1) ? testing::uniform(rng, 1.5, 6.0) : testing::uniform(rng, 0.1, 0.9);
    const double nf = testing::uniform(rng, 0.0, 8.0);
    const MatrixXd g = random_spd(rng, n);
    const CovariantJet<double> v = random_jet(rng, g);
    const VectorXd closed = sorted(key3_spectrum(v.grad_norm2, v.value, nf, tau, n));
    const VectorXd assembled = generalized_eigs(key3_tensor(v, g, nf, tau), g);
    EXPECT_LT((closed - assembled).cwiseAbs().maxCoeff() / closed.cwiseAbs().maxCoeff(), 1e-10);
  }
  EXPECT_THROW(key3_spectrum(0.0, 1.0, 1.0, 2.0, 3), std::invalid_argument);
}

TEST(ExpPotential, ChainRuleMatchesDirectJet) {
  const Family f;
  const double nf = 2.5;
  const ScalarField u = ScalarField(exp(Expr::constant(nf) * f.v.expr()), 3);
  Rng rng(137);
  for (int t = 0; t < 5; ++t) {
    const VectorXd x = testing::random_point(rng, f.chart.domain);
    const CovariantJet<double> direct = covariant_jet_at(f.chart.metric, u, x);
    const CovariantJet<double> chained = exp_potential_jet(covariant_jet_at(f.chart.metric, f.v, x), nf);
    EXPECT_NEAR(chained.value, direct.value, 1e-12 * direct.value);
    EXPECT_LT(testing::rel_error(chained.hess, direct.hess), 1e-12);
    EXPECT_NEAR(chained.laplacian, direct.laplacian, 1e-12 * std::abs(direct.laplacian));
  }
}

TEST(ExpPotential, ExpandedVMatchesOperator) {
  Rng rng(139);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = testing::uniform_int(rng, 3, 5);
    const double tau = testing::uniform(rng, 1.5, 5.0);
    const double nf = testing::uniform(rng, 0.0, 6.0);
    const MatrixXd g = random_spd(rng, n);
    const CovariantJet<double> v = random_jet(rng, g);
    const MatrixXd a = random_spd(rng, n) - 1.5 * MatrixXd::Identity(n, n);
    const MatrixXd expanded = v_of_exp_potential(v, g, nf, a, tau);
    const MatrixXd reference = v_operator(exp_potential_jet(v, nf), a, g, tau);
    EXPECT_LT((expanded - reference).norm(), 1e-9 * (1 + reference.norm()));
  }
}

TEST(ExpPotential, ZeroNGivesA) {
  Rng rng(149);
  const MatrixXd g = random_spd(rng, 3);
  const CovariantJet<double> v = random_jet(rng, g);
  const MatrixXd a = random_spd(rng, 3);
  EXPECT_LT((v_of_exp_potential(v, g, 0.0, a, 2.0) - a).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ExpPotential, DominantTerm) {
  // ‖V[u]‖ / (N² e^{2Nv}) tends to the norm of γ|∇v|² g + ϱ dv⊗dv
  Rng rng(151);
  const MatrixXd g = random_spd(rng, 3);
  CovariantJet<double> v = random_jet(rng, g);
  v.value = 1.0;
  const double tau = 3.0;
  const ConformalData<double> c(tau, 3);
  const MatrixXd a = MatrixXd::Identity(3, 3);
  const double lead = (c.gamma * v.grad_norm2 * g + c.varrho * v.du_du).norm();
  auto ratio = [&](double nf) {
    return v_of_exp_potential(v, g, nf, a, tau).norm() / (nf * nf * std::exp(2 * nf * v.value));
  };
  EXPECT_NEAR(ratio(20.0) / ratio(40.0), 1.0, 0.05);
  EXPECT_NEAR(ratio(40.0) / lead, 1.0, 0.05);
}

TEST(ExpPotential, MinusSchoutenMatchesLaw) {
  Rng rng(157);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = testing::uniform_int(rng, 3, 5);
    const double nf = testing::uniform(rng, 0.0, 6.0);
    const MatrixXd g = random_spd(rng, n);
    const CovariantJet<double> v = random_jet(rng, g);
    const MatrixXd a = random_spd(rng, n) - 1.5 * MatrixXd::Identity(n, n);
    const MatrixXd expect = -transform_schouten(a, exp_potential_jet(v, nf), g);
    EXPECT_LT((minus_schouten_exp_potential(a, v, g, nf) - expect).norm(), 1e-9 * (1 + expect.norm()));
  }
}

TEST(ExpPotential, PlaneDecompositionOfLeadingSchoutenTerm) {
  // ½|∇v|² g − dv⊗dv has eigenvalues ½|∇v|² (n−1 times) and −½|∇v|²
  Rng rng(163);
  const MatrixXd g = random_spd(rng, 4);
  const CovariantJet<double> v = random_jet(rng, g);
  const VectorXd l = generalized_eigs(MatrixXd(0.5 * v.grad_norm2 * g - v.du_du), g);
  EXPECT_NEAR(l(0), -0.5 * v.grad_norm2, 1e-12);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(l(i), 0.5 * v.grad_norm2, 1e-12);
}

TEST(ExpPotential, OverflowGuard) {
  Rng rng(167);
  const MatrixXd g = random_spd(rng, 3);
  CovariantJet<double> v = random_jet(rng, g);
  v.value = 2.0;
  const MatrixXd a = MatrixXd::Zero(3, 3);
  try {
    v_of_exp_potential(v, g, 126.0, a, 2.0);
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.code(), PreconditionCode::Overflow);
  }
  EXPECT_NO_THROW(v_of_exp_potential(v, g, 125.0, a, 2.0));
}

TEST(Potential, Preconditions) {
  const Family f;
  const SampleGrid grid = make_grid(f.chart.domain, 5);
  auto code_of = [&](const std::string& v, double nf, bool shift) {
    try {
      Potential(f.chart.metric, ScalarField::parse(v, 3), nf, grid, shift);
    } catch (const PreconditionError& e) {
      return to_string(e.code());
    }
    return std::string("ok");
  };
  EXPECT_EQ(code_of("1 + x1", 4, false), "ok");
  EXPECT_EQ(code_of("2", 4, false), "critical_point");
  EXPECT_EQ(code_of("(x1 - 0.5)^2 + 1", 4, false), "critical_point");
  EXPECT_EQ(code_of("x1 + 0.5", 4, false), "v_below_one");
  EXPECT_EQ(code_of("x1 + 0.5", 4, true), "ok");
  EXPECT_EQ(code_of("1 + x1", 126, false), "overflow_guard");
  EXPECT_EQ(code_of("1 + x1", 125, false), "ok");

  const Potential shifted(f.chart.metric, ScalarField::parse("x2 - 3", 3), 1.0, grid, true);
  EXPECT_TRUE(shifted.shifted());
  EXPECT_DOUBLE_EQ(shifted.v_min(), 1.0);
  EXPECT_DOUBLE_EQ(shifted.v_max(), 2.0);
  VectorXd x = VectorXd::Zero(3);
  EXPECT_NEAR(shifted.u().value(x), std::exp(1.0), 1e-14);

  std::vector<ScalarField> lower;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j <= i; ++j) lower.push_back(ScalarField::parse(i == j ? (i == 2 ? "x1 - 0.5" : "1") : "0", 3));
  const MetricField indefinite(3, lower);
  try {
    Potential(indefinite, f.v, 1.0, grid);
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.code(), PreconditionCode::MetricNotSPD);
  }
}

TEST(Verify, ZeroNOnFlatMetricHasZeroMargin) {
  const ChartMetric flat = builtin_metric("euclidean", {});
  const ScalarField v = ScalarField::parse("1 + x1", 3);
  const VerificationReport r = verify_at_N(flat.metric, v, 0.0, VerifyConfig{}, make_grid(flat.domain, 3));
  EXPECT_EQ(r.min_margin, 0.0);
  EXPECT_FALSE(r.verified());
  EXPECT_EQ(r.margins.size(), 27u);
}

TEST(Verify, PositiveSchoutenAndFailureWithFlippedSign) {
  const Family f;
  const SampleGrid grid = make_grid(f.chart.domain, 5);
  VerifyConfig cfg;
  cfg.tau = 2.0;
  cfg.cone = Cone(3, 3);
  const VerificationReport r = verify_at_N(f.chart.metric, f.v, 8.0, cfg, grid);
  EXPECT_TRUE(r.verified());
  EXPECT_GT(r.min_margin, 0.0);
  EXPECT_LT(r.cross_check_residual, 1e-9);
  cfg.alpha = -1;
  EXPECT_FALSE(verify_at_N(f.chart.metric, f.v, 8.0, cfg, grid).verified());
}

TEST(Verify, MarginsAgainstDirectRecomputation) {
  // margins at moderate N agree with the direct oracle on e^{2u} g
  const Family f;
  const SampleGrid grid = make_grid(f.chart.domain, 2);
  for (double tau : {1.0, 2.0, 3.0}) {
    VerifyConfig cfg;
    cfg.tau = tau;
    cfg.cone = Cone(3, 1);
    cfg.alpha = tau == 1.0 ? -1 : 1;
    const double nf = 1.5;
    const VerificationReport r = verify_at_N(f.chart.metric, f.v, nf, cfg, grid);
    const ScalarField u(exp(Expr::constant(nf) * f.v.expr()), 3);
    for (std::size_t p = 0; p < grid.size(); ++p) {
      const VectorXd& x = grid.point(p);
      MatrixXd a = direct_oracle(f.chart.metric, u, tau, x) * double(cfg.alpha);
      const VectorXd l = generalized_eigs(a, f.chart.metric.value(x));
      EXPECT_NEAR(r.margins[p], contains(cfg.cone, l).margin, 1e-9) << "tau=" << tau << " p=" << p;
    }
  }
}

TEST(Verify, TauOneCrossCheck) {
  const Family f;
  VerifyConfig cfg;
  cfg.tau = 1.0;
  cfg.alpha = -1;
  cfg.cone = Cone(3, 1);
  const VerificationReport r = verify_at_N(f.chart.metric, f.v, 6.0, cfg, make_grid(f.chart.domain, 4));
  EXPECT_LT(r.cross_check_residual, 1e-9);
  EXPECT_TRUE(r.verified());
}

TEST(Verify, DeterministicAcrossThreadCounts) {
  const Family f;
  const SampleGrid grid = make_grid(f.chart.domain, 5);
  VerifyConfig one;
  VerifyConfig four;
  four.jobs = 4;
  const VerificationReport a = verify_at_N(f.chart.metric, f.v, 3.0, one, grid);
  const VerificationReport b = verify_at_N(f.chart.metric, f.v, 3.0, four, grid);
  EXPECT_TRUE(a == b);
}

TEST(Search, FindsMinimalN) {
  const Family f;
  const SampleGrid grid = make_grid(f.chart.domain, 5);
  VerifyConfig cfg;
  const SearchResult s = search_min_N(f.chart.metric, f.v, cfg, grid, 64);
  ASSERT_TRUE(s.found);
  EXPECT_LE(s.N_star, 64);
  EXPECT_TRUE(s.report.verified());
  ASSERT_TRUE(s.report.search.has_value());
  EXPECT_FALSE(s.report.search->non_monotone);
  for (const ProbeRecord& p : s.report.search->probes)
    if (p.N < s.N_star) EXPECT_LE(p.min_margin, 0.0);
}

TEST(Search, ReportsFailureWithinCap) {
  const Family f;
  VerifyConfig cfg;
  cfg.alpha = -1;
  const SearchResult s = search_min_N(f.chart.metric, f.v, cfg, make_grid(f.chart.domain, 3), 8);
  EXPECT_FALSE(s.found);
  EXPECT_FALSE(s.report.verified());
  ASSERT_TRUE(s.report.search.has_value());
  EXPECT_EQ(s.report.search->probes.size(), 4u);
  EXPECT_EQ(s.report.search->probes.back().N, 8.0);
}

TEST(Search, OverflowCapLimitsLadder) {
  const Family f;
  VerifyConfig cfg;
  cfg.alpha = -1;
  const ScalarField v = ScalarField::parse("50 + x1", 3);
  const SearchResult s = search_min_N(f.chart.metric, v, cfg, make_grid(f.chart.domain, 2), 64);
  ASSERT_TRUE(s.report.search.has_value());
  EXPECT_EQ(s.report.search->N_cap, 4.0);
  EXPECT_EQ(s.report.search->probes.back().N, 4.0);
}

TEST(Sectional, RoundSphereUnchanged) {
  const ChartMetric m = builtin_metric("round_sphere_chart", {});
  const SectionalSummary s =
      verify_negative_sectional_dim3(m.metric, ScalarField::parse("0", 3), make_grid(m.domain, 3), 20, 1);
  EXPECT_NEAR(s.max_sectional, 1.0, 1e-9);
  EXPECT_NEAR(s.min_einstein_eig, -1.0, 1e-9);
  EXPECT_LT(s.max_identity_residual, 1e-9);
}

TEST(Sectional, HyperbolicUnchanged) {
  const ChartMetric m = builtin_metric("hyperbolic_ball", {});
  const SectionalSummary s =
      verify_negative_sectional_dim3(m.metric, ScalarField::parse("0", 3), make_grid(m.domain, 3), 20, 1);
  EXPECT_NEAR(s.max_sectional, -1.0, 1e-9);
  EXPECT_NEAR(s.min_einstein_eig, 1.0, 1e-9);
  EXPECT_LT(s.max_identity_residual, 1e-9);
}

TEST(Sectional, RenormalisationScalesByConformalFactor) {
  // constant u = c: g_u = e^{2c} g has K_u = e^{−2c} K; the reported value is e^{2c} K_u = K
  const ChartMetric m = builtin_metric("round_sphere_chart", {});
  const SectionalSummary s =
      verify_negative_sectional_dim3(m.metric, ScalarField::parse("3", 3), make_grid(m.domain, 2), 5, 1);
  EXPECT_NEAR(s.max_sectional, 1.0, 1e-9);
}

TEST(Sectional, SeedDeterminesPlanes) {
  const Family f;
  const ScalarField u(exp(Expr::constant(2.0) * f.v.expr()), 3);
  const SampleGrid grid = make_grid(f.chart.domain, 3);
  const SectionalSummary a = verify_negative_sectional_dim3(f.chart.metric, u, grid, 10, 42, 1);
  const SectionalSummary b = verify_negative_sectional_dim3(f.chart.metric, u, grid, 10, 42, 3);
  const SectionalSummary c = verify_negative_sectional_dim3(f.chart.metric, u, grid, 10, 43, 1);
  EXPECT_TRUE(a == b);
  EXPECT_NE(a.max_sectional, c.max_sectional);
  EXPECT_THROW(verify_negative_sectional_dim3(builtin_metric("euclidean", BuiltinParams{4}).metric,
                                              ScalarField::parse("0", 4),
                                              make_grid(ChartDomain::unit_cube(4), 2), 1, 0),
               DimensionError);
}

}  // namespace
}  // namespace confcurv
