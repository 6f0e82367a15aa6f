#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "confcurv/errors.hpp"
#include "confcurv/spectrum.hpp"
#include "support.hpp"

namespace confcurv {
namespace {

using testing::Rng;

MatrixXd random_symmetric(Rng& rng, int n) {
  MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = testing::uniform(rng, -1, 1);
  return (a + a.transpose()) / 2;
}

MatrixXd random_spd(Rng& rng, int n) {
  MatrixXd b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = testing::uniform(rng, -1, 1);
  return b * b.transpose() + 0.5 * MatrixXd::Identity(n, n);
}

VectorXd vec(std::initializer_list<double> v) {
  VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x(i++) = d;
  return x;
}

TEST(GeneralizedEigs, Diagonal) {
  const VectorXd l = generalized_eigs(MatrixXd(vec({3, 1, 2}).asDiagonal()), MatrixXd(MatrixXd::Identity(3, 3)));
  EXPECT_NEAR(l(0), 1, 1e-14);
  EXPECT_NEAR(l(1), 2, 1e-14);
  EXPECT_NEAR(l(2), 3, 1e-14);
}

TEST(GeneralizedEigs, DecoupledRatios) {
  const VectorXd l = generalized_eigs(MatrixXd(vec({4, 3}).asDiagonal()), MatrixXd(vec({4, 1}).asDiagonal()));
  EXPECT_NEAR(l(0), 1, 1e-14);
  EXPECT_NEAR(l(1), 3, 1e-14);
}

TEST(GeneralizedEigs, RankOneUpdate) {
  VectorXd w = vec({1, 2, 2}) / 3.0;
  const MatrixXd t = 2.0 * MatrixXd::Identity(3, 3) + 5.0 * w * w.transpose();
  const VectorXd l = generalized_eigs(t, MatrixXd(MatrixXd::Identity(3, 3)));
  EXPECT_NEAR(l(0), 2, 1e-13);
  EXPECT_NEAR(l(1), 2, 1e-13);
  EXPECT_NEAR(l(2), 7, 1e-13);
}

TEST(GeneralizedEigs, DeterminantResidual) {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = testing::uniform_int(rng, 1, 5);
    const MatrixXd t = random_symmetric(rng, n);
    const MatrixXd g = random_spd(rng, n);
    const VectorXd l = generalized_eigs(t, g);
    for (int i = 0; i + 1 < n; ++i) EXPECT_LE(l(i), l(i + 1));
    const double bound = 1e-8 * std::pow(t.norm(), n);
    for (int i = 0; i < n; ++i) EXPECT_LT(std::abs((t - l(i) * g).determinant()), bound);
  }
}

TEST(GeneralizedEigs, MatchesReferenceSolver) {
  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = testing::uniform_int(rng, 2, 6);
    const MatrixXd t = random_symmetric(rng, n);
    const MatrixXd g = random_spd(rng, n);
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ref(t, g, Eigen::EigenvaluesOnly);
    EXPECT_LT((generalized_eigs(t, g) - ref.eigenvalues()).cwiseAbs().maxCoeff(), 1e-11);
  }
}

TEST(GeneralizedEigs, Equivariance) {
  Rng rng(47);
  const MatrixXd t = random_symmetric(rng, 4);
  const MatrixXd g = random_spd(rng, 4);
  const VectorXd l = generalized_eigs(t, g);
  // scaling of T scales λ; conformal scaling of g divides λ
  EXPECT_LT((generalized_eigs(MatrixXd(3.5 * t), g) - 3.5 * l).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((generalized_eigs(t, MatrixXd(4.0 * g)) - l / 4.0).cwiseAbs().maxCoeff(), 1e-12);
  // congruence by an invertible P leaves λ unchanged
  const MatrixXd p = MatrixXd::Identity(4, 4) + 0.3 * random_symmetric(rng, 4) + 0.2 * MatrixXd::Random(4, 4);
  Eigen::JacobiSVD<MatrixXd> svd(p);
  const double cond = svd.singularValues()(0) / svd.singularValues()(3);
  EXPECT_LT((generalized_eigs(MatrixXd(p.transpose() * t * p), MatrixXd(p.transpose() * g * p)) - l)
                .cwiseAbs()
                .maxCoeff(),
            1e-13 * cond * cond * std::max(1.0, l.cwiseAbs().maxCoeff()));
}

TEST(GeneralizedEigs, ExtremeScales) {
  const MatrixXd g = MatrixXd::Identity(3, 3);
  const VectorXd l = generalized_eigs(MatrixXd(1e200 * vec({1, 2, 3}).asDiagonal()), g);
  EXPECT_NEAR(l(2) / 1e200, 3, 1e-13);
  EXPECT_EQ(generalized_eigs(MatrixXd(MatrixXd::Zero(3, 3)), g), VectorXd(VectorXd::Zero(3)));
}

TEST(GeneralizedEigs, Rejections) {
  MatrixXd g = MatrixXd::Identity(2, 2);
  g(1, 1) = 0;
  EXPECT_THROW(generalized_eigs(MatrixXd(MatrixXd::Identity(2, 2)), g), MetricNotSPD);
  EXPECT_THROW(generalized_eigs(MatrixXd(MatrixXd::Identity(3, 3)), MatrixXd(MatrixXd::Identity(2, 2))),
               std::invalid_argument);
}

TEST(Jacobi, SweepLimit) {
  Rng rng(53);
  const MatrixXd a = random_symmetric(rng, 6);
  EXPECT_THROW(jacobi_eigenvalues(a, JacobiOptions{1e-12, 1}), NotConverged);
  EXPECT_NO_THROW(jacobi_eigenvalues(a));
}

}  // namespace
}  // namespace confcurv
