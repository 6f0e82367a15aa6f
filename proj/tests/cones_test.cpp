#include <gtest/gtest.h>

#include <cmath>

#include "confcurv/cones.hpp"
#include "support.hpp"

namespace confcurv {
namespace {

using testing::Rng;

VectorXd vec(std::initializer_list<double> v) {
  VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x(i++) = d;
  return x;
}

TEST(ElementarySymmetric, SmallCases) {
  const VectorXd s = elementary_symmetric(vec({1, 2, 3}));
  ASSERT_EQ(s.size(), 4);
  EXPECT_EQ(s(0), 1);
  EXPECT_EQ(s(1), 6);
  EXPECT_EQ(s(2), 11);
  EXPECT_EQ(s(3), 6);
  EXPECT_EQ(binomial(5, 2), 10);
  EXPECT_EQ(binomial(6, 6), 1);
}

TEST(Contains, Examples) {
  const Membership a = contains(Cone(3, 3), vec({1, 2, 3}));
  EXPECT_TRUE(a.member);
  EXPECT_GT(a.margin, 0);
  EXPECT_TRUE(contains(Cone(3, 1), vec({1, 1, -0.5})).member);
  EXPECT_FALSE(contains(Cone(3, 2), vec({1, 1, -1})).member);
  EXPECT_FALSE(contains(Cone(3, 1), vec({-1, -1, 1})).member);
}

TEST(Contains, MarginNormalisation) {
  // λ = (1, ..., 1) has σ_j(λ/|λ|)/C(n, j) = n^{-j/2}; the minimum is at j = k
  for (int n = 2; n <= 6; ++n)
    for (int k = 1; k <= n; ++k) {
      const Membership m = contains(Cone(n, k), VectorXd::Ones(n));
      EXPECT_TRUE(m.member);
      EXPECT_NEAR(m.margin, std::pow(n, -k / 2.0), 1e-14);
    }
}

TEST(Contains, Rejections) {
  EXPECT_THROW(contains(Cone(3, 2), VectorXd::Zero(3)), std::invalid_argument);
  EXPECT_THROW(contains(Cone(3, 2), VectorXd::Ones(4)), std::invalid_argument);
  EXPECT_THROW(Cone(3, 4), std::invalid_argument);
  EXPECT_THROW(Cone(3, 0), std::invalid_argument);
}

TEST(Contains, ConeProperties) {
  Rng rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = testing::uniform_int(rng, 2, 6);
    const Cone c(n, testing::uniform_int(rng, 1, n));
    VectorXd a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a(i) = testing::uniform(rng, -0.5, 2);
      b(i) = testing::uniform(rng, -0.5, 2);
    }
    const Membership ma = contains(c, a);
    // symmetry under permutations
    VectorXd p = a.reverse();
    EXPECT_EQ(contains(c, p).member, ma.member);
    EXPECT_NEAR(contains(c, p).margin, ma.margin, 1e-14);
    // invariance under positive scaling
    EXPECT_EQ(contains(c, VectorXd(7.5 * a)).member, ma.member);
    // convexity
    if (ma.member && contains(c, b).member) {
      const double t = testing::uniform(rng, 0, 1);
      EXPECT_TRUE(contains(c, VectorXd(t * a + (1 - t) * b)).member);
    }
    // Γ_n ⊂ Γ_k ⊂ Γ_1
    if (contains(Cone(n, n), a).member) EXPECT_TRUE(ma.member);
    if (ma.member) EXPECT_TRUE(contains(Cone(n, 1), a).member);
  }
}

TEST(Varrho, ClosedForm) {
  for (int n = 1; n <= 6; ++n)
    for (int k = 1; k <= n; ++k) EXPECT_NEAR(varrho(Cone(n, k)), double(n) / k, 1e-9) << n << "," << k;
  EXPECT_NEAR(varrho(Cone(3, 1)), 3.0, 1e-9);
  EXPECT_NEAR(varrho(Cone(4, 2)), 2.0, 1e-9);
}

TEST(ClassifyType, Examples) {
  for (int n = 1; n <= 6; ++n) EXPECT_EQ(classify_type(Cone(n, 1)), ConeType::Type2);
  EXPECT_EQ(classify_type(Cone(3, 2)), ConeType::Type1);
  for (int n = 2; n <= 6; ++n)
    for (int k = 2; k <= n; ++k) EXPECT_EQ(classify_type(Cone(n, k)), ConeType::Type1);
}

TEST(Assumption, Examples) {
  for (int n = 3; n <= 6; ++n) EXPECT_FALSE(check_assumption_1_2(Cone(n, n), n - 1.0));
  EXPECT_TRUE(check_assumption_1_2(Cone(3, 1), 3.0));
  for (int n = 3; n <= 6; ++n) {
    EXPECT_TRUE(check_assumption_1_2(Cone(n, n), n - 1.0 + 1e-3));
    EXPECT_TRUE(check_assumption_1_2(Cone(n, n), 1e6));
  }
  EXPECT_THROW(check_assumption_1_2(Cone(3, 1), 1.0), std::invalid_argument);
}

TEST(Cone, Naming) {
  EXPECT_EQ(Cone(4, 2).name(), "Gamma_2 (n=4)");
  EXPECT_EQ(Cone(4, 2), Cone::gamma_k(4, 2));
}

}  // namespace
}  // namespace confcurv
