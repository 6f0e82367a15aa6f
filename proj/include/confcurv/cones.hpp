#ifndef CONFCURV_CONES_HPP
#define CONFCURV_CONES_HPP

#include <stdexcept>
#include <string>

#include "confcurv/jet.hpp"

namespace confcurv {

/// Elementary symmetric polynomials σ_0..σ_n of λ (σ_0 = 1).
VectorXd elementary_symmetric(const VectorXd& lambda);

/// Binomial coefficient C(n, k) as a double.
double binomial(int n, int k);

/**
 * Garding cone Γ_k = {λ ∈ Rⁿ : σ_j(λ) > 0, j = 1..k}. Γ_n is the positive
 * orthant and Γ_1 the half-space σ_1 > 0; every Γ_k is open, symmetric,
 * convex and contains Γ_n.
 */
class Cone {
 public:
  Cone(int n, int k);
  static Cone gamma_k(int n, int k) { return Cone(n, k); }

  int dim() const { return n_; }
  int k() const { return k_; }
  std::string name() const;

  friend bool operator==(const Cone&, const Cone&) = default;

 private:
  int n_;
  int k_;
};

struct Membership {
  bool member;
  double margin;
};

/**
 * Membership of λ in the cone with a scale-invariant margin
 *   min_{j<=k} σ_j(λ/|λ|₂) / C(n, j),
 * positive exactly when λ is a member. Throws std::invalid_argument for the
 * zero vector or a dimension mismatch.
 */
Membership contains(const Cone& cone, const VectorXd& lambda);

/// ϱ_Γ: the t > 0 with (1, ..., 1, 1 − t) on the cone boundary, by bisection.
double varrho(const Cone& cone, double tolerance = 1e-10);

enum class ConeType { Type1, Type2 };

/**
 * Type 1 when (0, ..., 0, 1) lies on the boundary, type 2 when it is inside.
 *
 * Decided by probing (ε, ..., ε, 1) at ε = 1e-6 and 1e-9: a margin that stays
 * bounded away from zero means type 2, one that collapses with ε means type 1.
 * This is a numerical heuristic; mixed evidence throws std::runtime_error.
 */
ConeType classify_type(const Cone& cone);

/**
 * Whether (1, ..., 1, 1 − (n−2)/(τ−1)) lies in the cone. For τ > 1 the answer
 * is cross-checked against τ > 1 + (n−2)/ϱ_Γ. Throws std::invalid_argument
 * for τ = 1.
 */
bool check_assumption_1_2(const Cone& cone, double tau);

}  // namespace confcurv

#endif  // CONFCURV_CONES_HPP
