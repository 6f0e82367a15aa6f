#ifndef CONFCURV_CONFORMAL_HPP
#define CONFCURV_CONFORMAL_HPP

#include <cmath>
#include <stdexcept>

#include "confcurv/chart.hpp"
#include "confcurv/curvature.hpp"

namespace confcurv {

/// Constants attached to τ != 1:
///   ϱ = (n − 2)/(τ − 1),  γ = (τ − 2)(n − 2)/(2(τ − 1)).
template <typename Scalar>
struct ConformalData {
  Scalar tau;
  int alpha;
  Scalar varrho;
  Scalar gamma;

  ConformalData(Scalar tau_, int n, int alpha_ = 1) : tau(tau_), alpha(alpha_) {
    if (tau == Scalar(1)) throw std::invalid_argument("conformal constants need tau != 1");
    if (alpha != 1 && alpha != -1) throw std::invalid_argument("alpha must be +1 or -1");
    const Scalar nm2 = static_cast<Scalar>(n - 2);
    varrho = nm2 / (tau - Scalar(1));
    gamma = (tau - Scalar(2)) * nm2 / (Scalar(2) * (tau - Scalar(1)));
  }
};

/**
 * Modified Schouten tensor of g_u = e^{2u} g from that of g:
 *
 *   A^τ_{g_u} = A^τ_g + (τ−1)/(n−2) Δu g − ∇²u + (τ−2)/2 |∇u|² g + du⊗du,
 *
 * with Δ, ∇², |·| taken with respect to g. The result is expressed in the
 * coordinate frame; its eigenvalues relative to g_u are e^{−2u} times those
 * relative to g (see eigs_relative_to_conformal).
 */
template <typename Scalar>
Matrix<Scalar> transform_modified_schouten(const Matrix<Scalar>& a_tau_g,
                                           const CovariantJet<Scalar>& u,
                                           const Matrix<Scalar>& g, Scalar tau) {
  const Eigen::Index n = g.rows();
  if (n < 3) throw DimensionError("conformal transformation law needs dimension >= 3");
  const Scalar nm2 = static_cast<Scalar>(n - 2);
  return a_tau_g + ((tau - Scalar(1)) / nm2 * u.laplacian) * g - u.hess +
         ((tau - Scalar(2)) / Scalar(2) * u.grad_norm2) * g + u.du_du;
}

/// Schouten tensor of g_u: A_g − ∇²u − ½|∇u|² g + du⊗du.
template <typename Scalar>
Matrix<Scalar> transform_schouten(const Matrix<Scalar>& a_g, const CovariantJet<Scalar>& u,
                                  const Matrix<Scalar>& g) {
  if (g.rows() < 3) throw DimensionError("conformal transformation law needs dimension >= 3");
  return a_g - u.hess - (Scalar(0.5) * u.grad_norm2) * g + u.du_du;
}

/**
 * V[u] = Δu g − ϱ∇²u + γ|∇u|² g + ϱ du⊗du + A.
 *
 * With A = (n−2)/(τ−1) A^τ_g this equals (n−2)/(τ−1) A^τ_{g_u}. Throws for
 * τ = 1, where V is undefined.
 */
template <typename Scalar>
Matrix<Scalar> v_operator(const CovariantJet<Scalar>& u, const Matrix<Scalar>& a,
                          const Matrix<Scalar>& g, Scalar tau) {
  const ConformalData<Scalar> c(tau, static_cast<int>(g.rows()));
  return u.laplacian * g - c.varrho * u.hess + (c.gamma * u.grad_norm2) * g +
         c.varrho * u.du_du + a;
}

/// Eigenvalues of a coordinate-frame tensor relative to g_u = e^{2u} g,
/// given its eigenvalues relative to g.
template <typename Scalar>
Vector<Scalar> eigs_relative_to_conformal(const Vector<Scalar>& eigs_wrt_g, Scalar u) {
  using std::exp;
  return exp(Scalar(-2) * u) * eigs_wrt_g;
}

/**
 * A^τ of e^{2u} g at x, computed from scratch: the metric field with entries
 * e^{2u} g_ij is differentiated and run through the curvature pipeline. No
 * transformation law is used; this is the independent check for
 * transform_modified_schouten.
 */
MatrixXd direct_oracle(const MetricField& g, const ScalarField& u, double tau,
                       const VectorXd& x);

/// Modified Schouten tensor (α = +1) of g at x.
MatrixXd modified_schouten_at(const MetricField& g, double tau, const VectorXd& x);

/// Covariant jet of u with respect to g at x.
CovariantJet<double> covariant_jet_at(const MetricField& g, const ScalarField& u,
                                      const VectorXd& x);

}  // namespace confcurv

#endif  // CONFCURV_CONFORMAL_HPP
