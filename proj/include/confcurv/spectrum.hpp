#ifndef CONFCURV_SPECTRUM_HPP
#define CONFCURV_SPECTRUM_HPP

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "confcurv/errors.hpp"
#include "confcurv/jet.hpp"

namespace confcurv {

/// Eigenvalues sorted ascending.
template <typename Scalar>
using EigList = Vector<Scalar>;

struct JacobiOptions {
  double relative_tolerance = 1e-12;
  int max_sweeps = 50;
};

/**
 * Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
 *
 * Iterates until the off-diagonal Frobenius norm falls below
 * `relative_tolerance * ||A||_F`; throws NotConverged after `max_sweeps`.
 */
template <typename Scalar>
Vector<Scalar> jacobi_eigenvalues(Matrix<Scalar> a, const JacobiOptions& opt = {}) {
  using std::abs;
  using std::sqrt;
  const Eigen::Index n = a.rows();
  const Scalar total = a.norm();
  auto off_norm = [&] {
    Scalar s(0);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return sqrt(s);
  };
  const Scalar target = Scalar(opt.relative_tolerance) * total;
  int sweep = 0;
  while (off_norm() > target) {
    if (sweep++ == opt.max_sweeps)
      throw NotConverged("Jacobi eigenvalue iteration did not converge in " +
                         std::to_string(opt.max_sweeps) + " sweeps");
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (apq == Scalar(0)) continue;
        // Rotation angle zeroing a(p, q) (Rutishauser's formulation).
        const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
        const Scalar t = (theta >= Scalar(0) ? Scalar(1) : Scalar(-1)) /
                         (abs(theta) + sqrt(theta * theta + Scalar(1)));
        const Scalar c = Scalar(1) / sqrt(t * t + Scalar(1));
        const Scalar s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k);
          const Scalar aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = Scalar(0);
      }
    }
  }
  Vector<Scalar> d = a.diagonal();
  std::sort(d.data(), d.data() + d.size());
  return d;
}

/**
 * Eigenvalues of g⁻¹T for symmetric T and SPD g, ascending.
 *
 * T is divided by its largest absolute entry before whitening with the
 * Cholesky factor of g (g = LLᵀ, M = L⁻¹TL⁻ᵀ), and the spectrum of M is
 * scaled back afterwards. The tensors built from u = e^{Nv} carry factors
 * like N²e^{2Nv}; the normalization keeps every intermediate in range.
 */
template <typename Scalar>
EigList<Scalar> generalized_eigs(const Matrix<Scalar>& t, const Matrix<Scalar>& g,
                                 const JacobiOptions& opt = {}) {
  const Eigen::Index n = g.rows();
  if (t.rows() != n || t.cols() != n || g.cols() != n)
    throw std::invalid_argument("generalized_eigs: shape mismatch");
  Eigen::LLT<Matrix<Scalar>> llt(g);
  if (llt.info() != Eigen::Success) throw MetricNotSPD("generalized_eigs: g is not SPD");
  const Scalar scale = t.cwiseAbs().maxCoeff();
  if (scale == Scalar(0)) return Vector<Scalar>::Zero(n);

  const Matrix<Scalar> sym = Scalar(0.5) * (t + t.transpose()) / scale;
  // M = L⁻¹ sym L⁻ᵀ
  const auto l = llt.matrixL();
  Matrix<Scalar> m = l.solve(sym);
  m = l.solve(m.transpose()).transpose();
  m = (Scalar(0.5) * (m + m.transpose())).eval();

  return jacobi_eigenvalues(std::move(m), opt) * scale;
}

}  // namespace confcurv

#endif  // CONFCURV_SPECTRUM_HPP
