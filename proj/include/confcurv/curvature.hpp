#ifndef CONFCURV_CURVATURE_HPP
#define CONFCURV_CURVATURE_HPP

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "confcurv/errors.hpp"
#include "confcurv/jet.hpp"
#include "confcurv/tensor.hpp"

// Conventions, in the coordinate frame e_i = d/dx^i:
//
//   Gamma(k, i, j)  = Γ^k_ij = ½ g^kl (∂_i g_jl + ∂_j g_il − ∂_l g_ij)
//   R(X,Y)Z         = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z
//   riem(i, j, k, l) = g(R(e_i, e_j) e_k, e_l)
//   ric(j, k)       = g^il riem(i, j, k, l)
//   K(v, w)         = riem(v, w, w, v) / (|v|²|w|² − <v,w>²)
//
// With these signs the unit round sphere has K = 1, Ric = (n−1)g and
// R = n(n−1).

namespace confcurv {

/// Metric value and its first and second coordinate derivatives at a point.
template <typename Scalar>
struct MetricJets {
  Matrix<Scalar> value;  ///< g_ij
  Tensor3<Scalar> d;     ///< d(k, i, j) = ∂_k g_ij
  Tensor4<Scalar> dd;    ///< dd(l, k, i, j) = ∂_l ∂_k g_ij

  Eigen::Index dim() const { return value.rows(); }
};

/// Assembles MetricJets from per-entry jets; `entry(i, j)` is called for i >= j.
template <typename Scalar, typename EntryFn>
MetricJets<Scalar> metric_jets_from_entries(Eigen::Index n, EntryFn&& entry) {
  MetricJets<Scalar> m{Matrix<Scalar>(n, n), Tensor3<Scalar>(n), Tensor4<Scalar>(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const Jet2<Scalar> e = entry(i, j);
      m.value(i, j) = m.value(j, i) = e.value();
      for (Eigen::Index k = 0; k < n; ++k) {
        m.d(k, i, j) = m.d(k, j, i) = e.grad(k);
        for (Eigen::Index l = 0; l < n; ++l) m.dd(l, k, i, j) = m.dd(l, k, j, i) = e.hess(l, k);
      }
    }
  }
  return m;
}

/// Inverse of an SPD matrix; throws MetricNotSPD when Cholesky fails.
template <typename Scalar>
Matrix<Scalar> spd_inverse(const Matrix<Scalar>& g) {
  Eigen::LLT<Matrix<Scalar>> llt(g);
  if (llt.info() != Eigen::Success)
    throw MetricNotSPD("metric is not positive definite (Cholesky failed)");
  return llt.solve(Matrix<Scalar>::Identity(g.rows(), g.cols()));
}

/// Christoffel symbols Γ^k_ij as gamma(k, i, j).
template <typename Scalar>
Tensor3<Scalar> christoffel(const Matrix<Scalar>& g, const Tensor3<Scalar>& dg) {
  const Eigen::Index n = g.rows();
  const Matrix<Scalar> ginv = spd_inverse(g);
  Tensor3<Scalar> lowered(n);  // Γ_{l,ij}
  for (Eigen::Index l = 0; l < n; ++l)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j <= i; ++j)
        lowered(l, i, j) = lowered(l, j, i) =
            Scalar(0.5) * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
  Tensor3<Scalar> gamma(n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j <= i; ++j) {
        Scalar s(0);
        for (Eigen::Index l = 0; l < n; ++l) s += ginv(k, l) * lowered(l, i, j);
        gamma(k, i, j) = gamma(k, j, i) = s;
      }
  return gamma;
}

/// Curvature data of a metric at one point.
template <typename Scalar>
struct CurvaturePoint {
  Tensor3<Scalar> gamma;  ///< Γ^k_ij
  Tensor4<Scalar> riem;   ///< R_ijkl, lowered
  Matrix<Scalar> ric;
  Scalar scal{0};
};

/// Christoffels, lowered Riemann, Ricci and scalar curvature from metric jets.
template <typename Scalar>
CurvaturePoint<Scalar> riemann(const Matrix<Scalar>& g, const Tensor3<Scalar>& dg,
                               const Tensor4<Scalar>& ddg) {
  const Eigen::Index n = g.rows();
  const Matrix<Scalar> ginv = spd_inverse(g);

  // Lowered Christoffels and their derivatives: S(m, j, k) = Γ_{m,jk}.
  Tensor3<Scalar> s(n);
  Tensor4<Scalar> ds(n);  // ds(i, m, j, k) = ∂_i Γ_{m,jk}
  for (Eigen::Index m = 0; m < n; ++m)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) {
        s(m, j, k) = Scalar(0.5) * (dg(j, k, m) + dg(k, j, m) - dg(m, j, k));
        for (Eigen::Index i = 0; i < n; ++i)
          ds(i, m, j, k) =
              Scalar(0.5) * (ddg(i, j, k, m) + ddg(i, k, j, m) - ddg(i, m, j, k));
      }

  CurvaturePoint<Scalar> c{Tensor3<Scalar>(n), Tensor4<Scalar>(n), Matrix<Scalar>::Zero(n, n),
                           Scalar(0)};
  for (Eigen::Index l = 0; l < n; ++l)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) {
        Scalar v(0);
        for (Eigen::Index m = 0; m < n; ++m) v += ginv(l, m) * s(m, j, k);
        c.gamma(l, j, k) = v;
      }

  // ∂_i g^{lm} = −g^{la} ∂_i g_ab g^{bm}
  Tensor3<Scalar> dginv(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Matrix<Scalar> dgi(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) dgi(a, b) = dg(i, a, b);
    const Matrix<Scalar> d = -ginv * dgi * ginv;
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) dginv(i, a, b) = d(a, b);
  }

  // dgamma(i, l, j, k) = ∂_i Γ^l_jk
  Tensor4<Scalar> dgamma(n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index l = 0; l < n; ++l)
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k) {
          Scalar v(0);
          for (Eigen::Index m = 0; m < n; ++m)
            v += dginv(i, l, m) * s(m, j, k) + ginv(l, m) * ds(i, m, j, k);
          dgamma(i, l, j, k) = v;
        }

  // R(e_i, e_j) e_k = up(i, j, k, p) e_p
  Tensor4<Scalar> up(n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index p = 0; p < n; ++p) {
          Scalar v = dgamma(i, p, j, k) - dgamma(j, p, i, k);
          for (Eigen::Index m = 0; m < n; ++m)
            v += c.gamma(m, j, k) * c.gamma(p, i, m) - c.gamma(m, i, k) * c.gamma(p, j, m);
          up(i, j, k, p) = v;
        }

  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l) {
          Scalar v(0);
          for (Eigen::Index p = 0; p < n; ++p) v += g(l, p) * up(i, j, k, p);
          c.riem(i, j, k, l) = v;
        }

  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) {
      Scalar v(0);
      for (Eigen::Index i = 0; i < n; ++i) v += up(i, j, k, i);
      c.ric(j, k) = v;
    }
  c.ric = (Scalar(0.5) * (c.ric + c.ric.transpose())).eval();
  c.scal = (ginv.cwiseProduct(c.ric)).sum();
  return c;
}

template <typename Scalar>
CurvaturePoint<Scalar> riemann(const MetricJets<Scalar>& m) {
  return riemann(m.value, m.d, m.dd);
}

/// Lowered Riemann tensor contracted as R(a, b, c, d) with four vectors.
template <typename Scalar>
Scalar riemann_apply(const Tensor4<Scalar>& riem, const Vector<Scalar>& a, const Vector<Scalar>& b,
                     const Vector<Scalar>& c, const Vector<Scalar>& d) {
  const Eigen::Index n = riem.dim();
  Scalar s(0);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l) s += riem(i, j, k, l) * a(i) * b(j) * c(k) * d(l);
  return s;
}

/// Sectional curvature of span{v1, v2}. Throws DegeneratePlane when the Gram
/// determinant is at most 1e-12.
template <typename Scalar>
Scalar sectional(const CurvaturePoint<Scalar>& curv, const Matrix<Scalar>& g,
                 const Vector<Scalar>& v1, const Vector<Scalar>& v2) {
  const Scalar g11 = v1.dot(g * v1);
  const Scalar g22 = v2.dot(g * v2);
  const Scalar g12 = v1.dot(g * v2);
  const Scalar gram = g11 * g22 - g12 * g12;
  if (!(gram > Scalar(1e-12)))
    throw DegeneratePlane("tangent plane is degenerate (Gram determinant " +
                          std::to_string(static_cast<double>(gram)) + ")");
  return riemann_apply(curv.riem, v1, v2, v2, v1) / gram;
}

/// G = Ric − (R/2) g.
template <typename Scalar>
Matrix<Scalar> einstein(const Matrix<Scalar>& ric, Scalar scal, const Matrix<Scalar>& g) {
  return ric - Scalar(0.5) * scal * g;
}

/**
 * Modified Schouten tensor scaled by alpha:
 *   alpha / (n − 2) · (Ric − tau / (2(n − 1)) · R · g).
 * tau = 1 is the Schouten tensor; tau = n − 1 is G / (n − 2).
 */
template <typename Scalar>
Matrix<Scalar> modified_schouten(const Matrix<Scalar>& ric, Scalar scal, const Matrix<Scalar>& g,
                                 Scalar tau, int alpha = 1) {
  const Eigen::Index n = g.rows();
  if (n < 3) throw DimensionError("modified Schouten tensor needs dimension >= 3");
  if (alpha != 1 && alpha != -1) throw std::invalid_argument("alpha must be +1 or -1");
  const Scalar nn = static_cast<Scalar>(n);
  Matrix<Scalar> a = (ric - tau / (Scalar(2) * (nn - Scalar(1))) * scal * g) / (nn - Scalar(2));
  if (alpha == -1) a = -a;
  return a;
}

/// Covariant derivatives of a scalar u with respect to g at a point.
template <typename Scalar>
struct CovariantJet {
  Scalar value{0};
  Vector<Scalar> du;       ///< ∂_i u
  Matrix<Scalar> hess;     ///< (∇²u)_ij
  Scalar laplacian{0};     ///< Δu = g^ij (∇²u)_ij
  Scalar grad_norm2{0};    ///< |∇u|²_g = g^ij ∂_i u ∂_j u
  Matrix<Scalar> du_du;    ///< du ⊗ du
};

template <typename Scalar>
CovariantJet<Scalar> covariant_hessian(const Jet2<Scalar>& u, const Tensor3<Scalar>& gamma,
                                       const Matrix<Scalar>& g) {
  const Eigen::Index n = u.dim();
  const Matrix<Scalar> ginv = spd_inverse(g);
  CovariantJet<Scalar> c;
  c.value = u.value();
  c.du = u.grad();
  c.hess = u.hessian();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      Scalar s(0);
      for (Eigen::Index k = 0; k < n; ++k) s += gamma(k, i, j) * c.du(k);
      c.hess(i, j) -= s;
    }
  c.hess = (Scalar(0.5) * (c.hess + c.hess.transpose())).eval();
  c.laplacian = ginv.cwiseProduct(c.hess).sum();
  c.grad_norm2 = c.du.dot(ginv * c.du);
  c.du_du = c.du * c.du.transpose();
  return c;
}

/**
 * Completes span{v1, v2} to a g-orthonormal basis by Gram-Schmidt. Columns 0
 * and 1 span the plane; for n = 3, column 2 is its g-unit normal.
 */
template <typename Scalar>
Matrix<Scalar> orthonormal_completion(const Matrix<Scalar>& g, const Vector<Scalar>& v1,
                                      const Vector<Scalar>& v2) {
  const Eigen::Index n = g.rows();
  Matrix<Scalar> basis(n, n);
  Eigen::Index filled = 0;
  auto add = [&](Vector<Scalar> v) {
    for (Eigen::Index c = 0; c < filled; ++c) v -= basis.col(c).dot(g * v) * basis.col(c);
    // second pass for orthogonality to round-off
    for (Eigen::Index c = 0; c < filled; ++c) v -= basis.col(c).dot(g * v) * basis.col(c);
    const Scalar norm2 = v.dot(g * v);
    return std::make_pair(v, norm2);
  };
  for (const Vector<Scalar>* v : {&v1, &v2}) {
    auto [w, norm2] = add(*v);
    using std::sqrt;
    if (!(norm2 > Scalar(1e-24)))
      throw DegeneratePlane("tangent vectors are linearly dependent");
    basis.col(filled++) = w / sqrt(norm2);
  }
  while (filled < n) {
    Vector<Scalar> best;
    Scalar best_norm(-1);
    for (Eigen::Index e = 0; e < n; ++e) {
      auto [w, norm2] = add(Vector<Scalar>::Unit(n, e));
      if (norm2 > best_norm) {
        best_norm = norm2;
        best = w;
      }
    }
    using std::sqrt;
    basis.col(filled++) = best / sqrt(best_norm);
  }
  return basis;
}

}  // namespace confcurv

#endif  // CONFCURV_CURVATURE_HPP
