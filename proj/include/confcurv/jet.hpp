#ifndef CONFCURV_JET_HPP
#define CONFCURV_JET_HPP

#include <cmath>
#include <cstddef>

#include <Eigen/Core>

namespace confcurv {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXd = Vector<double>;
using MatrixXd = Matrix<double>;

/// Index of (i, j), i >= j, in a packed lower triangle.
constexpr std::size_t packed_index(std::size_t i, std::size_t j) {
  return i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i;
}

constexpr std::size_t packed_size(std::size_t n) { return n * (n + 1) / 2; }

/**
 * Second-order jet of a scalar function of n variables: value, gradient and
 * Hessian at a point. The Hessian is stored as a single packed lower
 * triangle, so hess(i, j) and hess(j, i) alias the same storage.
 *
 * Arithmetic on jets is forward-mode differentiation truncated at order two:
 * composing jets with the free functions below applies the chain rule to
 * the value, all n first partials and all n(n+1)/2 second partials.
 */
template <typename Scalar>
class Jet2 {
 public:
  Jet2() = default;

  /// Constant jet in n variables.
  Jet2(Scalar value, Eigen::Index n)
      : val_(value),
        grad_(Vector<Scalar>::Zero(n)),
        hess_(Vector<Scalar>::Zero(static_cast<Eigen::Index>(packed_size(n)))) {}

  /// Jet of the coordinate function x_k evaluated at `value`.
  static Jet2 variable(Scalar value, Eigen::Index k, Eigen::Index n) {
    Jet2 j(value, n);
    j.grad_(k) = Scalar(1);
    return j;
  }

  Eigen::Index dim() const { return grad_.size(); }

  Scalar value() const { return val_; }
  Scalar& value() { return val_; }

  const Vector<Scalar>& grad() const { return grad_; }
  Vector<Scalar>& grad() { return grad_; }
  Scalar grad(Eigen::Index i) const { return grad_(i); }

  Scalar hess(Eigen::Index i, Eigen::Index j) const { return hess_(index(i, j)); }
  Scalar& hess(Eigen::Index i, Eigen::Index j) { return hess_(index(i, j)); }

  /// Packed lower triangle, row-major: (0,0), (1,0), (1,1), (2,0), ...
  const Vector<Scalar>& packed_hess() const { return hess_; }
  Vector<Scalar>& packed_hess() { return hess_; }

  Matrix<Scalar> hessian() const {
    const Eigen::Index n = dim();
    Matrix<Scalar> h(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j <= i; ++j) h(i, j) = h(j, i) = hess(i, j);
    return h;
  }

  Jet2& operator+=(const Jet2& o) {
    val_ += o.val_;
    grad_ += o.grad_;
    hess_ += o.hess_;
    return *this;
  }
  Jet2& operator-=(const Jet2& o) {
    val_ -= o.val_;
    grad_ -= o.grad_;
    hess_ -= o.hess_;
    return *this;
  }
  Jet2& operator*=(Scalar s) {
    val_ *= s;
    grad_ *= s;
    hess_ *= s;
    return *this;
  }

 private:
  static Eigen::Index index(Eigen::Index i, Eigen::Index j) {
    return static_cast<Eigen::Index>(packed_index(static_cast<std::size_t>(i),
                                                  static_cast<std::size_t>(j)));
  }

  Scalar val_{0};
  Vector<Scalar> grad_;
  Vector<Scalar> hess_;
};

namespace detail {

// Adds c * (a b^T + b a^T) / 2 symmetrized into a packed triangle; with a == b
// this is c * a a^T.
template <typename Scalar>
void add_sym_outer(Vector<Scalar>& packed, const Vector<Scalar>& a, const Vector<Scalar>& b,
                   Scalar c) {
  const Eigen::Index n = a.size();
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j, ++k)
      packed(k) += c * Scalar(0.5) * (a(i) * b(j) + b(i) * a(j));
}

}  // namespace detail

/// Applies a scalar function with known f, f', f'' at a.value() to a jet.
template <typename Scalar>
Jet2<Scalar> chain(const Jet2<Scalar>& a, Scalar f, Scalar df, Scalar d2f) {
  Jet2<Scalar> r;
  r.value() = f;
  r.grad() = df * a.grad();
  r.packed_hess() = df * a.packed_hess();
  detail::add_sym_outer(r.packed_hess(), a.grad(), a.grad(), d2f);
  return r;
}

template <typename Scalar>
Jet2<Scalar> operator+(Jet2<Scalar> a, const Jet2<Scalar>& b) {
  return a += b;
}
template <typename Scalar>
Jet2<Scalar> operator-(Jet2<Scalar> a, const Jet2<Scalar>& b) {
  return a -= b;
}
template <typename Scalar>
Jet2<Scalar> operator-(Jet2<Scalar> a) {
  return a *= Scalar(-1);
}
template <typename Scalar>
Jet2<Scalar> operator*(Jet2<Scalar> a, Scalar s) {
  return a *= s;
}
template <typename Scalar>
Jet2<Scalar> operator*(Scalar s, Jet2<Scalar> a) {
  return a *= s;
}
template <typename Scalar>
Jet2<Scalar> operator+(Jet2<Scalar> a, Scalar s) {
  a.value() += s;
  return a;
}
template <typename Scalar>
Jet2<Scalar> operator+(Scalar s, Jet2<Scalar> a) {
  a.value() += s;
  return a;
}
template <typename Scalar>
Jet2<Scalar> operator-(Jet2<Scalar> a, Scalar s) {
  a.value() -= s;
  return a;
}
template <typename Scalar>
Jet2<Scalar> operator-(Scalar s, const Jet2<Scalar>& a) {
  return -a + s;
}

template <typename Scalar>
Jet2<Scalar> operator*(const Jet2<Scalar>& a, const Jet2<Scalar>& b) {
  Jet2<Scalar> r;
  r.value() = a.value() * b.value();
  r.grad() = b.value() * a.grad() + a.value() * b.grad();
  r.packed_hess() = b.value() * a.packed_hess() + a.value() * b.packed_hess();
  detail::add_sym_outer(r.packed_hess(), a.grad(), b.grad(), Scalar(2));
  return r;
}

/// 1/a; the caller guarantees a.value() != 0.
template <typename Scalar>
Jet2<Scalar> reciprocal(const Jet2<Scalar>& a) {
  const Scalar x = a.value();
  const Scalar r = Scalar(1) / x;
  return chain(a, r, -r * r, Scalar(2) * r * r * r);
}

template <typename Scalar>
Jet2<Scalar> operator/(const Jet2<Scalar>& a, const Jet2<Scalar>& b) {
  return a * reciprocal(b);
}

template <typename Scalar>
Jet2<Scalar> exp(const Jet2<Scalar>& a) {
  using std::exp;
  const Scalar e = exp(a.value());
  return chain(a, e, e, e);
}

template <typename Scalar>
Jet2<Scalar> log(const Jet2<Scalar>& a) {
  using std::log;
  const Scalar x = a.value();
  return chain(a, log(x), Scalar(1) / x, Scalar(-1) / (x * x));
}

template <typename Scalar>
Jet2<Scalar> sin(const Jet2<Scalar>& a) {
  using std::cos;
  using std::sin;
  const Scalar s = sin(a.value());
  return chain(a, s, cos(a.value()), -s);
}

template <typename Scalar>
Jet2<Scalar> cos(const Jet2<Scalar>& a) {
  using std::cos;
  using std::sin;
  const Scalar c = cos(a.value());
  return chain(a, c, -sin(a.value()), -c);
}

template <typename Scalar>
Jet2<Scalar> sqrt(const Jet2<Scalar>& a) {
  using std::sqrt;
  const Scalar s = sqrt(a.value());
  const Scalar d = Scalar(0.5) / s;
  return chain(a, s, d, -d / (Scalar(2) * a.value()));
}

/// a^k for integer k by repeated squaring; negative k needs a.value() != 0.
template <typename Scalar>
Jet2<Scalar> pow_int(const Jet2<Scalar>& a, long k) {
  const bool invert = k < 0;
  unsigned long e = invert ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
  Jet2<Scalar> result(Scalar(1), a.dim());
  Jet2<Scalar> base = a;
  while (e != 0) {
    if (e & 1UL) result = result * base;
    e >>= 1;
    if (e != 0) base = base * base;
  }
  return invert ? reciprocal(result) : result;
}

}  // namespace confcurv

#endif  // CONFCURV_JET_HPP
