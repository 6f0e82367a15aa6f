#ifndef CONFCURV_TENSOR_HPP
#define CONFCURV_TENSOR_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <vector>

#include <Eigen/Core>

namespace confcurv {

/// Dense rank-3 array over a chart of dimension n, row-major (a, b, c).
template <typename Scalar>
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(Eigen::Index n) : n_(n), data_(static_cast<std::size_t>(n * n * n), Scalar(0)) {}

  Eigen::Index dim() const { return n_; }

  Scalar& operator()(Eigen::Index a, Eigen::Index b, Eigen::Index c) {
    return data_[offset(a, b, c)];
  }
  Scalar operator()(Eigen::Index a, Eigen::Index b, Eigen::Index c) const {
    return data_[offset(a, b, c)];
  }

  Scalar max_abs() const {
    Scalar m(0);
    for (const Scalar& v : data_) m = std::max(m, Scalar(std::abs(v)));
    return m;
  }

 private:
  std::size_t offset(Eigen::Index a, Eigen::Index b, Eigen::Index c) const {
    assert(a < n_ && b < n_ && c < n_);
    return static_cast<std::size_t>((a * n_ + b) * n_ + c);
  }

  Eigen::Index n_ = 0;
  std::vector<Scalar> data_;
};

/// Dense rank-4 array, row-major (a, b, c, d).
template <typename Scalar>
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(Eigen::Index n)
      : n_(n), data_(static_cast<std::size_t>(n * n * n * n), Scalar(0)) {}

  Eigen::Index dim() const { return n_; }

  Scalar& operator()(Eigen::Index a, Eigen::Index b, Eigen::Index c, Eigen::Index d) {
    return data_[offset(a, b, c, d)];
  }
  Scalar operator()(Eigen::Index a, Eigen::Index b, Eigen::Index c, Eigen::Index d) const {
    return data_[offset(a, b, c, d)];
  }

  Scalar max_abs() const {
    Scalar m(0);
    for (const Scalar& v : data_) m = std::max(m, Scalar(std::abs(v)));
    return m;
  }

 private:
  std::size_t offset(Eigen::Index a, Eigen::Index b, Eigen::Index c, Eigen::Index d) const {
    assert(a < n_ && b < n_ && c < n_ && d < n_);
    return static_cast<std::size_t>(((a * n_ + b) * n_ + c) * n_ + d);
  }

  Eigen::Index n_ = 0;
  std::vector<Scalar> data_;
};

}  // namespace confcurv

#endif  // CONFCURV_TENSOR_HPP
