#ifndef CONFCURV_ERRORS_HPP
#define CONFCURV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace confcurv {

/// A metric value matrix failed Cholesky or has a non-positive eigenvalue.
class MetricNotSPD : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two tangent vectors do not span a 2-plane.
class DegeneratePlane : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was called in a dimension it does not support.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative method stopped before meeting its tolerance.
class NotConverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace confcurv

#endif  // CONFCURV_ERRORS_HPP
