#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace magspec {

using cplx = std::complex<double>;
using Point = Eigen::VectorXd;
using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A tolerance band straddles a true singular value of B(x0).
class AmbiguousRankError : public Error {
 public:
  using Error::Error;
};

/// A precondition of an operation is violated by its arguments.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The eigensolver ran out of iterations.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Axis-aligned box in R^d.
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  Box() = default;
  Box(Eigen::VectorXd lo_, Eigen::VectorXd hi_);

  /// Square/cube [-half, half]^d.
  static Box centered(int dim, double half_width);

  int dim() const { return static_cast<int>(lo.size()); }
  Point center() const { return 0.5 * (lo + hi); }
  Eigen::VectorXd extent() const { return hi - lo; }
  double diameter() const { return extent().norm(); }
  bool contains(const Point& x, double slack = 0.0) const;
  /// Distance from an interior point to the nearest face.
  double distance_to_boundary(const Point& x) const;
  /// Same box grown by `margin` on every face.
  Box inflated(double margin) const;
  Box scaled(double factor) const;
  bool contains(const Box& other, double slack = 0.0) const;

  friend bool operator==(const Box& a, const Box& b) {
    return a.lo.size() == b.lo.size() && a.hi.size() == b.hi.size() && a.lo == b.lo && a.hi == b.hi;
  }
};

/// Number of worker threads used by the parallel loops (default 1).
void set_num_threads(int n);
int num_threads();

/// Runs fn(i) for i in [begin, end). Each index is visited by exactly one
/// worker; callers write only to slot i so results do not depend on the
/// thread count.
void parallel_for(std::ptrdiff_t begin, std::ptrdiff_t end,
                  const std::function<void(std::ptrdiff_t)>& fn);

}  // namespace magspec
