#pragma once

#include "magspec/core.hpp"

#include <string>

namespace magspec {

/// Smooth, compactly supported function of the rescaled energy H/hbar.
///
/// bump:                exp(1 - 1/(1 - s^2)) with s = (x - center)/width,
///                      support [center - width, center + width], peak 1.
/// gaussian-truncated:  exp(-(x - center)^2 / (2 width^2)) times a smooth
///                      cutoff equal to 1 on the middle half of the support.
/// indicator-mollified: 1 on [center - width, center + width], smooth
///                      transition to 0 at the support ends.
class TestFunction {
 public:
  enum class Kind { Bump, GaussianTruncated, IndicatorMollified };

  static TestFunction bump(double center, double width);
  static TestFunction gaussian_truncated(double center, double width, Interval support);
  static TestFunction indicator_mollified(double center, double width, Interval support);
  /// Kind names as written in configs: bump, gaussian-truncated, indicator-mollified.
  static TestFunction make(const std::string& kind, double center, double width, Interval support);

  double operator()(double x) const;

  Kind kind() const { return kind_; }
  std::string kind_name() const;
  double center() const { return center_; }
  double width() const { return width_; }
  const Interval& support() const { return support_; }
  /// Returns a copy multiplied by `factor` (used for linearity checks).
  TestFunction scaled(double factor) const;
  double scale() const { return scale_; }

 private:
  TestFunction(Kind kind, double center, double width, Interval support);

  Kind kind_;
  double center_;
  double width_;
  Interval support_;
  double scale_ = 1.0;
};

/// Smooth step: 0 for t <= 0, 1 for t >= 1, C-infinity in between.
double smooth_step(double t);

}  // namespace magspec
