#pragma once

#include <span>
#include <vector>

namespace magspec {

/// Ordinary least-squares line y = intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;  // in the units of y
  double max_residual = 0.0;
  int samples = 0;
};

/// Requires at least two distinct x values.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Power law y ~ C x^alpha fitted in log10-log10; residuals are in decades.
/// All x and y must be positive.
struct PowerFit {
  double exponent = 0.0;
  double log10_prefactor = 0.0;
  double rms_residual_log10 = 0.0;
  double max_residual_log10 = 0.0;
};

PowerFit fit_power_law(std::span<const double> x, std::span<const double> y);

/// Exponential law y ~ C exp(-rate * s) fitted as ln y against s.
/// Residuals are reported in decades (log10 units).
struct ExpFit {
  double rate = 0.0;
  double log_prefactor = 0.0;  // ln C of the least-squares line
  double rms_residual_log10 = 0.0;
  double max_residual_log10 = 0.0;
};

ExpFit fit_exponential(std::span<const double> s, std::span<const double> y);

}  // namespace magspec
