#include "magspec/fit.hpp"

#include "magspec/core.hpp"

#include <cmath>
#include <numbers>

namespace magspec {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw PreconditionError("fit_line: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw PreconditionError("fit_line: need at least two samples");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw PreconditionError("fit_line: abscissae are all equal");
  LineFit f;
  f.samples = static_cast<int>(n);
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
    f.max_residual = std::max(f.max_residual, std::abs(r));
  }
  f.rms_residual = std::sqrt(ss / static_cast<double>(n));
  return f;
}

PowerFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw PreconditionError("fit_power_law: values must be positive");
    lx[i] = std::log10(x[i]);
    ly[i] = std::log10(y[i]);
  }
  const LineFit lf = fit_line(lx, ly);
  return {lf.slope, lf.intercept, lf.rms_residual, lf.max_residual};
}

ExpFit fit_exponential(std::span<const double> s, std::span<const double> y) {
  std::vector<double> ly(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] > 0.0)) throw PreconditionError("fit_exponential: values must be positive");
    ly[i] = std::log(y[i]);
  }
  const LineFit lf = fit_line(s, ly);
  return {-lf.slope, lf.intercept, lf.rms_residual / std::numbers::ln10,
          lf.max_residual / std::numbers::ln10};
}

}  // namespace magspec
