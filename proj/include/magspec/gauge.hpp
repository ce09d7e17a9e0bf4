#pragma once

#include "magspec/field.hpp"

#include <optional>
#include <vector>

namespace magspec {

inline constexpr int kDefaultGaugeOrder = 16;

/// Transverse (Fock-Schwinger) gauge based at x0. Both functions take the
/// displacement Z = x - x0.
struct GaugeData {
  Point x0;
  int quad_order = kDefaultGaugeOrder;
  std::function<double(const Eigen::VectorXd&)> phi;              // Phi^(x0)(x0 + Z)
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> a_trans;  // A^(x0)(x0 + Z)
};

/// -sum_j int_0^1 A_j(x0 + t Z) Z_j dt. Requires fs.has_A().
double transverse_phase(const FieldSpec& fs, const Point& x0, const Eigen::VectorXd& Z,
                        int quad_order = kDefaultGaugeOrder);

/// A^(x0)_j(x0 + Z) = sum_k (int_0^1 B_kj(x0 + t Z) t dt) Z_k.
Eigen::VectorXd transverse_potential(const FieldSpec& fs, const Point& x0, const Eigen::VectorXd& Z,
                                     int quad_order = kDefaultGaugeOrder);

/// Same integral with B given as a bare matrix function (used while a
/// FieldSpec is still being built).
Eigen::VectorXd transverse_potential(const std::function<Eigen::MatrixXd(const Point&)>& B,
                                     const Point& x0, const Eigen::VectorXd& Z,
                                     int quad_order = kDefaultGaugeOrder);

/// Linear model potential A_{x0}(Z) = B(x0)^T Z / 2.
Eigen::VectorXd model_potential(const FieldSpec& fs, const Point& x0, const Eigen::VectorXd& Z);

GaugeData make_gauge(const FieldSpec& fs, const Point& x0, int quad_order = kDefaultGaugeOrder);

struct TaylorOrderResult {
  bool exact = false;    // every residual below 1e-13
  double slope = 0.0;    // fitted d log r / d log |Z|; NaN when exact
  std::vector<double> radii;
  std::vector<double> residuals;  // max over directions, per radius
};

/// Fits log |A^(x0)(x0+Z) - A_{x0}(Z)| against log |Z| along the given
/// directions. Radii must be a decreasing geometric sequence (>= 4 values).
TaylorOrderResult verify_taylor_order(const FieldSpec& fs, const Point& x0,
                                      const std::vector<Eigen::VectorXd>& directions,
                                      const std::vector<double>& radii,
                                      int quad_order = kDefaultGaugeOrder);

}  // namespace magspec
