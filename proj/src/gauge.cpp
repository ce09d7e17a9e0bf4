#include "magspec/gauge.hpp"

#include "magspec/fit.hpp"
#include "magspec/quadrature.hpp"

#include <cmath>
#include <limits>

namespace magspec {

double transverse_phase(const FieldSpec& fs, const Point& x0, const Eigen::VectorXd& Z, int quad_order) {
  if (!fs.has_A()) throw PreconditionError("transverse_phase: field has no vector potential");
  const auto& gl = gauss_legendre(quad_order);
  double sum = 0.0;
  for (std::size_t q = 0; q < gl.nodes.size(); ++q)
    sum += gl.weights[q] * fs.A(x0 + gl.nodes[q] * Z).dot(Z);
  return -sum;
}

Eigen::VectorXd transverse_potential(const std::function<Eigen::MatrixXd(const Point&)>& B,
                                     const Point& x0, const Eigen::VectorXd& Z, int quad_order) {
  const auto& gl = gauss_legendre(quad_order);
  const Eigen::Index d = Z.size();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
    const double t = gl.nodes[q];
    M.noalias() += (gl.weights[q] * t) * B(x0 + t * Z);
  }
  // A_j = sum_k M_kj Z_k
  return M.transpose() * Z;
}

Eigen::VectorXd transverse_potential(const FieldSpec& fs, const Point& x0, const Eigen::VectorXd& Z,
                                     int quad_order) {
  return transverse_potential([&fs](const Point& x) { return fs.B(x); }, x0, Z, quad_order);
}

Eigen::VectorXd model_potential(const FieldSpec& fs, const Point& x0, const Eigen::VectorXd& Z) {
  return 0.5 * fs.B(x0).transpose() * Z;
}

GaugeData make_gauge(const FieldSpec& fs, const Point& x0, int quad_order) {
  GaugeData g;
  g.x0 = x0;
  g.quad_order = quad_order;
  const FieldSpec* f = &fs;
  if (fs.has_A())
    g.phi = [f, x0, quad_order](const Eigen::VectorXd& Z) { return transverse_phase(*f, x0, Z, quad_order); };
  g.a_trans = [f, x0, quad_order](const Eigen::VectorXd& Z) {
    return transverse_potential(*f, x0, Z, quad_order);
  };
  return g;
}

TaylorOrderResult verify_taylor_order(const FieldSpec& fs, const Point& x0,
                                      const std::vector<Eigen::VectorXd>& directions,
                                      const std::vector<double>& radii, int quad_order) {
  if (radii.size() < 4) throw PreconditionError("verify_taylor_order: need at least 4 radii");
  if (directions.empty()) throw PreconditionError("verify_taylor_order: no directions");
  const double ratio = radii[1] / radii[0];
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] < radii[i - 1]) || radii[i] <= 0.0)
      throw PreconditionError("verify_taylor_order: radii must be positive and decreasing");
    if (std::abs(radii[i] / radii[i - 1] - ratio) > 1e-9 * ratio)
      throw PreconditionError("verify_taylor_order: radii must form a geometric sequence");
  }

  constexpr double kExact = 1e-13;
  TaylorOrderResult res;
  res.radii = radii;
  std::vector<double> lx, ly;
  for (double r : radii) {
    double worst = 0.0;
    for (const auto& dir : directions) {
      const Eigen::VectorXd Z = r * dir.normalized();
      const double resid = (transverse_potential(fs, x0, Z, quad_order) - model_potential(fs, x0, Z)).norm();
      worst = std::max(worst, resid);
    }
    res.residuals.push_back(worst);
    if (worst > kExact) {
      lx.push_back(r);
      ly.push_back(worst);
    }
  }
  if (lx.size() < 2) {
    res.exact = lx.empty();
    res.slope = std::numeric_limits<double>::quiet_NaN();
    return res;
  }
  res.slope = fit_power_law(lx, ly).exponent;
  return res;
}

}  // namespace magspec
