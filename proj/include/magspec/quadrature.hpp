#pragma once

#include <functional>
#include <vector>

namespace magspec {

/// Gauss-Legendre rule on [0, 1]; exact for polynomials of degree < 2*order.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(int order);

  template <typename F>
  auto integrate(F&& f) const {
    auto sum = weights[0] * f(nodes[0]);
    for (std::size_t i = 1; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

/// Cached rule of the given order (thread-safe).
const GaussLegendre& gauss_legendre(int order);

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 40);

}  // namespace magspec
