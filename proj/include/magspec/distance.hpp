#pragma once

#include "magspec/grid.hpp"
#include "magspec/landau.hpp"

#include <cstdint>
#include <vector>

namespace magspec {

/// Euclidean distance from every node to the nearest mask node (0 on the mask).
struct DistanceField {
  NodeGrid grid;
  Eigen::VectorXd values;
};

/// Exact Euclidean distance transform: one lower-envelope-of-parabolas pass
/// per axis. Isotropic grids are processed in integer units, so the result
/// equals sqrt(min integer squared offset) * spacing bit for bit.
DistanceField distance_transform(const NodeGrid& grid, const std::vector<std::uint8_t>& mask);
DistanceField distance_transform(const KSetMask& mask);

/// Squared 1D transform of f along a line: d(p) = min_q (s (p - q))^2 + f(q).
void squared_distance_1d(const double* f, double* d, Eigen::Index n, double s, std::vector<Eigen::Index>& v,
                         std::vector<double>& z);

}  // namespace magspec
