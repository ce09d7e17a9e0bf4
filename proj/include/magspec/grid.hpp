#pragma once

#include "magspec/core.hpp"

#include <vector>

namespace magspec {

/// Uniform tensor grid: node(i) = origin + i .* spacing, axis 0 fastest in
/// the linear index. `extent` is the outer boundary the grid lives in.
struct NodeGrid {
  Eigen::VectorXd origin;
  Eigen::VectorXd spacing;
  std::vector<Eigen::Index> counts;
  Box extent;

  int dim() const { return static_cast<int>(counts.size()); }
  Eigen::Index size() const;
  Point node(Eigen::Index linear) const;
  std::vector<Eigen::Index> multi_index(Eigen::Index linear) const;
  Eigen::Index linear_index(const std::vector<Eigen::Index>& idx) const;
  Eigen::Index stride(int axis) const;
  /// Node closest to x (clamped into the grid).
  Eigen::Index nearest(const Point& x) const;
  double cell_volume() const { return spacing.prod(); }

  /// Nodes covering `box` including its faces, spacing <= step on each axis.
  static NodeGrid covering(const Box& box, double step);
};

}  // namespace magspec
