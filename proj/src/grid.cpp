#include "magspec/grid.hpp"

#include <algorithm>
#include <cmath>

namespace magspec {

Eigen::Index NodeGrid::size() const {
  Eigen::Index n = 1;
  for (auto c : counts) n *= c;
  return n;
}

Eigen::Index NodeGrid::stride(int axis) const {
  Eigen::Index s = 1;
  for (int i = 0; i < axis; ++i) s *= counts[i];
  return s;
}

std::vector<Eigen::Index> NodeGrid::multi_index(Eigen::Index linear) const {
  std::vector<Eigen::Index> idx(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    idx[i] = linear % counts[i];
    linear /= counts[i];
  }
  return idx;
}

Eigen::Index NodeGrid::linear_index(const std::vector<Eigen::Index>& idx) const {
  Eigen::Index lin = 0;
  for (int i = dim() - 1; i >= 0; --i) lin = lin * counts[i] + idx[i];
  return lin;
}

Point NodeGrid::node(Eigen::Index linear) const {
  Point x(dim());
  for (int i = 0; i < dim(); ++i) {
    x[i] = origin[i] + static_cast<double>(linear % counts[i]) * spacing[i];
    linear /= counts[i];
  }
  return x;
}

Eigen::Index NodeGrid::nearest(const Point& x) const {
  std::vector<Eigen::Index> idx(counts.size());
  for (int i = 0; i < dim(); ++i) {
    const double t = std::round((x[i] - origin[i]) / spacing[i]);
    idx[i] = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(t), 0, counts[i] - 1);
  }
  return linear_index(idx);
}

NodeGrid NodeGrid::covering(const Box& box, double step) {
  if (!(step > 0.0)) throw PreconditionError("grid: step must be positive");
  NodeGrid g;
  const int d = box.dim();
  g.origin = box.lo;
  g.spacing.resize(d);
  g.counts.resize(d);
  for (int i = 0; i < d; ++i) {
    const double len = box.hi[i] - box.lo[i];
    const auto cells = static_cast<Eigen::Index>(std::ceil(len / step - 1e-12));
    g.counts[i] = std::max<Eigen::Index>(cells, 1) + 1;
    g.spacing[i] = len / static_cast<double>(g.counts[i] - 1);
  }
  g.extent = box;
  return g;
}

}  // namespace magspec
