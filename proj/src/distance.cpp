#include "magspec/distance.hpp"

#include <cmath>
#include <limits>

namespace magspec {

void squared_distance_1d(const double* f, double* d, Eigen::Index n, double s, std::vector<Eigen::Index>& v,
                         std::vector<double>& z) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double s2 = s * s;
  v.resize(n);
  z.resize(n + 1);
  // skip leading empty samples so parabola intersections stay finite
  Eigen::Index first = 0;
  while (first < n && f[first] == inf) ++first;
  if (first == n) {
    for (Eigen::Index i = 0; i < n; ++i) d[i] = inf;
    return;
  }
  Eigen::Index k = 0;
  v[0] = first;
  z[0] = -inf;
  z[1] = inf;
  for (Eigen::Index q = first + 1; q < n; ++q) {
    if (f[q] == inf) continue;
    const auto meet = [&](Eigen::Index p) {
      return ((f[q] + s2 * double(q) * double(q)) - (f[p] + s2 * double(p) * double(p))) / (2.0 * s2 * double(q - p));
    };
    double x = meet(v[k]);
    while (x <= z[k]) x = meet(v[--k]);  // z[0] = -inf stops the walk
    ++k;
    v[k] = q;
    z[k] = x;
    z[k + 1] = inf;
  }
  k = 0;
  for (Eigen::Index q = 0; q < n; ++q) {
    while (z[k + 1] < double(q)) ++k;
    const double dq = double(q - v[k]);
    d[q] = s2 * dq * dq + f[v[k]];
  }
}

DistanceField distance_transform(const NodeGrid& grid, const std::vector<std::uint8_t>& mask) {
  const Eigen::Index N = grid.size();
  if (static_cast<Eigen::Index>(mask.size()) != N) throw PreconditionError("distance_transform: mask size mismatch");
  bool any = false;
  for (auto m : mask) any = any || m;
  if (!any) throw PreconditionError("distance_transform: empty mask");

  const int d = grid.dim();
  const double s0 = grid.spacing[0];
  bool isotropic = true;
  for (int j = 1; j < d; ++j) isotropic = isotropic && grid.spacing[j] == s0;

  std::vector<double> g(N);
  for (Eigen::Index i = 0; i < N; ++i) g[i] = mask[i] ? 0.0 : std::numeric_limits<double>::infinity();

  for (int axis = 0; axis < d; ++axis) {
    const Eigen::Index n = grid.counts[axis];
    const Eigen::Index stride = grid.stride(axis);
    const Eigen::Index lines = N / n;
    const double s = isotropic ? 1.0 : grid.spacing[axis];
    parallel_for(0, lines, [&](std::ptrdiff_t line) {
      // line index -> offset of its first node
      const Eigen::Index lo = line % stride;
      const Eigen::Index hi = line / stride;
      const Eigen::Index base = lo + hi * stride * n;
      std::vector<double> f(n), out(n), z;
      std::vector<Eigen::Index> v;
      for (Eigen::Index q = 0; q < n; ++q) f[q] = g[base + q * stride];
      squared_distance_1d(f.data(), out.data(), n, s, v, z);
      for (Eigen::Index q = 0; q < n; ++q) g[base + q * stride] = out[q];
    });
  }

  DistanceField df;
  df.grid = grid;
  df.values.resize(N);
  for (Eigen::Index i = 0; i < N; ++i) df.values[i] = isotropic ? std::sqrt(g[i]) * s0 : std::sqrt(g[i]);
  return df;
}

DistanceField distance_transform(const KSetMask& mask) { return distance_transform(mask.grid, mask.mask); }

}  // namespace magspec
