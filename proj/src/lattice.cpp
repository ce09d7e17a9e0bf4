#include "magspec/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

namespace magspec {

GridSpec::GridSpec(Box box_, std::vector<Eigen::Index> n_, Eigen::Index cap)
    : box(std::move(box_)), n(std::move(n_)) {
  if (static_cast<int>(n.size()) != box.dim()) throw PreconditionError("grid: axis count does not match the box");
  double total = 1.0;
  for (auto c : n) {
    if (c < 8) throw PreconditionError("grid: need at least 8 interior nodes per axis");
    total *= static_cast<double>(c);
  }
  if (total > static_cast<double>(cap))
    throw PreconditionError("grid: " + std::to_string(static_cast<long long>(total)) + " nodes exceed the cap of " +
                            std::to_string(cap));
  h.resize(box.dim());
  for (int j = 0; j < box.dim(); ++j) h[j] = (box.hi[j] - box.lo[j]) / static_cast<double>(n[j] + 1);
}

GridSpec GridSpec::with_spacing(const Box& box, double step, Eigen::Index cap) {
  if (!(step > 0.0)) throw PreconditionError("grid: spacing must be positive");
  std::vector<Eigen::Index> n(box.dim());
  for (int j = 0; j < box.dim(); ++j)
    n[j] = std::max<Eigen::Index>(8, static_cast<Eigen::Index>(std::ceil((box.hi[j] - box.lo[j]) / step - 1e-12)) - 1);
  return GridSpec(box, std::move(n), cap);
}

Eigen::Index GridSpec::size() const {
  Eigen::Index s = 1;
  for (auto c : n) s *= c;
  return s;
}

Eigen::Index GridSpec::stride(int axis) const {
  Eigen::Index s = 1;
  for (int j = 0; j < axis; ++j) s *= n[j];
  return s;
}

Point GridSpec::node(Eigen::Index linear) const {
  Point x(dim());
  for (int j = 0; j < dim(); ++j) {
    x[j] = box.lo[j] + static_cast<double>(linear % n[j] + 1) * h[j];
    linear /= n[j];
  }
  return x;
}

NodeGrid GridSpec::nodes() const {
  NodeGrid g;
  g.origin = box.lo + h;
  g.spacing = h;
  g.counts = n;
  g.extent = box;
  return g;
}

cplx link_phase(const FieldSpec& fs, double hbar, const Point& x, int axis, double h) {
  Point mid = x;
  mid[axis] += 0.5 * h;
  return link_phase(fs.A(mid)[axis], h, hbar);
}

double LatticeOperator::norm_bound() const {
  double best = 0.0;
  for (Eigen::Index i = 0; i < matrix.outerSize(); ++i) {
    double s = 0.0;
    for (SparseMatrixXc::InnerIterator it(matrix, i); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

double LatticeOperator::validity_ceiling() const { return 0.5 * hbar / (grid.h.maxCoeff() * grid.h.maxCoeff()); }

LatticeOperator assemble(const FieldSpec& fs, const GridSpec& grid, double hbar) {
  if (!(hbar > 0.0)) throw PreconditionError("assemble: hbar must be positive");
  if (grid.dim() != fs.dim()) throw PreconditionError("assemble: grid and field dimensions differ");
  if (!fs.has_A()) throw PreconditionError("assemble: field has no vector potential");
  const int d = grid.dim();
  const Eigen::Index N = grid.size();
  if (N > std::numeric_limits<int>::max() / (2 * d + 1)) throw PreconditionError("assemble: grid too large");

  std::vector<Eigen::Index> strides(d);
  for (int j = 0; j < d; ++j) strides[j] = grid.stride(j);
  Eigen::VectorXd coupling(d);
  double diag0 = 0.0;
  for (int j = 0; j < d; ++j) {
    coupling[j] = hbar * hbar / (grid.h[j] * grid.h[j]);
    diag0 += 2.0 * coupling[j];
  }

  auto axis_index = [&](Eigen::Index i, int j) { return (i / strides[j]) % grid.n[j]; };

  // row offsets are fixed by the box geometry
  std::vector<int> outer(N + 1, 0);
  for (Eigen::Index i = 0; i < N; ++i) {
    int count = 1;
    for (int j = 0; j < d; ++j) {
      const Eigen::Index k = axis_index(i, j);
      count += (k > 0) + (k + 1 < grid.n[j]);
    }
    outer[i + 1] = outer[i] + count;
  }
  const Eigen::Index nnz = outer[N];
  std::vector<int> inner(nnz);
  std::vector<cplx> values(nnz);
  std::vector<unsigned char> bad(N, 0);

  // columns ascend: backward neighbours from the largest stride down, the
  // diagonal, then forward neighbours from the smallest stride up
  parallel_for(0, N, [&](std::ptrdiff_t i) {
    int p = outer[i];
    for (int j = d - 1; j >= 0; --j) {
      if (axis_index(i, j) == 0) continue;
      const Eigen::Index nb = i - strides[j];
      const cplx fwd = -coupling[j] * link_phase(fs, hbar, grid.node(nb), j, grid.h[j]);
      inner[p] = static_cast<int>(nb);
      values[p++] = std::conj(fwd);
    }
    const double v = fs.V(grid.node(i));
    inner[p] = static_cast<int>(i);
    values[p++] = cplx(diag0 + hbar * v, 0.0);
    if (!std::isfinite(v)) bad[i] = 1;
    const Point x = grid.node(i);
    for (int j = 0; j < d; ++j) {
      if (axis_index(i, j) + 1 >= grid.n[j]) continue;
      const cplx fwd = -coupling[j] * link_phase(fs, hbar, x, j, grid.h[j]);
      if (!std::isfinite(fwd.real()) || !std::isfinite(fwd.imag())) bad[i] = 1;
      inner[p] = static_cast<int>(i + strides[j]);
      values[p++] = fwd;
    }
  });
  for (Eigen::Index i = 0; i < N; ++i)
    if (bad[i]) throw Error("assemble: non-finite field value near node " + std::to_string(i));

  LatticeOperator op;
  op.grid = grid;
  op.hbar = hbar;
  op.matrix = Eigen::Map<const SparseMatrixXc>(N, N, nnz, outer.data(), inner.data(), values.data());
  return op;
}

LatticeOperator gauge_transform(const LatticeOperator& op, const std::function<double(const Point&)>& chi) {
  const Eigen::Index N = op.size();
  VectorXc phase(N);
  parallel_for(0, N, [&](std::ptrdiff_t i) {
    const double t = chi(op.grid.node(i)) / op.hbar;
    phase[i] = cplx(std::cos(t), std::sin(t));
  });
  LatticeOperator out = op;
  SparseMatrixXc& H = out.matrix;
  // upper triangle first, then each lower entry copies the conjugate of its
  // mirror, so the result stays Hermitian bit for bit whatever the rounding
  parallel_for(0, N, [&](std::ptrdiff_t i) {
    for (SparseMatrixXc::InnerIterator it(H, i); it; ++it)
      if (it.col() > i) it.valueRef() = (phase[i] * it.value()) * std::conj(phase[it.col()]);
  });
  parallel_for(0, N, [&](std::ptrdiff_t i) {
    for (SparseMatrixXc::InnerIterator it(H, i); it; ++it) {
      const Eigen::Index j = it.col();
      if (j >= i) continue;
      const int* begin = H.innerIndexPtr() + H.outerIndexPtr()[j];
      const int* end = H.innerIndexPtr() + H.outerIndexPtr()[j + 1];
      const int* pos = std::lower_bound(begin, end, static_cast<int>(i));
      it.valueRef() = std::conj(H.valuePtr()[pos - H.innerIndexPtr()]);
    }
  });
  return out;
}

Eigen::Index hermiticity_violations(const SparseMatrixXc& H) {
  if (H.rows() != H.cols()) return H.nonZeros();
  Eigen::Index bad = 0;
  for (Eigen::Index i = 0; i < H.outerSize(); ++i) {
    for (SparseMatrixXc::InnerIterator it(H, i); it; ++it) {
      const Eigen::Index j = it.col();
      const int* begin = H.innerIndexPtr() + H.outerIndexPtr()[j];
      const int* end = H.innerIndexPtr() + H.outerIndexPtr()[j + 1];
      const int* pos = std::lower_bound(begin, end, static_cast<int>(i));
      if (pos == end || *pos != i) {
        ++bad;
        continue;
      }
      const cplx mirror = H.valuePtr()[pos - H.innerIndexPtr()];
      if (mirror != std::conj(it.value())) ++bad;
    }
  }
  return bad;
}

void write_matrix_coo(const LatticeOperator& op, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path);
  out << "# rows " << op.size() << " nnz " << op.matrix.nonZeros() << " hbar " << std::setprecision(17) << op.hbar
      << '\n';
  for (Eigen::Index i = 0; i < op.matrix.outerSize(); ++i)
    for (SparseMatrixXc::InnerIterator it(op.matrix, i); it; ++it)
      out << i << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag() << '\n';
}

Eigen::VectorXd sample_nodes(const GridSpec& grid, const std::function<double(const Point&)>& f) {
  Eigen::VectorXd v(grid.size());
  parallel_for(0, grid.size(), [&](std::ptrdiff_t i) { v[i] = f(grid.node(i)); });
  return v;
}

}  // namespace magspec
