#pragma once

#include "magspec/eigensolver.hpp"
#include "magspec/field.hpp"
#include "magspec/grid.hpp"

#include <Eigen/SparseCore>

#include <functional>
#include <string>
#include <vector>

namespace magspec {

inline constexpr Eigen::Index kDefaultNodeCap = 2'000'000;

/// Interior nodes of a Dirichlet box: node i on axis j sits at
/// lo_j + (i + 1) h_j with h_j = (hi_j - lo_j) / (n_j + 1).
struct GridSpec {
  Box box;
  std::vector<Eigen::Index> n;
  Eigen::VectorXd h;

  GridSpec() = default;
  /// Throws when some n_j < 8 or the node count exceeds `cap`.
  GridSpec(Box box, std::vector<Eigen::Index> n, Eigen::Index cap = kDefaultNodeCap);
  /// Smallest interior count per axis with spacing <= step.
  static GridSpec with_spacing(const Box& box, double step, Eigen::Index cap = kDefaultNodeCap);

  int dim() const { return static_cast<int>(n.size()); }
  Eigen::Index size() const;
  Point node(Eigen::Index linear) const;
  Eigen::Index stride(int axis) const;
  double cell_volume() const { return h.prod(); }
  /// The same nodes as a NodeGrid whose extent is the box.
  NodeGrid nodes() const;
};

/// exp(-i theta / hbar) with theta = A_j(midpoint) h_j, for the edge from
/// `x` to x + h_j e_j. Computed as cos - i sin so |U| == 1.
cplx link_phase(const FieldSpec& fs, double hbar, const Point& x, int axis, double h);

/// Same with the midpoint value of A_j already known.
inline cplx link_phase(double a_mid, double h, double hbar) {
  const double t = a_mid * h / hbar;
  return {std::cos(t), -std::sin(t)};
}

/// Finite-difference magnetic Schrodinger operator on a Dirichlet box.
struct LatticeOperator {
  GridSpec grid;
  double hbar = 0.0;
  SparseMatrixXc matrix;
  std::string stencil = "link-phase-2nd-order";
  std::string boundary = "dirichlet";

  Eigen::Index size() const { return matrix.rows(); }
  /// max row sum of |H_ij|, an upper bound for ||H||_2.
  double norm_bound() const;
  /// Largest E with E * hbar <= 0.5 hbar^2 / h^2 (stencil validity ceiling, H/hbar units).
  double validity_ceiling() const;
};

/// Row for node x: hbar^2 sum_j 2/h_j^2 + hbar V(x) on the diagonal and
/// -(hbar^2/h_j^2) U on each neighbour; couplings leaving the box are dropped.
/// The entry (i+e_j, i) is the conjugate of the same edge computation as
/// (i, i+e_j), so the matrix is Hermitian bit for bit.
LatticeOperator assemble(const FieldSpec& fs, const GridSpec& grid, double hbar);

/// Conjugation by diag(exp(i chi(x)/hbar)).
LatticeOperator gauge_transform(const LatticeOperator& op, const std::function<double(const Point&)>& chi);

/// Number of stored entries whose mirror is missing or not the exact conjugate.
Eigen::Index hermiticity_violations(const SparseMatrixXc& H);

/// Coordinate text dump: header line, then "row col re im" per entry (0-based).
void write_matrix_coo(const LatticeOperator& op, const std::string& path);

/// Samples f at every interior node, in linear index order.
Eigen::VectorXd sample_nodes(const GridSpec& grid, const std::function<double(const Point&)>& f);

}  // namespace magspec
