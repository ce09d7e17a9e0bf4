#pragma once

#include "magspec/core.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <cstdint>
#include <memory>

namespace magspec {

using SparseMatrixXc = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

/// LDL^* factorization of H - sigma I. The number of negative pivots is the
/// number of eigenvalues of H below sigma (Sylvester's law of inertia).
class ShiftInvert {
 public:
  /// Nudges sigma by tiny relative amounts when the factorization breaks down.
  ShiftInvert(const SparseMatrixXc& H, double sigma);
  ~ShiftInvert();
  ShiftInvert(ShiftInvert&&) noexcept;
  ShiftInvert& operator=(ShiftInvert&&) noexcept;

  double shift() const { return sigma_; }
  Eigen::Index negative_count() const { return negative_; }
  /// (H - sigma)^{-1} rhs.
  MatrixXc solve(const MatrixXc& rhs) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double sigma_ = 0.0;
  Eigen::Index negative_ = 0;
};

/// Number of eigenvalues of H strictly below sigma.
Eigen::Index count_below(const SparseMatrixXc& H, double sigma);

/// Max absolute row sum, an upper bound for ||H||_2.
double norm_bound(const SparseMatrixXc& H);

struct SolverOptions {
  double rel_tol = 1e-8;              // residual bound relative to ||H||
  int block_size = 6;
  int max_restarts = 400;
  int max_runs = 16;                  // deflated restarts per slice
  Eigen::Index slice_max = 64;        // eigenvalues per shift
  Eigen::Index dense_threshold = 1200;
  std::uint64_t seed = 20240917;
};

/// Eigenpairs of H with eigenvalue in [lo, hi), unit Euclidean norm.
struct IntervalEigenpairs {
  Eigen::VectorXd values;     // ascending
  MatrixXc vectors;           // one column per value
  Eigen::VectorXd residuals;  // ||H u - lambda u||, ||u|| = 1
  Eigen::Index expected = 0;  // inertia count in the window
  bool complete = false;      // found == expected and all residuals within tolerance
  double norm = 0.0;          // norm bound used for the tolerance
  long solves = 0;            // applications of a shifted inverse
  int slices = 0;
};

/// Spectrum slicing: inertia counts split the window into slices of at most
/// slice_max eigenvalues; each slice runs block Krylov-Schur on the shifted
/// inverse with locking, restarting from fresh random blocks until the
/// inertia count is matched. Small matrices go to a dense solver.
IntervalEigenpairs eigenpairs_in(const SparseMatrixXc& H, Interval window, const SolverOptions& opts = {});

}  // namespace magspec
