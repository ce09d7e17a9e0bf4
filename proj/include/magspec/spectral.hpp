#pragma once

#include "magspec/eigensolver.hpp"
#include "magspec/landau.hpp"
#include "magspec/lattice.hpp"
#include "magspec/test_function.hpp"

#include <string>
#include <vector>

namespace magspec {

/// Eigenpairs of a lattice operator in a window of H/hbar.
struct EigenWindowResult {
  Interval window;           // H/hbar units
  double hbar = 0.0;
  GridSpec grid;
  Eigen::VectorXd lambda;    // eigenvalues of H/hbar, ascending
  MatrixXc u;                // sum_x |u(x)|^2 prod h_j = 1 per column
  Eigen::VectorXd residuals; // ||H u - hbar lambda u|| / ||u||
  Eigen::Index expected = 0; // inertia count in the window
  bool complete_flag = false;
  double tol = 0.0;          // absolute residual bound used
  std::vector<std::string> warnings;

  Eigen::Index count() const { return lambda.size(); }
};

/// All eigenvalues of op/hbar in `window` with residual certificates.
/// Windows above the stencil validity ceiling are solved but warned about.
EigenWindowResult eigs_window(const LatticeOperator& op, Interval window, const SolverOptions& opts = {});

/// Kernel diagonal of phi(H/hbar) at a node: sum_i phi(lambda_i) |u_i(x0)|^2.
/// Requires supp(phi) inside the window and a complete solve.
double ldos(const EigenWindowResult& ew, const TestFunction& phi, Eigen::Index node);
double ldos(const EigenWindowResult& ew, const TestFunction& phi, const Point& x0);

/// ldos at every node, in linear index order.
Eigen::VectorXd ldos_field(const EigenWindowResult& ew, const TestFunction& phi);

/// sum_i phi(lambda_i), the trace of phi(H/hbar) over the window.
double trace_phi(const EigenWindowResult& ew, const TestFunction& phi);

/// sum_i phi(lambda_i) u_i(x0) conj(u_i(x1)).
cplx kernel_offdiag(const EigenWindowResult& ew, const TestFunction& phi, Eigen::Index x0, Eigen::Index x1);
cplx kernel_offdiag(const EigenWindowResult& ew, const TestFunction& phi, const Point& x0, const Point& x1);

/// sum over lambda_i in `interval` (H/hbar units) of |u_i(x0)|^2. Refuses
/// endpoints lying inside `sigma` and intervals leaving the window.
double projector_diag(const EigenWindowResult& ew, Interval interval, Eigen::Index node, const SigmaApprox& sigma);
double projector_diag(const EigenWindowResult& ew, Interval interval, const Point& x0, const SigmaApprox& sigma);

/// CSV: index,lambda_over_hbar,residual.
void write_eigenvalues_csv(const EigenWindowResult& ew, const std::string& path);

/// Little-endian binary: "MAGSPEV1", uint32 d, uint64 n[d], uint64 count,
/// then for each node (axis 0 fastest) and each vector: re, im as double.
void write_eigenvectors_binary(const EigenWindowResult& ew, const std::string& path);

struct EigenvectorDump {
  std::vector<std::uint64_t> dims;
  MatrixXc u;  // nodes x count
};
EigenvectorDump read_eigenvectors_binary(const std::string& path);

}  // namespace magspec
