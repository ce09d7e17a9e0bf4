#include "magspec/spectral.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>

namespace magspec {

namespace {

void require_usable(const EigenWindowResult& ew, Interval support) {
  if (!ew.complete_flag) throw PreconditionError("spectral: eigen window is not certified complete");
  if (support.lo < ew.window.lo || support.hi > ew.window.hi)
    throw PreconditionError("spectral: test function support exceeds the solved window");
}

Eigen::Index checked_node(const EigenWindowResult& ew, Eigen::Index node) {
  if (node < 0 || node >= ew.u.rows()) throw PreconditionError("spectral: node index out of range");
  return node;
}

Eigen::VectorXd weights(const EigenWindowResult& ew, const TestFunction& phi) {
  Eigen::VectorXd w(ew.count());
  for (Eigen::Index i = 0; i < ew.count(); ++i) w[i] = phi(ew.lambda[i]);
  return w;
}

template <typename T>
void put(std::ostream& out, T v) {
  static_assert(std::endian::native == std::endian::little, "binary dump assumes a little-endian host");
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error("eigenvector dump: truncated file");
  return v;
}

constexpr char kMagic[8] = {'M', 'A', 'G', 'S', 'P', 'E', 'V', '1'};

}  // namespace

EigenWindowResult eigs_window(const LatticeOperator& op, Interval window, const SolverOptions& opts) {
  if (!(window.lo < window.hi)) throw PreconditionError("eigs_window: need E_lo < E_hi");
  EigenWindowResult ew;
  ew.window = window;
  ew.hbar = op.hbar;
  ew.grid = op.grid;
  if (window.hi > op.validity_ceiling())
    ew.warnings.push_back("window top " + std::to_string(window.hi) + " exceeds the stencil validity ceiling " +
                          std::to_string(op.validity_ceiling()));

  const IntervalEigenpairs raw = eigenpairs_in(op.matrix, {op.hbar * window.lo, op.hbar * window.hi}, opts);
  ew.lambda = raw.values / op.hbar;
  ew.residuals = raw.residuals;
  ew.expected = raw.expected;
  ew.complete_flag = raw.complete;
  ew.tol = opts.rel_tol * raw.norm;
  ew.u = raw.vectors / std::sqrt(op.grid.cell_volume());
  if (!raw.complete)
    ew.warnings.push_back("found " + std::to_string(raw.values.size()) + " of " + std::to_string(raw.expected) +
                          " eigenvalues (or a residual above tolerance)");
  return ew;
}

double ldos(const EigenWindowResult& ew, const TestFunction& phi, Eigen::Index node) {
  require_usable(ew, phi.support());
  checked_node(ew, node);
  double s = 0.0;
  for (Eigen::Index i = 0; i < ew.count(); ++i) s += phi(ew.lambda[i]) * std::norm(ew.u(node, i));
  return s;
}

double ldos(const EigenWindowResult& ew, const TestFunction& phi, const Point& x0) {
  return ldos(ew, phi, ew.grid.nodes().nearest(x0));
}

Eigen::VectorXd ldos_field(const EigenWindowResult& ew, const TestFunction& phi) {
  require_usable(ew, phi.support());
  const Eigen::VectorXd w = weights(ew, phi);
  return ew.u.cwiseAbs2() * w;
}

double trace_phi(const EigenWindowResult& ew, const TestFunction& phi) { return weights(ew, phi).sum(); }

cplx kernel_offdiag(const EigenWindowResult& ew, const TestFunction& phi, Eigen::Index x0, Eigen::Index x1) {
  require_usable(ew, phi.support());
  checked_node(ew, x0);
  checked_node(ew, x1);
  cplx s = 0.0;
  for (Eigen::Index i = 0; i < ew.count(); ++i) s += phi(ew.lambda[i]) * ew.u(x0, i) * std::conj(ew.u(x1, i));
  return s;
}

cplx kernel_offdiag(const EigenWindowResult& ew, const TestFunction& phi, const Point& x0, const Point& x1) {
  const NodeGrid g = ew.grid.nodes();
  return kernel_offdiag(ew, phi, g.nearest(x0), g.nearest(x1));
}

double projector_diag(const EigenWindowResult& ew, Interval interval, Eigen::Index node, const SigmaApprox& sigma) {
  if (!(interval.lo < interval.hi)) throw PreconditionError("projector_diag: need a < b");
  if (sigma_distance(interval.lo, sigma) == 0.0 || sigma_distance(interval.hi, sigma) == 0.0)
    throw PreconditionError("projector_diag: interval endpoint lies inside the sampled spectral set");
  require_usable(ew, interval);
  checked_node(ew, node);
  double s = 0.0;
  for (Eigen::Index i = 0; i < ew.count(); ++i)
    if (interval.contains(ew.lambda[i])) s += std::norm(ew.u(node, i));
  return s;
}

double projector_diag(const EigenWindowResult& ew, Interval interval, const Point& x0, const SigmaApprox& sigma) {
  return projector_diag(ew, interval, ew.grid.nodes().nearest(x0), sigma);
}

void write_eigenvalues_csv(const EigenWindowResult& ew, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path);
  out << "index,lambda_over_hbar,residual\n" << std::setprecision(17);
  for (Eigen::Index i = 0; i < ew.count(); ++i) out << i << ',' << ew.lambda[i] << ',' << ew.residuals[i] << '\n';
}

void write_eigenvectors_binary(const EigenWindowResult& ew, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path);
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ew.grid.dim()));
  for (auto c : ew.grid.n) put<std::uint64_t>(out, static_cast<std::uint64_t>(c));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(ew.count()));
  for (Eigen::Index x = 0; x < ew.u.rows(); ++x)
    for (Eigen::Index i = 0; i < ew.u.cols(); ++i) {
      put<double>(out, ew.u(x, i).real());
      put<double>(out, ew.u(x, i).imag());
    }
}

EigenvectorDump read_eigenvectors_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) throw Error("eigenvector dump: bad magic");
  EigenvectorDump dump;
  const auto d = get<std::uint32_t>(in);
  std::uint64_t nodes = 1;
  for (std::uint32_t j = 0; j < d; ++j) {
    dump.dims.push_back(get<std::uint64_t>(in));
    nodes *= dump.dims.back();
  }
  const auto count = get<std::uint64_t>(in);
  dump.u.resize(static_cast<Eigen::Index>(nodes), static_cast<Eigen::Index>(count));
  for (std::uint64_t x = 0; x < nodes; ++x)
    for (std::uint64_t i = 0; i < count; ++i) {
      const double re = get<double>(in);
      const double im = get<double>(in);
      dump.u(x, i) = cplx(re, im);
    }
  return dump;
}

}  // namespace magspec
