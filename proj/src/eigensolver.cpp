#include "magspec/eigensolver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

namespace magspec {

struct ShiftInvert::Impl {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<cplx>, Eigen::Lower> ldlt;
};

ShiftInvert::ShiftInvert(const SparseMatrixXc& H, double sigma) : impl_(std::make_unique<Impl>()) {
  const Eigen::Index N = H.rows();
  Eigen::SparseMatrix<cplx> A = H;
  Eigen::SparseMatrix<cplx> I(N, N);
  I.setIdentity();
  const double scale = std::max(1.0, norm_bound(H));
  impl_->ldlt.analyzePattern(A);
  for (int attempt = 0; attempt < 8; ++attempt) {
    const double s = sigma + (attempt == 0 ? 0.0 : std::ldexp(1e-13 * scale, attempt));
    Eigen::SparseMatrix<cplx> S = A - cplx(s) * I;
    impl_->ldlt.factorize(S);
    if (impl_->ldlt.info() != Eigen::Success) continue;
    const auto D = impl_->ldlt.vectorD();
    bool finite = true;
    double dmin = std::numeric_limits<double>::infinity();
    Eigen::Index neg = 0;
    for (Eigen::Index i = 0; i < D.size(); ++i) {
      const double v = D[i].real();
      if (!std::isfinite(v)) finite = false;
      dmin = std::min(dmin, std::abs(v));
      if (v < 0.0) ++neg;
    }
    if (!finite || dmin < 1e-14 * scale) continue;
    sigma_ = s;
    negative_ = neg;
    return;
  }
  throw ConvergenceError("shift-invert: factorization of H - sigma I failed near sigma = " + std::to_string(sigma));
}

ShiftInvert::~ShiftInvert() = default;
ShiftInvert::ShiftInvert(ShiftInvert&&) noexcept = default;
ShiftInvert& ShiftInvert::operator=(ShiftInvert&&) noexcept = default;

MatrixXc ShiftInvert::solve(const MatrixXc& rhs) const { return impl_->ldlt.solve(rhs); }

Eigen::Index count_below(const SparseMatrixXc& H, double sigma) { return ShiftInvert(H, sigma).negative_count(); }

double norm_bound(const SparseMatrixXc& H) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < H.outerSize(); ++i) {
    double s = 0.0;
    for (SparseMatrixXc::InnerIterator it(H, i); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

namespace {

struct RitzPair {
  double theta;
  VectorXc vec;
};

class KrylovSchur {
 public:
  KrylovSchur(const ShiftInvert& op, const MatrixXc& locked, const SolverOptions& opts, std::mt19937_64& rng)
      : op_(op), locked_(locked), opts_(opts), rng_(rng) {}

  // Largest-|theta| eigenpairs of the deflated shifted inverse.
  std::vector<RitzPair> run(Eigen::Index want, long& solves) {
    const Eigen::Index N = locked_.rows();
    const Eigen::Index b = opts_.block_size;
    const Eigen::Index room = N - locked_.cols() - b;
    Eigen::Index kmax = std::max(2 * want, want + 4 * b) + b;
    kmax = ((kmax + b - 1) / b) * b;
    kmax = std::min(kmax, (room / b) * b);
    if (kmax < want + b) throw ConvergenceError("krylov-schur: problem too small for the requested count");
    const Eigen::Index keep = std::min(kmax - b, want + std::max(b, (kmax - want) / 2));
    const double tol = 0.05 * opts_.rel_tol;

    V_ = MatrixXc::Zero(N, kmax + b);
    T_ = MatrixXc::Zero(kmax + b, kmax);
    V_.leftCols(b) = orthonormal_random(b, 0);
    Eigen::Index k = 0;

    for (int restart = 0; restart <= opts_.max_restarts; ++restart) {
      while (k + b <= kmax) {
        MatrixXc W = op_.solve(V_.middleCols(k, b));
        solves += b;
        const Eigen::Index m = k + b;
        MatrixXc C = MatrixXc::Zero(m, b);
        for (int pass = 0; pass < 2; ++pass) {
          deflate(W);
          const MatrixXc c = V_.leftCols(m).adjoint() * W;
          W.noalias() -= V_.leftCols(m) * c;
          C += c;
        }
        MatrixXc R = MatrixXc::Zero(b, b);
        block_qr(W, R, m);
        V_.middleCols(m, b) = W;
        T_.block(0, k, m, b) = C;
        T_.block(m, k, b, b) = R;
        k += b;
      }

      const MatrixXc Tk = T_.topLeftCorner(k, k);
      const MatrixXc Th = 0.5 * (Tk + Tk.adjoint());
      Eigen::SelfAdjointEigenSolver<MatrixXc> es(Th);
      std::vector<Eigen::Index> order(k);
      std::iota(order.begin(), order.end(), 0);
      const auto& th = es.eigenvalues();
      std::stable_sort(order.begin(), order.end(),
                       [&](Eigen::Index x, Eigen::Index y) { return std::abs(th[x]) > std::abs(th[y]); });
      const MatrixXc tail = T_.block(k, 0, b, k);

      bool done = true;
      for (Eigen::Index i = 0; i < want; ++i) {
        const Eigen::Index c = order[i];
        const double res = (tail * es.eigenvectors().col(c)).norm();
        if (res > tol * std::abs(th[c])) {
          done = false;
          break;
        }
      }
      if (done || restart == opts_.max_restarts) {
        std::vector<RitzPair> out;
        for (Eigen::Index i = 0; i < want; ++i) {
          const Eigen::Index c = order[i];
          const double res = (tail * es.eigenvectors().col(c)).norm();
          if (res <= tol * std::abs(th[c]))
            out.push_back({th[c], V_.leftCols(k) * es.eigenvectors().col(c)});
        }
        return out;
      }

      // thick restart on the `keep` dominant Ritz vectors
      MatrixXc Y(k, keep);
      for (Eigen::Index i = 0; i < keep; ++i) Y.col(i) = es.eigenvectors().col(order[i]);
      const MatrixXc next = V_.middleCols(k, b);
      const MatrixXc Vk = V_.leftCols(k) * Y;
      const MatrixXc B = tail * Y;
      V_.leftCols(keep) = Vk;
      V_.middleCols(keep, b) = next;
      T_.setZero();
      for (Eigen::Index i = 0; i < keep; ++i) T_(i, i) = th[order[i]];
      T_.block(keep, 0, b, keep) = B;
      k = keep;
    }
    return {};
  }

 private:
  void deflate(MatrixXc& W) const {
    if (locked_.cols() == 0) return;
    W.noalias() -= locked_ * (locked_.adjoint() * W);
  }

  // Orthonormalizes W's columns in place; R holds the in-block coefficients.
  // A column that collapses is replaced by a random direction orthogonal to
  // everything so far, with zero coefficient.
  void block_qr(MatrixXc& W, MatrixXc& R, Eigen::Index m) {
    const Eigen::Index b = W.cols();
    for (Eigen::Index c = 0; c < b; ++c) {
      const double before = W.col(c).norm();
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index q = 0; q < c; ++q) {
          const cplx r = W.col(q).dot(W.col(c));
          W.col(c) -= r * W.col(q);
          R(q, c) += r;
        }
      }
      double nrm = W.col(c).norm();
      if (nrm <= 1e-12 * std::max(before, 1e-300) || nrm == 0.0) {
        for (Eigen::Index q = 0; q < c; ++q) R(q, c) = 0.0;
        VectorXc x = random_vector(W.rows());
        for (int pass = 0; pass < 2; ++pass) {
          MatrixXc xm = x;
          deflate(xm);
          x = xm.col(0);
          x -= V_.leftCols(m) * (V_.leftCols(m).adjoint() * x);
          for (Eigen::Index q = 0; q < c; ++q) x -= W.col(q).dot(x) * W.col(q);
        }
        W.col(c) = x.normalized();
        R(c, c) = 0.0;
        continue;
      }
      W.col(c) /= nrm;
      R(c, c) = nrm;
    }
  }

  VectorXc random_vector(Eigen::Index n) {
    std::normal_distribution<double> g(0.0, 1.0);
    VectorXc x(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = g(rng_);
      const double im = g(rng_);
      x[i] = cplx(re, im);
    }
    return x;
  }

  MatrixXc orthonormal_random(Eigen::Index b, Eigen::Index m) {
    MatrixXc W(locked_.rows(), b);
    for (Eigen::Index c = 0; c < b; ++c) W.col(c) = random_vector(W.rows());
    for (int pass = 0; pass < 2; ++pass) deflate(W);
    MatrixXc R = MatrixXc::Zero(b, b);
    block_qr(W, R, m);
    return W;
  }

  const ShiftInvert& op_;
  const MatrixXc& locked_;
  const SolverOptions& opts_;
  std::mt19937_64& rng_;
  MatrixXc V_;
  MatrixXc T_;
};

// Rayleigh-Ritz of H on span(U); returns values ascending, vectors, residuals.
void rayleigh_ritz(const SparseMatrixXc& H, MatrixXc& U, Eigen::VectorXd& values, Eigen::VectorXd& residuals) {
  if (U.cols() == 0) {
    values.resize(0);
    residuals.resize(0);
    return;
  }
  Eigen::HouseholderQR<MatrixXc> qr(U);
  U = qr.householderQ() * MatrixXc::Identity(U.rows(), U.cols());
  const MatrixXc HU = H * U;
  MatrixXc G = U.adjoint() * HU;
  G = 0.5 * (G + G.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(G);
  U = U * es.eigenvectors();
  const MatrixXc HV = HU * es.eigenvectors();
  values = es.eigenvalues();
  residuals.resize(U.cols());
  for (Eigen::Index i = 0; i < U.cols(); ++i) residuals[i] = (HV.col(i) - values[i] * U.col(i)).norm();
}

struct Slice {
  double lo, hi;
  Eigen::Index count;
};

}  // namespace

IntervalEigenpairs eigenpairs_in(const SparseMatrixXc& H, Interval window, const SolverOptions& opts) {
  if (!(window.lo < window.hi)) throw PreconditionError("eigenpairs_in: empty window");
  if (opts.block_size < 1) throw PreconditionError("eigenpairs_in: block size must be positive");
  const Eigen::Index N = H.rows();
  IntervalEigenpairs out;
  out.norm = norm_bound(H);
  const double abs_tol = opts.rel_tol * std::max(out.norm, 1e-300);

  if (N <= opts.dense_threshold) {
    const MatrixXc D = MatrixXc(H);
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(D);
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < N; ++i)
      if (es.eigenvalues()[i] >= window.lo && es.eigenvalues()[i] < window.hi) idx.push_back(i);
    out.expected = static_cast<Eigen::Index>(idx.size());
    out.values.resize(out.expected);
    out.vectors.resize(N, out.expected);
    out.residuals.resize(out.expected);
    for (std::size_t c = 0; c < idx.size(); ++c) {
      out.values[c] = es.eigenvalues()[idx[c]];
      out.vectors.col(c) = es.eigenvectors().col(idx[c]);
      out.residuals[c] = (H * out.vectors.col(c) - out.values[c] * out.vectors.col(c)).norm();
    }
    out.complete = (out.residuals.size() == 0 || out.residuals.maxCoeff() <= abs_tol);
    out.slices = 1;
    return out;
  }

  // inertia at the window ends, then split crowded slices
  std::map<double, Eigen::Index> counts;
  auto count_at = [&](double s) {
    auto it = counts.find(s);
    if (it != counts.end()) return it->second;
    const Eigen::Index c = count_below(H, s);
    counts[s] = c;
    return c;
  };
  std::vector<Slice> todo{{window.lo, window.hi, count_at(window.hi) - count_at(window.lo)}};
  out.expected = todo.front().count;
  std::vector<Slice> slices;
  while (!todo.empty()) {
    Slice s = todo.back();
    todo.pop_back();
    if (s.count == 0) continue;
    const double width = s.hi - s.lo;
    if (s.count > opts.slice_max && width > 1e-9 * std::max(1.0, std::abs(s.hi))) {
      const double mid = s.lo + 0.4381966011250105 * width;
      const Eigen::Index below = count_at(mid) - count_at(s.lo);
      todo.push_back({mid, s.hi, s.count - below});
      todo.push_back({s.lo, mid, below});
      continue;
    }
    slices.push_back(s);
  }
  std::sort(slices.begin(), slices.end(), [](const Slice& a, const Slice& b) { return a.lo < b.lo; });
  out.slices = static_cast<int>(slices.size());

  std::vector<double> all_values;
  std::vector<VectorXc> all_vectors;
  std::vector<double> all_res;
  for (std::size_t si = 0; si < slices.size(); ++si) {
    const Slice& s = slices[si];
    std::mt19937_64 rng(opts.seed + 0x9E3779B97F4A7C15ULL * (si + 1));
    const ShiftInvert op(H, 0.5 * (s.lo + s.hi));
    MatrixXc locked(N, 0);
    Eigen::Index found = 0;
    for (int runs = 0; runs < opts.max_runs && found < s.count; ++runs) {
      KrylovSchur ks(op, locked, opts, rng);
      std::vector<RitzPair> pairs;
      try {
        pairs = ks.run(s.count - found, out.solves);
      } catch (const ConvergenceError&) {
        break;
      }
      std::vector<VectorXc> accepted;
      for (auto& p : pairs) {
        const double lambda = op.shift() + 1.0 / p.theta;
        if (lambda >= s.lo && lambda < s.hi) accepted.push_back(p.vec.normalized());
      }
      if (accepted.empty()) continue;
      MatrixXc grown(N, locked.cols() + static_cast<Eigen::Index>(accepted.size()));
      grown.leftCols(locked.cols()) = locked;
      for (std::size_t c = 0; c < accepted.size(); ++c) grown.col(locked.cols() + c) = accepted[c];
      // keep the locked basis orthonormal
      Eigen::HouseholderQR<MatrixXc> qr(grown);
      locked = qr.householderQ() * MatrixXc::Identity(N, grown.cols());
      found = locked.cols();
    }
    Eigen::VectorXd vals, res;
    rayleigh_ritz(H, locked, vals, res);
    for (Eigen::Index c = 0; c < vals.size(); ++c) {
      if (vals[c] < s.lo || vals[c] >= s.hi) continue;
      all_values.push_back(vals[c]);
      all_vectors.push_back(locked.col(c));
      all_res.push_back(res[c]);
    }
  }

  std::vector<std::size_t> order(all_values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return all_values[a] < all_values[b]; });
  const Eigen::Index m = static_cast<Eigen::Index>(order.size());
  out.values.resize(m);
  out.vectors.resize(N, m);
  out.residuals.resize(m);
  for (Eigen::Index c = 0; c < m; ++c) {
    out.values[c] = all_values[order[c]];
    out.vectors.col(c) = all_vectors[order[c]];
    out.residuals[c] = all_res[order[c]];
  }
  out.complete = (m == out.expected) && (m == 0 || out.residuals.maxCoeff() <= abs_tol);
  return out;
}

}  // namespace magspec
