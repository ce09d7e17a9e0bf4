#include "magspec/field.hpp"

#include "magspec/gauge.hpp"
#include "magspec/polynomial.hpp"

#include <cmath>
#include <sstream>

namespace magspec {

namespace {

constexpr double kAntisymTol = 1e-12;

/// Probe nodes: `per_axis` points per axis spanning the box, corners included.
std::vector<Point> probe_nodes(const Box& box, int per_axis) {
  const int d = box.dim();
  std::vector<Point> out;
  std::vector<int> idx(d, 0);
  while (true) {
    Point x(d);
    for (int i = 0; i < d; ++i)
      x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * idx[i] / static_cast<double>(per_axis - 1);
    out.push_back(std::move(x));
    int axis = 0;
    while (axis < d && ++idx[axis] == per_axis) idx[axis++] = 0;
    if (axis == d) break;
  }
  return out;
}

int probe_density(int dim) { return dim <= 2 ? 17 : dim == 3 ? 9 : dim <= 5 ? 5 : 3; }

double log_cosh(double t) {
  const double a = std::abs(t);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

}  // namespace

FieldSpec::FieldSpec(int dim, MatrixFn raw_B, ScalarFn V, std::optional<VectorFn> A, Box domain,
                     std::optional<FieldBounds> declared_bounds, std::string family)
    : dim_(dim),
      raw_B_(std::move(raw_B)),
      V_(std::move(V)),
      domain_(std::move(domain)),
      family_(std::move(family)) {
  if (dim_ < 2) throw PreconditionError("field: dimension must be >= 2");
  if (domain_.dim() != dim_) throw PreconditionError("field: domain dimension mismatch");

  for (const Point& x : probe_nodes(domain_, dim_ <= 3 ? 5 : 3)) {
    const Eigen::MatrixXd raw = raw_B_(x);
    if (raw.rows() != dim_ || raw.cols() != dim_) throw PreconditionError("field: B has wrong shape");
    const double dev = (raw + raw.transpose()).cwiseAbs().maxCoeff();
    if (dev > kAntisymTol * std::max(1.0, raw.cwiseAbs().maxCoeff())) {
      std::ostringstream os;
      os << "field: B is not antisymmetric (|B + B^T| = " << dev << ")";
      throw PreconditionError(os.str());
    }
  }

  sample_bounds();
  bounds_ = sampled_;
  bounds_.declared = false;
  if (declared_bounds) {
    bounds_ = *declared_bounds;
    auto check = [this](const char* name, double declared, double sampled) {
      if (sampled > declared * (1.0 + 1e-9) + 1e-12) {
        std::ostringstream os;
        os << "declared " << name << " = " << declared << " is below the sampled value " << sampled;
        warnings_.push_back(os.str());
      }
    };
    check("B_sup", bounds_.B_sup, sampled_.B_sup);
    check("dB_sup", bounds_.dB_sup, sampled_.dB_sup / 1.05);
    check("V_sup", bounds_.V_sup, sampled_.V_sup);
    check("dV_sup", bounds_.dV_sup, sampled_.dV_sup / 1.05);
  }

  if (A) check_potential(*A);
  A_ = std::move(A);
}

Eigen::MatrixXd FieldSpec::B(const Point& x) const {
  const Eigen::MatrixXd raw = raw_B_(x);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int j = 0; j < dim_; ++j)
    for (int k = j + 1; k < dim_; ++k) {
      b(j, k) = raw(j, k);
      b(k, j) = -raw(j, k);
    }
  return b;
}

Eigen::VectorXd FieldSpec::A(const Point& x) const {
  if (!A_) throw PreconditionError("field: no vector potential");
  return (*A_)(x);
}

FieldSpec FieldSpec::with_potential(VectorFn A) const {
  FieldSpec copy = *this;
  copy.check_potential(A);
  copy.A_ = std::move(A);
  return copy;
}

void FieldSpec::check_potential(const VectorFn& A) const {
  const double h = 1e-3 * std::max(1.0, domain_.extent().maxCoeff());
  const double c1 = std::max(bounds_.B_sup, bounds_.dB_sup);
  // Truncation is O(h^2) per the stated contract; the second term covers
  // rounding of the divided differences.
  for (const Point& x : probe_nodes(domain_.inflated(-2.0 * h), dim_ <= 3 ? 5 : 3)) {
    const Eigen::VectorXd a0 = A(x);
    if (a0.size() != dim_) throw PreconditionError("field: A has wrong length");
    Eigen::MatrixXd jac(dim_, dim_);  // jac(j, k) = d A_k / d x_j
    for (int j = 0; j < dim_; ++j) {
      Point xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      jac.row(j) = (A(xp) - A(xm)).transpose() / (2.0 * h);
    }
    const Eigen::MatrixXd curl = jac - jac.transpose();
    const double err = (curl - B(x)).cwiseAbs().maxCoeff();
    const double tol = 10.0 * h * h * c1 + 1e-14 * (1.0 + a0.cwiseAbs().maxCoeff()) / h;
    if (!(err <= tol)) {
      std::ostringstream os;
      os << "field: curl A differs from B by " << err << " (tolerance " << tol << ")";
      throw PreconditionError(os.str());
    }
  }
}

FieldBounds FieldSpec::sampled_bounds_on(const Box& region, double* inf_a_out) const {
  const double h = 1e-4 * std::max(1.0, region.extent().maxCoeff());
  FieldBounds s;
  double inf_a = std::numeric_limits<double>::infinity();
  for (const Point& x : probe_nodes(region, probe_density(dim_))) {
    const Eigen::MatrixXd b = B(x);
    s.B_sup = std::max(s.B_sup, b.operatorNorm());
    s.V_sup = std::max(s.V_sup, std::abs(V_(x)));
    double db2 = 0.0, dv2 = 0.0;
    for (int j = 0; j < dim_; ++j) {
      Point xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      db2 += ((B(xp) - B(xm)) / (2.0 * h)).operatorNorm() * ((B(xp) - B(xm)) / (2.0 * h)).operatorNorm();
      const double dv = (V_(xp) - V_(xm)) / (2.0 * h);
      dv2 += dv * dv;
    }
    s.dB_sup = std::max(s.dB_sup, std::sqrt(db2));
    s.dV_sup = std::max(s.dV_sup, std::sqrt(dv2));
    try {
      const ModelSpectrum ms = skew_spectrum(b, 0.0);
      if (!ms.a.empty()) inf_a = std::min(inf_a, ms.a.back());
    } catch (const AmbiguousRankError&) {
    }
  }
  // Grid sampling can miss the true maximum of the derivative.
  s.dB_sup *= 1.05;
  s.dV_sup *= 1.05;
  s.declared = false;
  if (inf_a_out) *inf_a_out = std::isfinite(inf_a) ? inf_a : 0.0;
  return s;
}

void FieldSpec::sample_bounds() { sampled_ = sampled_bounds_on(domain_, &inf_a_); }

FieldBounds FieldSpec::bounds_on(const Box& region) const {
  if (bounds_.declared) return bounds_;
  return sampled_bounds_on(region, nullptr);
}

ModelSpectrum skew_spectrum(const FieldSpec& fs, const Point& x0, std::optional<double> rank_tol) {
  if (!fs.domain().contains(x0, 1e-12 * (1.0 + fs.domain().diameter())))
    throw PreconditionError("skew_spectrum: point outside the field domain");
  ModelSpectrum ms = skew_spectrum(fs.B(x0), fs.V(x0), rank_tol);
  ms.x0 = x0;
  return ms;
}

FieldSpec make_field(const FieldConfig& cfg) {
  const int d = cfg.dim;
  if (d < 2) throw PreconditionError("field: dimension must be >= 2");
  const Box domain = cfg.domain ? *cfg.domain : Box::centered(d, 1.0);
  if (domain.dim() != d) throw PreconditionError("field: domain dimension mismatch");

  std::optional<FieldBounds> declared;
  if (cfg.B_sup && cfg.dB_sup && cfg.V_sup && cfg.dV_sup)
    declared = FieldBounds{*cfg.B_sup, *cfg.dB_sup, *cfg.V_sup, *cfg.dV_sup, true};
  else if (cfg.B_sup || cfg.dB_sup || cfg.V_sup || cfg.dV_sup)
    throw PreconditionError("field: declare all four bounds (B_sup, dB_sup, V_sup, dV_sup) or none");

  const Polynomial V = Polynomial::parse(cfg.V, d);
  FieldSpec::ScalarFn vfn = [V](const Point& x) { return V(x); };

  FieldSpec::MatrixFn bfn;
  std::optional<FieldSpec::VectorFn> afn;
  bool synthesize_A = false;

  if (cfg.family == "constant") {
    if (cfg.strengths.empty() || 2 * static_cast<int>(cfg.strengths.size()) > d)
      throw PreconditionError("field: constant family needs 1..d/2 block strengths");
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t j = 0; j < cfg.strengths.size(); ++j) {
      b(2 * j, 2 * j + 1) = cfg.strengths[j];
      b(2 * j + 1, 2 * j) = -cfg.strengths[j];
    }
    bfn = [b](const Point&) { return b; };
    if (cfg.gauge == "symmetric") {
      afn = [b](const Point& x) -> Eigen::VectorXd { return 0.5 * b.transpose() * x; };
    } else if (cfg.gauge == "landau") {
      const std::vector<double> s = cfg.strengths;
      afn = [s, d](const Point& x) -> Eigen::VectorXd {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(d);
        for (std::size_t j = 0; j < s.size(); ++j) a[2 * j + 1] = s[j] * x[2 * j];
        return a;
      };
    } else if (cfg.gauge == "transverse") {
      synthesize_A = true;
    } else {
      throw PreconditionError("field: unknown gauge '" + cfg.gauge + "'");
    }
  } else if (cfg.family == "radial-well") {
    if (d % 2 != 0) throw PreconditionError("field: radial-well needs an even dimension");
    const double b0 = cfg.b0, kappa = cfg.kappa;
    bfn = [b0, kappa, d](const Point& x) {
      const double s = b0 + kappa * x.squaredNorm();
      Eigen::MatrixXd b = Eigen::MatrixXd::Zero(d, d);
      for (int j = 0; j + 1 < d; j += 2) {
        b(j, j + 1) = s;
        b(j + 1, j) = -s;
      }
      return b;
    };
    synthesize_A = true;
  } else if (cfg.family == "iwatsuka") {
    if (d != 2) throw PreconditionError("field: iwatsuka family is two-dimensional");
    if (!(cfg.width > 0.0)) throw PreconditionError("field: iwatsuka width must be positive");
    const double bl = cfg.b_left, br = cfg.b_right, w = cfg.width;
    bfn = [bl, br, w](const Point& x) {
      const double s = bl + (br - bl) * 0.5 * (1.0 + std::tanh(x[0] / w));
      Eigen::MatrixXd b(2, 2);
      b << 0.0, s, -s, 0.0;
      return b;
    };
    afn = [bl, br, w](const Point& x) {
      Eigen::VectorXd a(2);
      a << 0.0, bl * x[0] + 0.5 * (br - bl) * (x[0] + w * log_cosh(x[0] / w));
      return a;
    };
  } else if (cfg.family == "polynomial") {
    if (cfg.B_entries.empty()) throw PreconditionError("field: polynomial family needs B<j><k> entries");
    struct Entry {
      int j, k;
      Polynomial p;
    };
    std::vector<Entry> entries;
    for (const auto& [jk, text] : cfg.B_entries) {
      const auto [j, k] = jk;
      if (j < 1 || k < 1 || j > d || k > d || j == k)
        throw PreconditionError("field: bad B entry index B" + std::to_string(j) + std::to_string(k));
      entries.push_back({j - 1, k - 1, Polynomial::parse(text, d)});
    }
    bfn = [entries, d](const Point& x) {
      Eigen::MatrixXd b = Eigen::MatrixXd::Zero(d, d);
      std::vector<std::vector<bool>> set(d, std::vector<bool>(d, false));
      for (const auto& e : entries) {
        b(e.j, e.k) = e.p(x);
        set[e.j][e.k] = true;
      }
      // entries given on one side only are mirrored
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          if (set[j][k] && !set[k][j]) b(k, j) = -b(j, k);
      return b;
    };
    if (!cfg.A_entries.empty()) {
      if (static_cast<int>(cfg.A_entries.size()) != d)
        throw PreconditionError("field: give every component A1..A" + std::to_string(d) + " or none");
      std::vector<Polynomial> comps;
      for (int j = 1; j <= d; ++j) {
        auto it = cfg.A_entries.find(j);
        if (it == cfg.A_entries.end()) throw PreconditionError("field: missing A" + std::to_string(j));
        comps.push_back(Polynomial::parse(it->second, d));
      }
      afn = [comps, d](const Point& x) {
        Eigen::VectorXd a(d);
        for (int j = 0; j < d; ++j) a[j] = comps[j](x);
        return a;
      };
    } else {
      synthesize_A = true;
    }
  } else {
    throw PreconditionError("field: unknown family '" + cfg.family + "'");
  }

  if (synthesize_A) {
    const Point center = domain.center();
    afn = [bfn, center, d](const Point& x) -> Eigen::VectorXd {
      const auto mirrored = [&bfn, d](const Point& p) {
        Eigen::MatrixXd raw = bfn(p);
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < j; ++k) raw(j, k) = -raw(k, j);
        raw.diagonal().setZero();
        return raw;
      };
      return transverse_potential(mirrored, center, x - center);
    };
  }
  return FieldSpec(d, std::move(bfn), std::move(vfn), std::move(afn), domain, declared, cfg.family);
}

}  // namespace magspec
