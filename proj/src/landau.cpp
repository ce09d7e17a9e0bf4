#include "magspec/landau.hpp"

#include "magspec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>

namespace magspec {

namespace {

void enumerate_rec(const ModelSpectrum& ms, std::size_t j, double partial, double emax, std::vector<int>& k,
                   std::vector<Level>& out) {
  if (j == ms.a.size()) {
    out.push_back({k, partial + ms.v0});
    return;
  }
  // remaining ground contribution from axes after j
  double rest = 0.0;
  for (std::size_t i = j + 1; i < ms.a.size(); ++i) rest += ms.a[i];
  for (int kj = 0;; ++kj) {
    const double val = partial + (2.0 * kj + 1.0) * ms.a[j];
    if (val + rest + ms.v0 > emax) break;
    k[j] = kj;
    enumerate_rec(ms, j + 1, val, emax, k, out);
  }
  k[j] = 0;
}

std::vector<Interval> merge_intervals(std::vector<Interval> v) {
  std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  std::vector<Interval> out;
  for (const auto& iv : v) {
    if (!out.empty() && iv.lo <= out.back().hi)
      out.back().hi = std::max(out.back().hi, iv.hi);
    else
      out.push_back(iv);
  }
  return out;
}

}  // namespace

std::vector<Level> enumerate_levels(const ModelSpectrum& ms, double emax) {
  if (ms.a.empty()) throw PreconditionError("enumerate_levels: no magnetic levels (rank 0)");
  if (!std::isfinite(emax)) throw PreconditionError("enumerate_levels: emax must be finite");
  for (double a : ms.a)
    if (!(a > 0.0)) throw PreconditionError("enumerate_levels: a_j must be positive");
  std::vector<Level> out;
  std::vector<int> k(ms.a.size(), 0);
  enumerate_rec(ms, 0, 0.0, emax, k, out);
  std::sort(out.begin(), out.end(), [](const Level& x, const Level& y) {
    return x.value < y.value || (x.value == y.value && x.k < y.k);
  });
  return out;
}

double model_spectrum_min(const ModelSpectrum& ms) {
  double s = ms.v0;
  for (double a : ms.a) s += a;
  return s;
}

SigmaApprox sample_sigma(const FieldSpec& fs, const Box& domain, double lmax, double step,
                         const SigmaOptions& opts) {
  if (!(step > 0.0)) throw PreconditionError("sample_sigma: step must be positive");
  if (!(lmax > 0.0)) throw PreconditionError("sample_sigma: lmax must be positive");
  if (domain.dim() != fs.dim()) throw PreconditionError("sample_sigma: domain dimension mismatch");

  const NodeGrid grid = NodeGrid::covering(domain, step);
  const Eigen::Index nodes = grid.size();
  std::vector<ModelSpectrum> local(nodes);
  std::vector<std::exception_ptr> errors(nodes);
  parallel_for(0, nodes, [&](std::ptrdiff_t i) {
    try {
      local[i] = skew_spectrum(fs, grid.node(i), opts.rank_tol);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  const int d = fs.dim();
  const double cell_radius = grid.spacing.maxCoeff() * std::sqrt(static_cast<double>(d)) / 2.0;
  const FieldBounds fb = fs.bounds_on(domain);
  const double dB = fb.dB_sup, dV = fb.dV_sup;

  double amin = std::numeric_limits<double>::infinity();
  double vmin = std::numeric_limits<double>::infinity();
  int nmax = 0;
  for (const auto& ms : local) {
    if (!ms.a.empty()) amin = std::min(amin, ms.a.back());
    vmin = std::min(vmin, ms.v0);
    nmax = std::max(nmax, ms.n());
  }
  int kcap = 0;
  if (nmax > 0 && std::isfinite(amin)) {
    double a_lo = amin - dB * cell_radius;
    if (!(a_lo > 0.0)) a_lo = amin;
    const double v_lo = vmin - dV * cell_radius;
    const double span = lmax - v_lo - nmax * a_lo;
    kcap = span > 0.0 ? static_cast<int>(std::floor(span / (2.0 * a_lo))) + 1 : 1;
  }
  SigmaApprox sa;
  sa.lmax = lmax;
  sa.domain = domain;
  sa.sample_step = grid.spacing.maxCoeff();
  sa.max_level_index = kcap;
  sa.lipschitz = (2.0 * kcap + nmax) * dB + dV;
  const double rho = sa.lipschitz * cell_radius + opts.merge_tol;
  sa.covering_radius = rho;

  auto clip_push = [&](std::vector<Interval>& v, double lo, double hi) {
    lo = std::max(lo, 0.0);
    hi = std::min(hi, lmax);
    if (lo <= hi) v.push_back({lo, hi});
  };
  std::vector<std::vector<Interval>> per_node(nodes);
  parallel_for(0, nodes, [&](std::ptrdiff_t i) {
    const ModelSpectrum& ms = local[i];
    std::vector<Interval> v;
    if (ms.zero_modes > 0) {
      clip_push(v, model_spectrum_min(ms) - rho, lmax);
    } else {
      for (const Level& lv : enumerate_levels(ms, lmax + rho)) clip_push(v, lv.value - rho, lv.value + rho);
    }
    per_node[i] = merge_intervals(std::move(v));
  });
  std::vector<Interval> all;
  for (auto& v : per_node) all.insert(all.end(), v.begin(), v.end());
  sa.intervals = merge_intervals(std::move(all));
  return sa;
}

SigmaApprox sigma_from_levels(const std::vector<double>& levels, double lmax, double rho) {
  SigmaApprox sa;
  sa.lmax = lmax;
  sa.covering_radius = rho;
  std::vector<Interval> v;
  for (double l : levels) {
    const double lo = std::max(0.0, l - rho), hi = std::min(lmax, l + rho);
    if (lo <= hi) v.push_back({lo, hi});
  }
  sa.intervals = merge_intervals(std::move(v));
  return sa;
}

double sigma_distance(double lambda, const SigmaApprox& sa) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& iv : sa.intervals) {
    if (iv.contains(lambda)) return 0.0;
    best = std::min(best, lambda < iv.lo ? iv.lo - lambda : lambda - iv.hi);
  }
  return best;
}

std::vector<Interval> find_gaps(const SigmaApprox& sa, double min_width) {
  std::vector<Interval> gaps;
  double cursor = 0.0;
  auto push = [&](double lo, double hi) {
    if (hi > lo && hi - lo >= min_width) gaps.push_back({lo, hi});
  };
  for (const auto& iv : sa.intervals) {
    push(cursor, iv.lo);
    cursor = std::max(cursor, iv.hi);
  }
  push(cursor, sa.lmax);
  return gaps;
}

std::size_t KSetMask::count() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

bool model_spectrum_meets(const ModelSpectrum& ms, Interval ab) {
  if (ms.zero_modes > 0 || ms.a.empty()) return model_spectrum_min(ms) <= ab.hi;
  for (const Level& lv : enumerate_levels(ms, ab.hi))
    if (lv.value >= ab.lo) return true;
  return false;
}

KSetMask kset(const FieldSpec& fs, Interval ab, const NodeGrid& grid, double margin,
              std::optional<double> rank_tol) {
  if (!(ab.lo < ab.hi)) throw PreconditionError("kset: need a < b");
  KSetMask km;
  km.grid = grid;
  km.interval = ab;
  km.margin = margin;
  const Eigen::Index nodes = grid.size();
  km.mask.assign(nodes, 0);
  std::vector<std::exception_ptr> errors(nodes);
  parallel_for(0, nodes, [&](std::ptrdiff_t i) {
    try {
      km.mask[i] = model_spectrum_meets(skew_spectrum(fs, grid.node(i), rank_tol), ab) ? 1 : 0;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  km.compact_flag = true;
  for (Eigen::Index i = 0; i < nodes; ++i) {
    if (km.mask[i] && grid.extent.distance_to_boundary(grid.node(i)) < margin) {
      km.compact_flag = false;
      break;
    }
  }
  return km;
}

double model_f0(const ModelSpectrum& ms, const TestFunction& phi, double quad_tol) {
  return model_f0(ms, [&phi](double x) { return phi(x); }, phi.support(), quad_tol);
}

double model_f0(const ModelSpectrum& ms, const std::function<double(double)>& phi,
                std::optional<Interval> support, double quad_tol) {
  if (!support) throw PreconditionError("model_f0: test function has no declared compact support");
  const int n = ms.n();
  const int m = ms.zero_modes;
  const int d = 2 * n + m;

  std::vector<double> levels;
  if (n == 0) {
    levels.push_back(ms.v0);
  } else {
    for (const Level& lv : enumerate_levels(ms, support->hi)) levels.push_back(lv.value);
  }

  const double two_pi = 2.0 * std::numbers::pi;
  if (m == 0) {
    double sum = 0.0;
    for (double l : levels) sum += phi(l);
    return std::pow(two_pi, -n) * ms.product_a() * sum;
  }

  // Radial form of the transverse integral over R^m:
  // int phi(|xi|^2 + L) dxi = omega_{m-1} int_0^inf phi(r^2 + L) r^{m-1} dr.
  const double omega = 2.0 * std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m);
  const double prefactor = std::pow(two_pi, n - d) * ms.product_a() * omega;
  double sum = 0.0;
  const double per_level_tol = quad_tol / (std::max<std::size_t>(levels.size(), 1) * std::max(prefactor, 1e-300));
  for (double l : levels) {
    const double r_lo = std::sqrt(std::max(0.0, support->lo - l));
    const double r_hi = std::sqrt(std::max(0.0, support->hi - l));
    if (r_hi <= r_lo) continue;
    sum += adaptive_simpson([&](double r) { return phi(r * r + l) * std::pow(r, m - 1); }, r_lo, r_hi,
                            per_level_tol);
  }
  return prefactor * sum;
}

}  // namespace magspec
