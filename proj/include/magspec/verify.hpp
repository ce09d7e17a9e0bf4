#pragma once

#include "magspec/distance.hpp"
#include "magspec/fit.hpp"
#include "magspec/landau.hpp"
#include "magspec/lattice.hpp"
#include "magspec/spectral.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace magspec {

/// How the lattice is chosen for a given hbar: the box is `core` grown by
/// max(margin_sqrt_hbar * sqrt(hbar), margin_fraction * diameter(core)), the
/// spacing is h_coeff * hbar^h_exponent.
struct LatticeRule {
  Box core;
  double margin_sqrt_hbar = 6.0;
  double margin_fraction = 0.25;
  double h_coeff = 0.3;
  double h_exponent = 1.0;
  Eigen::Index node_cap = kDefaultNodeCap;

  Box box(double hbar) const;
  GridSpec grid(double hbar) const;
  /// Box scaled by `factor` about its center with the same spacing.
  GridSpec grid(double hbar, int factor) const;
};

/// Assembled operators and eigen windows per hbar, so several checks can
/// share one solve. A request for a window inside a cached one is served by
/// restriction.
class Experiment {
 public:
  Experiment(const FieldSpec& fs, LatticeRule rule, SolverOptions opts = {});

  const FieldSpec& field() const { return *fs_; }
  const LatticeRule& rule() const { return rule_; }
  const SolverOptions& solver() const { return opts_; }

  const LatticeOperator& op(double hbar);
  /// Throws ConvergenceError when the solve is not certified complete.
  EigenWindowResult eigs(double hbar, Interval window);
  /// Eigenvalue count of H/hbar in [lo, hi) by inertia, box scaled by `factor`.
  Eigen::Index count(double hbar, Interval window, int factor = 1);

 private:
  const FieldSpec* fs_;
  LatticeRule rule_;
  SolverOptions opts_;
  std::map<double, LatticeOperator> ops_;
  std::map<double, std::vector<EigenWindowResult>> windows_;
};

/// Restriction of a complete window to a sub-window.
EigenWindowResult restrict_window(const EigenWindowResult& ew, Interval window);

/// One check: per-rung table, scalar metrics, verdict.
struct CheckReport {
  std::string check;
  std::string claim;  // statement being tested
  bool pass = false;
  std::string verdict;
  std::vector<std::string> notes;
  std::map<std::string, double> metrics;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row) { rows.push_back(std::move(row)); }
};

using ScalingReport = CheckReport;

struct LocalizationReport : CheckReport {
  Interval interval;
  Interval inner;
  std::optional<ExpFit> fit;  // ln m against r / sqrt(hbar)
  double c = 0.0;             // fitted decay constant (slope = -2c)
  double envelope_C = 0.0;    // smallest C with m <= C exp(-2c s) on all samples
};

/// Requires at least three rungs, all positive and distinct.
void validate_ladder(const std::vector<double>& ladder);

/// D(hbar) = max over eigenvalues lambda of H/hbar in [0, K] of the distance
/// from lambda to the sampled set (already inflated by rho). Fits
/// D ~ hbar^alpha over rungs with D > 0; passes when alpha >= 1 and the fit
/// residual is within 0.3 decades, or when D == 0 on every rung (inclusion
/// holds with no excess, the exponent is then not identifiable).
ScalingReport check_spectrum_inclusion(Experiment& ex, const SigmaApprox& sa, const std::vector<double>& ladder,
                                       double window_K);

struct ProbeOptions {
  int count = 100;
  std::uint64_t seed = 7;
  double radius_sqrt_hbar = 2.0;  // support radius in units of sqrt(hbar)
  int max_degree = 2;             // random polynomial factor
};

/// Eigenvalue count in [hbar a1, hbar b1] under box doubling, and the lower
/// bound ||(H/hbar - lambda) u|| >= (d(lambda, Sigma_supp u) - C hbar^{1/4}) ||u||
/// on seeded probes supported where Sigma_x misses [a, b].
CheckReport check_gap_discreteness(Experiment& ex, Interval ab, Interval inner, const std::vector<double>& ladder,
                                   const ProbeOptions& probes = {});

/// Exterior masses m(r) of eigenfunctions with lambda in `inner`, distance
/// measured to the K-set of `ab`; `radii` are in units of sqrt(hbar). The
/// exponential law is fitted to the largest mass over eigenfunctions at each
/// radius and rung.
LocalizationReport check_localization(Experiment& ex, Interval ab, Interval inner, const std::vector<double>& ladder,
                                      const std::vector<double>& radii, double mass_floor = 1e-13);

/// err(hbar, x0) = |hbar^{d/2} ldos(x0) - f0(x0)| / max(|f0|, floor); fits the
/// worst point's err ~ hbar^beta. Passes when beta >= 0.4 and the error at the
/// smallest hbar is <= rel_tol.
ScalingReport check_ldos_leading(Experiment& ex, const TestFunction& phi, const std::vector<Point>& points,
                                 const std::vector<double>& ladder, double rel_tol = 0.1, double floor = 1e-12);

/// phi supported in a certified gap of `sa`: hbar^{d/2} ldos must stay below
/// `tol` at every point and rung.
CheckReport check_ldos_gap(Experiment& ex, const TestFunction& phi, const SigmaApprox& sa,
                           const std::vector<Point>& points, const std::vector<double>& ladder, double tol);

/// Spectral projector kernel E(x0, x1) for an interval with endpoints in gaps:
/// fits ln(hbar^{d/2} |E|) against |x0 - x1| / sqrt(hbar).
CheckReport check_offdiag_decay(Experiment& ex, Interval projector, const SigmaApprox& sa, const Point& x0,
                                const Point& x1, const std::vector<double>& ladder, double max_residual = 0.5);

/// Gaussian-windowed coherent state at `center` in the gauge of the field:
/// exp(-i Phi(x)/hbar) P((x-c)/sqrt(hbar)) exp(-b |x-c|^2 / (4 hbar)) chi(|x-c|/R),
/// with Phi the transverse phase based at the center, b = a_1(center).
VectorXc coherent_probe(const FieldSpec& fs, const GridSpec& grid, double hbar, const Point& center, double radius,
                        const std::vector<cplx>& poly_coeffs);

}  // namespace magspec
