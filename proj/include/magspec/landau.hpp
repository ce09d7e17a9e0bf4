#pragma once

#include "magspec/field.hpp"
#include "magspec/grid.hpp"
#include "magspec/test_function.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace magspec {

/// Landau level Lambda_k(x0) = sum_j (2 k_j + 1) a_j + V(x0).
struct Level {
  std::vector<int> k;
  double value = 0.0;
};

/// All levels with value <= emax, ascending (ties broken by k). Throws
/// PreconditionError("no magnetic levels") when the rank is zero.
std::vector<Level> enumerate_levels(const ModelSpectrum& ms, double emax);

/// Lambda_0 = sum a_j + V(x0); the bottom of the semiaxis when d > 2n.
double model_spectrum_min(const ModelSpectrum& ms);

/// Finite union of closed intervals covering Sigma cap [0, lmax] over a box.
struct SigmaApprox {
  std::vector<Interval> intervals;  // sorted, disjoint, inside [0, lmax]
  double covering_radius = 0.0;     // rho
  double lmax = 0.0;
  Box domain;
  double sample_step = 0.0;
  double lipschitz = 0.0;           // L_Sigma used in rho
  int max_level_index = 0;          // |k| cap entering L_Sigma

  bool empty() const { return intervals.empty(); }
};

struct SigmaOptions {
  double merge_tol = 1e-9;
  std::optional<double> rank_tol;
};

/// Samples Sigma on a grid of spacing <= step and inflates every sampled
/// level by rho = L_Sigma * step * sqrt(d) / 2 + merge_tol, with L_Sigma
/// taken from the field's C^1 bounds.
SigmaApprox sample_sigma(const FieldSpec& fs, const Box& domain, double lmax, double step,
                         const SigmaOptions& opts = {});

/// Builds a SigmaApprox from explicit level values (each inflated by rho).
SigmaApprox sigma_from_levels(const std::vector<double>& levels, double lmax, double rho);

/// Distance from lambda to the union of intervals (0 inside).
double sigma_distance(double lambda, const SigmaApprox& sa);

/// Maximal open intervals of [0, lmax] missing sa.intervals, of width at
/// least min_width. The intervals are already inflated by rho, so the
/// returned gaps are certified gaps of the sampled Sigma.
std::vector<Interval> find_gaps(const SigmaApprox& sa, double min_width);

/// Nodes where some model level lies in [a, b].
struct KSetMask {
  NodeGrid grid;
  std::vector<std::uint8_t> mask;
  Interval interval;
  double margin = 0.0;
  bool compact_flag = true;  // no true node within margin of grid.extent's boundary

  std::size_t count() const;
  bool empty() const { return count() == 0; }
};

KSetMask kset(const FieldSpec& fs, Interval ab, const NodeGrid& grid, double margin,
              std::optional<double> rank_tol = std::nullopt);

/// True when the model spectrum at one point meets [a, b].
bool model_spectrum_meets(const ModelSpectrum& ms, Interval ab);

/// Leading local density-of-states coefficient f0(x0) for phi.
double model_f0(const ModelSpectrum& ms, const TestFunction& phi, double quad_tol = 1e-9);

/// Same for an arbitrary smooth phi; `support` must be declared.
double model_f0(const ModelSpectrum& ms, const std::function<double(double)>& phi,
                std::optional<Interval> support, double quad_tol = 1e-9);

}  // namespace magspec
