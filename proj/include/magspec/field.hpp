#pragma once

#include "magspec/core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace magspec {

/// Sup-norm bounds over the computational domain. dB_sup bounds the
/// Lipschitz constant of x -> B(x) in the spectral norm, dV_sup that of V.
struct FieldBounds {
  double B_sup = 0.0;
  double dB_sup = 0.0;
  double V_sup = 0.0;
  double dV_sup = 0.0;
  bool declared = false;  // false: estimated by sampling
};

/// Parsed field description (the [field] section of a scenario config).
struct FieldConfig {
  std::string family = "constant";  // constant | polynomial | radial-well | iwatsuka
  int dim = 2;

  // constant: strengths of the 2x2 blocks, B_{2j-1,2j} = strengths[j]
  std::vector<double> strengths{1.0};
  std::string gauge = "symmetric";  // symmetric | landau | transverse

  // radial-well: B_{2j-1,2j}(x) = b0 + kappa |x|^2
  double b0 = 1.0;
  double kappa = 1.0;

  // iwatsuka: B_12(x) = b_left + (b_right - b_left) (1 + tanh(x1/width)) / 2
  double b_left = 1.0;
  double b_right = 2.0;
  double width = 0.5;

  // polynomial: entries "B<j><k>" (1-based) and optional "A<j>"
  std::map<std::pair<int, int>, std::string> B_entries;
  std::map<int, std::string> A_entries;

  std::string V = "0";  // polynomial text, all families

  std::optional<double> B_sup, dB_sup, V_sup, dV_sup;
  std::optional<Box> domain;  // defaults to [-1,1]^d

  friend bool operator==(const FieldConfig&, const FieldConfig&) = default;
};

/// Immutable magnetic field data: B(x) (antisymmetric), V(x), optional A(x).
class FieldSpec {
 public:
  using MatrixFn = std::function<Eigen::MatrixXd(const Point&)>;
  using ScalarFn = std::function<double(const Point&)>;
  using VectorFn = std::function<Eigen::VectorXd(const Point&)>;

  /// `raw_B` may fill either the full matrix or only the strict upper
  /// triangle; B(x) mirrors the upper triangle so B + B^T == 0 exactly.
  /// Throws if the lower triangle disagrees by more than 1e-12 at probes.
  FieldSpec(int dim, MatrixFn raw_B, ScalarFn V, std::optional<VectorFn> A, Box domain,
            std::optional<FieldBounds> declared_bounds, std::string family);

  int dim() const { return dim_; }
  Eigen::MatrixXd B(const Point& x) const;
  double V(const Point& x) const { return V_(x); }
  bool has_A() const { return A_.has_value(); }
  Eigen::VectorXd A(const Point& x) const;
  const Box& domain() const { return domain_; }
  const FieldBounds& bounds() const { return bounds_; }
  const std::string& family() const { return family_; }

  /// Sampled bounds (always computed), for comparison with declared ones.
  const FieldBounds& sampled_bounds() const { return sampled_; }
  /// Bounds over a sub-box: the declared ones if any, else sampled there.
  FieldBounds bounds_on(const Box& region) const;
  /// Sanity-check flags (declared bound below a sampled value, ...).
  const std::vector<std::string>& warnings() const { return warnings_; }
  /// min over probe nodes of the smallest nonzero a_j (recorded, not used).
  double sampled_inf_a() const { return inf_a_; }

  /// Replaces A by the given potential after checking curl A == B.
  FieldSpec with_potential(VectorFn A) const;
  /// Checks that the finite-difference curl of A matches B on a probe grid.
  void check_potential(const VectorFn& A) const;

 private:
  void sample_bounds();
  FieldBounds sampled_bounds_on(const Box& region, double* inf_a) const;

  int dim_;
  MatrixFn raw_B_;
  ScalarFn V_;
  std::optional<VectorFn> A_;
  Box domain_;
  FieldBounds bounds_;
  FieldBounds sampled_;
  std::string family_;
  std::vector<std::string> warnings_;
  double inf_a_ = 0.0;
};

/// Builds a field from a config block. Synthesizes A by the transverse gauge
/// from the domain center when the family has no closed-form potential.
FieldSpec make_field(const FieldConfig& cfg);

/// Local model data at x0: a_1 >= ... >= a_n > 0 with +-i a_j the nonzero
/// eigenvalues of B(x0).
struct ModelSpectrum {
  Point x0;
  std::vector<double> a;  // sorted descending
  int rank = 0;           // 2n
  double v0 = 0.0;
  int zero_modes = 0;     // d - 2n
  double rank_tol = 0.0;

  int n() const { return static_cast<int>(a.size()); }
  int dim() const { return rank + zero_modes; }
  double product_a() const {
    double p = 1.0;
    for (double aj : a) p *= aj;
    return p;
  }
};

/// Default rank tolerance: 1e-8 * ||B||_2.
inline constexpr double kRankTolFactor = 1e-8;

/// Classifies a real antisymmetric matrix through the eigenvalues of B^T B,
/// which come in equal pairs a_j^2. Eigenvalues below rank_tol^2 are zero
/// modes, as are values within the rounding floor of B^T B. An odd count
/// inside [rank_tol^2/4, 4 rank_tol^2] means the tolerance straddles a
/// singular value: AmbiguousRankError.
template <typename Derived>
ModelSpectrum skew_spectrum(const Eigen::MatrixBase<Derived>& B, double v0,
                            std::optional<double> rank_tol = std::nullopt) {
  using Scalar = typename Derived::Scalar;
  static_assert(!Eigen::NumTraits<Scalar>::IsComplex, "B must be real");
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index d = B.rows();
  if (B.cols() != d) throw PreconditionError("skew_spectrum: B must be square");

  const Mat BtB = B.transpose() * B;
  Eigen::SelfAdjointEigenSolver<Mat> es(BtB, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("skew_spectrum: eigensolver failed");
  auto mu = es.eigenvalues();  // ascending

  const double norm = std::sqrt(std::max<double>(0.0, static_cast<double>(mu[d - 1])));
  const double tol = rank_tol ? *rank_tol : kRankTolFactor * norm;
  const double tol2 = tol * tol;

  // eigenvalues of B^T B carry an absolute rounding error of order
  // d eps ||B||^2; anything below that is an exact zero mode
  const double noise = 4.0 * static_cast<double>(d) * std::numeric_limits<double>::epsilon() * norm * norm;

  int in_band = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double m = static_cast<double>(mu[i]);
    if (m > noise && m >= 0.25 * tol2 && m <= 4.0 * tol2 && tol2 > 0.0) ++in_band;
  }
  if (in_band % 2 == 1)
    throw AmbiguousRankError("skew_spectrum: rank tolerance " + std::to_string(tol) +
                             " straddles a singular value of B");

  std::vector<double> nonzero;
  int zeros = 0;
  for (Eigen::Index i = d - 1; i >= 0; --i) {
    const double m = static_cast<double>(mu[i]);
    if (m > tol2 && m > noise)
      nonzero.push_back(m);
    else
      ++zeros;
  }
  if (nonzero.size() % 2 == 1)
    throw AmbiguousRankError("skew_spectrum: unpaired singular value above the rank tolerance");

  ModelSpectrum ms;
  ms.v0 = v0;
  ms.rank_tol = tol;
  ms.zero_modes = zeros;
  ms.rank = static_cast<int>(nonzero.size());
  for (std::size_t i = 0; i < nonzero.size(); i += 2)
    ms.a.push_back(std::sqrt(0.5 * (nonzero[i] + nonzero[i + 1])));
  std::sort(ms.a.begin(), ms.a.end(), std::greater<>());
  return ms;
}

/// skew_spectrum of B(x0); x0 must lie in the field's declared domain.
ModelSpectrum skew_spectrum(const FieldSpec& fs, const Point& x0,
                            std::optional<double> rank_tol = std::nullopt);

}  // namespace magspec
