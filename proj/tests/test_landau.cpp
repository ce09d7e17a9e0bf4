#include <doctest.h>

#include "magspec/landau.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace magspec;

namespace {

ModelSpectrum model(std::vector<double> a, double v0, int zero_modes = 0) {
  ModelSpectrum ms;
  ms.a = std::move(a);
  ms.v0 = v0;
  ms.rank = 2 * ms.n();
  ms.zero_modes = zero_modes;
  return ms;
}

FieldSpec radial_well(double half_width, std::string V = "0") {
  FieldConfig c;
  c.family = "radial-well";
  c.V = std::move(V);
  c.domain = Box::centered(2, half_width);
  return make_field(c);
}

FieldSpec constant_field(double half_width = 1.0) {
  FieldConfig c;
  c.family = "constant";
  c.domain = Box::centered(2, half_width);
  return make_field(c);
}

SigmaApprox union_of(std::vector<Interval> ivs, double lmax) {
  SigmaApprox sa;
  sa.intervals = std::move(ivs);
  sa.lmax = lmax;
  return sa;
}

// Composite Simpson rule on n (even) panels.
template <typename F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("Landau ladder for a single block") {
  const std::vector<Level> levels = enumerate_levels(model({1.0}, 0.0), 6.0);
  REQUIRE(levels.size() == 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(levels[k].k == std::vector<int>{k});
    CHECK(levels[k].value == doctest::Approx(2 * k + 1));
  }
}

TEST_CASE("levels of two blocks agree with brute force") {
  const ModelSpectrum ms = model({3.0, 2.0}, 0.5);
  const std::vector<Level> levels = enumerate_levels(ms, 8.0);
  std::vector<double> brute;
  for (int k1 = 0; k1 <= 3; ++k1)
    for (int k2 = 0; k2 <= 3; ++k2) {
      const double v = (2 * k1 + 1) * 3.0 + (2 * k2 + 1) * 2.0 + 0.5;
      if (v <= 8.0) brute.push_back(v);
    }
  std::sort(brute.begin(), brute.end());
  REQUIRE(levels.size() == brute.size());
  for (std::size_t i = 0; i < brute.size(); ++i) CHECK(levels[i].value == doctest::Approx(brute[i]));
  REQUIRE(levels.size() == 1);
  CHECK(levels[0].k == std::vector<int>{0, 0});
  CHECK(levels[0].value == doctest::Approx(5.5));
  const std::vector<Level> more = enumerate_levels(ms, 10.0);
  REQUIRE(more.size() == 2);
  CHECK(more[1].k == std::vector<int>{0, 1});
  CHECK(more[1].value == doctest::Approx(9.5));
}

TEST_CASE("single level below zero") {
  const std::vector<Level> levels = enumerate_levels(model({1.0}, -2.0), 0.0);
  REQUIRE(levels.size() == 1);
  CHECK(levels[0].value == doctest::Approx(-1.0));
}

TEST_CASE("rank zero has no magnetic levels") {
  CHECK_THROWS_AS(enumerate_levels(model({}, 0.0, 2), 5.0), PreconditionError);
}

TEST_CASE("bottom of the model spectrum") {
  CHECK(model_spectrum_min(model({1.0}, 0.0)) == doctest::Approx(1.0));
  CHECK(model_spectrum_min(model({3.0, 2.0}, 0.5)) == doctest::Approx(5.5));
  CHECK(model_spectrum_min(model({}, 0.7, 2)) == doctest::Approx(0.7));
}

TEST_CASE("sampled set of a constant field is the Landau ladder") {
  const FieldSpec fs = constant_field();
  const SigmaApprox sa = sample_sigma(fs, fs.domain(), 6.0, 0.1);
  const double rho = sa.covering_radius;
  CHECK(rho < 1e-6);
  REQUIRE(sa.intervals.size() == 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(sa.intervals[k].lo == doctest::Approx(2 * k + 1 - rho));
    CHECK(sa.intervals[k].hi == doctest::Approx(2 * k + 1 + rho));
  }
}

TEST_CASE("sampled set of the radial well on the unit disc") {
  const double s = std::sqrt(0.5);
  const FieldSpec fs = radial_well(1.0);
  const Box disc_box = Box::centered(2, s);
  const SigmaApprox sa = sample_sigma(fs, disc_box, 4.0, 0.05);
  const double rho = sa.covering_radius;
  CHECK(rho > 0.0);
  REQUIRE(sa.intervals.size() == 2);
  CHECK(sa.intervals[0].lo >= 1.0 - rho - 1e-12);
  CHECK(sa.intervals[0].lo <= 1.0);
  CHECK(sa.intervals[0].hi == doctest::Approx(2.0 + rho));
  CHECK(sa.intervals[1].lo >= 3.0 - rho - 1e-12);
  CHECK(sa.intervals[1].lo <= 3.0);
  CHECK(sa.intervals[1].hi == doctest::Approx(4.0));

  // every level on a ten times finer grid lies in the set
  const int n = 141;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = -s + 2 * s * i / (n - 1), y = -s + 2 * s * j / (n - 1);
      const double b = 1 + x * x + y * y;
      for (int k = 0; (2 * k + 1) * b <= 4.0; ++k) CHECK(sigma_distance((2 * k + 1) * b, sa) == 0.0);
    }
}

TEST_CASE("a large potential empties the window") {
  const FieldSpec fs = radial_well(1.0, "10");
  const SigmaApprox sa = sample_sigma(fs, Box::centered(2, std::sqrt(0.5)), 4.0, 0.05);
  CHECK(sa.empty());
}

TEST_CASE("distance to the sampled set") {
  CHECK(sigma_distance(2.0, union_of({{1, 1}, {3, 3}}, 6)) == doctest::Approx(1.0));
  CHECK(sigma_distance(1.5, union_of({{0.95, 2.05}}, 6)) == 0.0);
  CHECK(sigma_distance(2.6, union_of({{1, 2}, {3, 4}}, 6)) == doctest::Approx(0.4));
}

TEST_CASE("gaps between intervals") {
  const std::vector<Interval> gaps = find_gaps(union_of({{1, 2}, {3, 4}}, 6), 0.5);
  REQUIRE(gaps.size() == 3);
  CHECK(gaps[0] == Interval{0, 1});
  CHECK(gaps[1] == Interval{2, 3});
  CHECK(gaps[2] == Interval{4, 6});
}

TEST_CASE("gaps of the inflated constant ladder") {
  const SigmaApprox sa = sigma_from_levels({1, 3, 5}, 6.0, 0.1);
  const std::vector<Interval> gaps = find_gaps(sa, 0.5);
  REQUIRE(gaps.size() == 4);
  CHECK(gaps[0].hi == doctest::Approx(0.9));
  CHECK(gaps[1].lo == doctest::Approx(1.1));
  CHECK(gaps[1].hi == doctest::Approx(2.9));
  CHECK(gaps[2].lo == doctest::Approx(3.1));
  CHECK(gaps[2].hi == doctest::Approx(4.9));
}

TEST_CASE("a semi-infinite set leaves only the bottom gap") {
  const std::vector<Interval> gaps = find_gaps(union_of({{1, 2}}, 2.0), 0.0);
  REQUIRE(gaps.size() == 1);
  CHECK(gaps[0] == Interval{0, 1});
}

TEST_CASE("localization set of the radial well is an annulus") {
  const FieldSpec fs = radial_well(2.5);
  const NodeGrid grid = NodeGrid::covering(Box::centered(2, 2.0), 0.05);
  const KSetMask km = kset(fs, {1.5, 2.5}, grid, 0.5);
  CHECK(km.compact_flag);
  int mismatches = 0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double r2 = grid.node(i).squaredNorm();
    if (std::abs(r2 - 0.5) < 1e-9 || std::abs(r2 - 1.5) < 1e-9) continue;
    const bool inside = r2 >= 0.5 && r2 <= 1.5;
    if (inside != static_cast<bool>(km.mask[i])) ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("localization set of a constant field") {
  const FieldSpec fs = constant_field(2.0);
  const NodeGrid grid = NodeGrid::covering(Box::centered(2, 1.0), 0.1);
  const KSetMask all = kset(fs, {0.5, 1.5}, grid, 0.2);
  CHECK(all.count() == static_cast<std::size_t>(grid.size()));
  CHECK_FALSE(all.compact_flag);
  const KSetMask none = kset(fs, {1.5, 2.5}, grid, 0.2);
  CHECK(none.empty());
  CHECK(none.compact_flag);
}

TEST_CASE("model spectrum meets an interval") {
  CHECK(model_spectrum_meets(model({1.0}, 0.0), {2.9, 3.1}));
  CHECK_FALSE(model_spectrum_meets(model({1.0}, 0.0), {1.1, 2.9}));
  CHECK(model_spectrum_meets(model({}, 0.7, 2), {5.0, 6.0}));
}

TEST_CASE("leading coefficient in the plane") {
  const TestFunction phi = TestFunction::bump(1.0, 0.5);
  CHECK(model_f0(model({1.0}, 0.0), phi) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)));
  CHECK(model_f0(model({1.0}, 0.0), phi) == doctest::Approx(0.159155).epsilon(1e-5));
}

TEST_CASE("leading coefficient of the zero function") {
  const auto zero = [](double) { return 0.0; };
  CHECK(model_f0(model({1.0}, 0.0), zero, Interval{0.5, 1.5}) == 0.0);
  CHECK(model_f0(model({1.0}, 0.0, 1), zero, Interval{0.5, 2.5}) == 0.0);
}

TEST_CASE("leading coefficient with one free direction") {
  const TestFunction phi = TestFunction::bump(1.5, 1.0);
  const double f0 = model_f0(model({1.0}, 0.0, 1), phi, 1e-12);
  // only k = 0 contributes: (2 pi)^-2 * 2 * int_0^inf phi(r^2 + 1) dr
  const double integral = simpson([&](double r) { return phi(r * r + 1.0); }, 0.0, std::sqrt(1.5), 20000);
  const double oracle = 2.0 * integral / std::pow(2.0 * std::numbers::pi, 2);
  CHECK(std::abs(f0 - oracle) < 1e-9);
}

TEST_CASE("leading coefficient is linear and positive") {
  const ModelSpectrum ms = model({1.3}, 0.1);
  const TestFunction phi = TestFunction::bump(1.4, 0.3);
  const double f = model_f0(ms, phi);
  CHECK(f > 0.0);
  CHECK(model_f0(ms, phi.scaled(2.5)) == doctest::Approx(2.5 * f));
}

TEST_CASE("undeclared support is refused") {
  CHECK_THROWS_AS(model_f0(model({1.0}, 0.0), [](double) { return 1.0; }, std::nullopt), PreconditionError);
}
