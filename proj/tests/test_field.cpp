#include <doctest.h>

#include "magspec/field.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <random>
#include <vector>

using namespace magspec;

namespace {

FieldConfig constant_config(double b = 1.0) {
  FieldConfig c;
  c.family = "constant";
  c.strengths = {b};
  return c;
}

Eigen::MatrixXd random_skew(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = g(rng);
  return m - m.transpose();
}

// Positive eigenvalues of the Hermitian matrix iB, sorted descending.
std::vector<double> positive_parts_of_iB(const Eigen::MatrixXd& B) {
  const Eigen::MatrixXcd iB = std::complex<double>(0.0, 1.0) * B.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(iB, Eigen::EigenvaluesOnly);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()[i] > 1e-9) out.push_back(es.eigenvalues()[i]);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace

TEST_CASE("constant field has the same block everywhere") {
  const FieldSpec fs = make_field(constant_config());
  Eigen::Matrix2d expected;
  expected << 0, 1, -1, 0;
  for (const auto& x : {Point(Eigen::Vector2d(0, 0)), Point(Eigen::Vector2d(0.7, -0.3))})
    CHECK((fs.B(x) - expected).norm() == 0.0);
  CHECK(fs.dim() == 2);
  CHECK(fs.has_A());
}

TEST_CASE("radial well evaluates b0 + kappa |x|^2") {
  FieldConfig c;
  c.family = "radial-well";
  c.domain = Box::centered(2, 2.0);
  const FieldSpec fs = make_field(c);
  const Eigen::MatrixXd B = fs.B(Eigen::Vector2d(1.0, 0.0));
  CHECK(B(0, 1) == doctest::Approx(2.0));
  CHECK(B(1, 0) == doctest::Approx(-2.0));
  CHECK(B(0, 0) == 0.0);
}

TEST_CASE("three dimensional field with one block has a zero mode") {
  FieldConfig c;
  c.family = "constant";
  c.dim = 3;
  c.strengths = {1.0};
  const FieldSpec fs = make_field(c);
  const ModelSpectrum ms = skew_spectrum(fs, Point::Zero(3));
  CHECK(ms.rank == 2);
  CHECK(ms.zero_modes == 1);
  REQUIRE(ms.a.size() == 1);
  CHECK(ms.a[0] == doctest::Approx(1.0));
}

TEST_CASE("B is antisymmetric bit for bit") {
  FieldConfig c;
  c.family = "polynomial";
  c.B_entries[{1, 2}] = "1 + x1^2 - 0.3*x2";
  c.domain = Box::centered(2, 1.0);
  const FieldSpec fs = make_field(c);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::MatrixXd B = fs.B(Eigen::Vector2d(u(rng), u(rng)));
    CHECK((B + B.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("unknown family and gauge are rejected") {
  FieldConfig c = constant_config();
  c.family = "dipole";
  CHECK_THROWS_AS(make_field(c), PreconditionError);
  c = constant_config();
  c.gauge = "coulomb";
  CHECK_THROWS_AS(make_field(c), PreconditionError);
}

TEST_CASE("skew spectrum of the standard block") {
  Eigen::Matrix2d B;
  B << 0, 1, -1, 0;
  const ModelSpectrum ms = skew_spectrum(B, 0.0);
  REQUIRE(ms.a.size() == 1);
  CHECK(ms.a[0] == doctest::Approx(1.0));
  CHECK(ms.rank == 2);
  CHECK(ms.v0 == 0.0);
}

TEST_CASE("skew spectrum of two blocks is sorted descending") {
  Eigen::Matrix4d B = Eigen::Matrix4d::Zero();
  B(0, 1) = 2;
  B(1, 0) = -2;
  B(2, 3) = 3;
  B(3, 2) = -3;
  const ModelSpectrum ms = skew_spectrum(B, 0.0);
  const std::vector<double> oracle = positive_parts_of_iB(B);
  REQUIRE(ms.a.size() == 2);
  CHECK(ms.rank == 4);
  CHECK(ms.a[0] == doctest::Approx(3.0));
  CHECK(ms.a[1] == doctest::Approx(2.0));
  for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(ms.a[j] - oracle[j]) < 1e-12);
}

TEST_CASE("skew spectrum of zero matrix") {
  const ModelSpectrum ms = skew_spectrum(Eigen::Matrix2d::Zero(), 0.0);
  CHECK(ms.a.empty());
  CHECK(ms.rank == 0);
  CHECK(ms.zero_modes == 2);
}

TEST_CASE("skew spectrum matches iB on random matrices") {
  std::mt19937_64 rng(11);
  for (int d : {2, 3, 4, 5, 6}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::MatrixXd B = random_skew(d, rng);
      const ModelSpectrum ms = skew_spectrum(B, 0.0);
      const std::vector<double> oracle = positive_parts_of_iB(B);
      REQUIRE(ms.a.size() == oracle.size());
      CHECK(ms.zero_modes == d - 2 * static_cast<int>(oracle.size()));
      for (std::size_t j = 0; j < oracle.size(); ++j) CHECK(std::abs(ms.a[j] - oracle[j]) < 1e-10);
    }
  }
}

TEST_CASE("rank tolerance decides which small blocks count") {
  Eigen::Matrix4d B = Eigen::Matrix4d::Zero();
  B(0, 1) = 1;
  B(1, 0) = -1;
  B(2, 3) = 1e-3;
  B(3, 2) = -1e-3;
  CHECK(skew_spectrum(B, 0.0, 1e-6).rank == 4);
  CHECK(skew_spectrum(B, 0.0, 1e-1).rank == 2);
  CHECK(skew_spectrum(B, 0.0).rank == 4);
}

TEST_CASE("an unpaired value inside the tolerance band is ambiguous") {
  Eigen::Matrix2d B;
  B << 0, 1, -0.5, 0;
  CHECK_THROWS_AS(skew_spectrum(B, 0.0, 0.3), AmbiguousRankError);
}

TEST_CASE("skew spectrum at a point outside the domain is refused") {
  FieldConfig c = constant_config();
  c.domain = Box::centered(2, 1.0);
  const FieldSpec fs = make_field(c);
  CHECK_THROWS_AS(skew_spectrum(fs, Eigen::Vector2d(2.0, 0.0)), PreconditionError);
}

TEST_CASE("declared bounds must be complete") {
  FieldConfig c = constant_config();
  c.B_sup = 1.0;
  CHECK_THROWS_AS(make_field(c), PreconditionError);
  c.dB_sup = 0.0;
  c.V_sup = 0.0;
  c.dV_sup = 0.0;
  const FieldSpec fs = make_field(c);
  CHECK(fs.bounds().declared);
  CHECK(fs.bounds().B_sup == 1.0);
}

TEST_CASE("sampled bounds of the radial well") {
  FieldConfig c;
  c.family = "radial-well";
  c.domain = Box::centered(2, 1.0);
  const FieldSpec fs = make_field(c);
  // max of 1 + |x|^2 on [-1,1]^2 is 3 at the corners; |grad| = 2|x| <= 2 sqrt 2
  CHECK(fs.sampled_bounds().B_sup == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(fs.sampled_bounds().dB_sup <= 2.0 * std::sqrt(2.0) * 1.1);
  CHECK(fs.sampled_bounds().dB_sup >= 2.0 * std::sqrt(2.0) * 0.9);
  const FieldBounds inner = fs.bounds_on(Box::centered(2, 0.5));
  CHECK(inner.B_sup == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(inner.dB_sup < fs.sampled_bounds().dB_sup);
}

TEST_CASE("a potential whose curl is not B is rejected") {
  const FieldSpec fs = make_field(constant_config());
  const FieldSpec::VectorFn wrong = [](const Point& x) {
    Eigen::VectorXd a(2);
    a << 0.0, 2.0 * x[0];
    return a;
  };
  CHECK_THROWS_AS(fs.with_potential(wrong), PreconditionError);
  const FieldSpec::VectorFn landau = [](const Point& x) {
    Eigen::VectorXd a(2);
    a << 0.0, x[0];
    return a;
  };
  const FieldSpec fl = fs.with_potential(landau);
  CHECK(fl.A(Eigen::Vector2d(0.5, 0.0))[1] == doctest::Approx(0.5));
}
