// Acceptance battery: one PASS/FAIL line per criterion, printed at the end.
#include "magspec/cli.hpp"
#include "magspec/config.hpp"
#include "magspec/gauge.hpp"
#include "magspec/verify.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace magspec;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int id;
  std::string name;
  bool pass;
  std::string detail;
  double seconds;
};

std::vector<Outcome> outcomes;

std::string num(double x, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

template <class F>
void criterion(int id, const std::string& name, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::cout << "-- criterion " << id << ": " << name << std::endl;
  bool pass = false;
  std::string detail;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    pass = false;
    detail = std::string("error: ") + e.what();
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "   " << detail << " (" << num(dt, 3) << " s)" << std::endl;
  outcomes.push_back({id, name, pass, detail, dt});
}

void print_report(const CheckReport& r) {
  std::cout << "   " << r.check << ": " << (r.pass ? "pass" : "fail") << ", " << r.verdict << "\n";
  for (const auto& n : r.notes) std::cout << "     note: " << n << "\n";
}

ScenarioConfig scenario(const std::string& name) {
  return parse_config(std::string(MAGSPEC_SOURCE_DIR) + "/configs/" + name);
}

// Sampled set over the largest lattice box of the ladder.
SigmaApprox lattice_sigma(const ScenarioConfig& cfg, const FieldSpec& fs) {
  const double hmax = *std::max_element(cfg.semiclassical.ladder.begin(), cfg.semiclassical.ladder.end());
  return sample_sigma(fs, cfg.rule().box(hmax), cfg.semiclassical.lmax, cfg.domain.sigma_step);
}

FieldSpec constant_field(const std::string& gauge, double half_width) {
  FieldConfig c;
  c.family = "constant";
  c.gauge = gauge;
  c.domain = Box::centered(2, half_width);
  return make_field(c);
}

// ---------------------------------------------------------------- 1

bool landau_ladder(std::string& detail) {
  const double hbar = 0.05;
  const FieldSpec fs = constant_field("symmetric", 4.0);
  const GridSpec grid(Box::centered(2, 1.5), {255, 255});
  const LatticeOperator op = assemble(fs, grid, hbar);
  const EigenWindowResult ew = eigs_window(op, {0.0, 5.5});
  if (!ew.complete_flag) {
    detail = "eigen window not certified complete";
    return false;
  }

  // clusters: runs of at least three eigenvalues with consecutive spacing <= 1e-3
  std::vector<std::vector<double>> clusters;
  std::vector<double> run{ew.lambda[0]};
  for (Eigen::Index i = 1; i <= ew.count(); ++i) {
    if (i < ew.count() && ew.lambda[i] - ew.lambda[i - 1] <= 1e-3) {
      run.push_back(ew.lambda[i]);
      continue;
    }
    if (run.size() >= 3) clusters.push_back(run);
    if (i < ew.count()) run = {ew.lambda[i]};
  }
  bool ok = clusters.size() >= 3;
  double worst = 0.0;
  for (std::size_t k = 0; k < std::min<std::size_t>(3, clusters.size()); ++k) {
    const double level = 2.0 * k + 1.0;
    for (double v : clusters[k]) worst = std::max(worst, std::abs(v - level));
    std::cout << "   cluster " << k << ": " << clusters[k].size() << " eigenvalues in [" << num(clusters[k].front(), 6)
              << ", " << num(clusters[k].back(), 6) << "]\n";
  }
  ok = ok && worst <= 2e-2;

  // Bulk degeneracy per level: count eigenvalues between the neighbouring
  // mid-gap energies (2k, 2k+2), which takes in every state of level k plus
  // edge states. With N = rho A + beta P + O(1), box doubling gives
  // rho A = (N(2L) - 2 N(L)) / 2.
  const double expected = 1.0 * 9.0 / (2.0 * std::numbers::pi * hbar);
  const GridSpec doubled(Box::centered(2, 3.0), {511, 511});
  const LatticeOperator big = assemble(fs, doubled, hbar);
  double worst_rel = 0.0;
  std::string counts;
  for (int k = 0; k < 3; ++k) {
    auto cell = [&](const LatticeOperator& o) {
      return count_below(o.matrix, (2.0 * k + 2.0) * hbar) - count_below(o.matrix, 2.0 * k * hbar);
    };
    const Eigen::Index n1 = cell(op), n2 = cell(big);
    const double bulk = 0.5 * static_cast<double>(n2 - 2 * n1);
    worst_rel = std::max(worst_rel, std::abs(bulk - expected) / expected);
    counts += (k ? ", " : "") + std::to_string(n1) + "/" + std::to_string(n2) + " -> " + num(bulk);
  }
  ok = ok && worst_rel <= 0.1;
  detail = "max |lambda - (2k+1)| = " + num(worst) + " (tol 2e-2); degeneracy N(L)/N(2L) -> bulk: " + counts +
           " vs " + num(expected) + ", max rel. error " + num(worst_rel) + " (tol 0.1)";
  return ok;
}

// ---------------------------------------------------------------- 2

bool skew_oracle(std::string& detail) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g;
  double worst = 0.0;
  int failures = 0;
  const int dims[] = {2, 4, 6};
  for (int t = 0; t < 200; ++t) {
    const int d = dims[t % 3];
    Eigen::MatrixXd m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = g(rng);
    const Eigen::MatrixXd B = m - m.transpose();
    const ModelSpectrum ms = skew_spectrum(B, 0.0);
    std::vector<double> ours;
    for (double a : ms.a) {
      ours.push_back(a);
      ours.push_back(-a);
    }
    for (int z = 0; z < ms.zero_modes; ++z) ours.push_back(0.0);
    std::sort(ours.begin(), ours.end());
    const Eigen::MatrixXcd iB = std::complex<double>(0.0, 1.0) * B.cast<std::complex<double>>();
    const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(iB, Eigen::EigenvaluesOnly).eigenvalues();
    if (static_cast<Eigen::Index>(ours.size()) != ref.size()) {
      ++failures;
      continue;
    }
    for (Eigen::Index i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(ours[i] - ref[i]));
  }
  detail = "200 matrices, d in {2,4,6}: max elementwise difference " + num(worst) + " (tol 1e-10), size mismatches " +
           std::to_string(failures);
  return failures == 0 && worst <= 1e-10;
}

// ---------------------------------------------------------------- 3

bool gauge_exactness(std::string& detail) {
  const ScenarioConfig cfg = scenario("constant-field.conf");
  const FieldSpec fs = make_field(cfg.field);
  const double hbar = 0.2;
  const GridSpec grid(Box::centered(2, 1.5), {24, 24});
  const LatticeOperator op = assemble(fs, grid, hbar);
  // The double-precision dense solver alone drifts by ~100 eps ||H|| on
  // this size, so the comparison runs in extended precision.
  using MatrixXcl = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
  using Solver = Eigen::SelfAdjointEigenSolver<MatrixXcl>;
  using SolverD = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>;
  const auto spectrum = [](const LatticeOperator& o) {
    const MatrixXcl m = Eigen::MatrixXcd(o.matrix).cast<std::complex<long double>>();
    return Eigen::VectorXd(Solver(m, Eigen::EigenvaluesOnly).eigenvalues().cast<double>());
  };
  const Eigen::VectorXd base = spectrum(op);
  const Eigen::VectorXd base_d = SolverD(Eigen::MatrixXcd(op.matrix), Eigen::EigenvaluesOnly).eigenvalues();
  const double norm = op.norm_bound();
  const double eps = std::numeric_limits<double>::epsilon();

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0, worst_d = 0.0;
  for (int t = 0; t < 20; ++t) {
    // smooth random chi: a few plane waves plus a quadratic
    double c[12];
    for (double& v : c) v = u(rng);
    const auto chi = [c](const Point& x) {
      double s = c[0] * x[0] * x[0] + c[1] * x[0] * x[1] + c[2] * x[1] * x[1];
      for (int k = 0; k < 3; ++k) s += c[3 + 3 * k] * std::sin(2.0 * c[4 + 3 * k] * x[0] + 2.0 * c[5 + 3 * k] * x[1] + k);
      return 2.0 * s;
    };
    const LatticeOperator moved = gauge_transform(op, chi);
    worst = std::max(worst, (spectrum(moved) - base).cwiseAbs().maxCoeff());
    const Eigen::VectorXd ev_d = SolverD(Eigen::MatrixXcd(moved.matrix), Eigen::EigenvaluesOnly).eigenvalues();
    worst_d = std::max(worst_d, (ev_d - base_d).cwiseAbs().maxCoeff());
  }
  const double tol = 10.0 * eps * norm;
  const bool eig_ok = worst <= tol;

  // radial condition on polynomial fields
  std::vector<FieldSpec> fields;
  {
    FieldConfig c;
    c.family = "polynomial";
    c.domain = Box::centered(2, 2.0);
    c.B_entries[{1, 2}] = "1 + x1^2 - 0.4*x1*x2 + 0.2*x2^3";
    fields.push_back(make_field(c));
    FieldConfig c4;
    c4.family = "polynomial";
    c4.dim = 4;
    c4.domain = Box::centered(4, 2.0);
    // closed: B = dA for A = (x2 x3, x1^2, x2 x4, x1 x3^2) plus constants
    c4.B_entries[{1, 2}] = "1 + 2*x1 - x3";
    c4.B_entries[{1, 3}] = "-x2";
    c4.B_entries[{1, 4}] = "x3^2";
    c4.B_entries[{2, 3}] = "x4";
    c4.B_entries[{3, 4}] = "2 + 2*x1*x3 - x2";
    fields.push_back(make_field(c4));
  }
  double radial = 0.0;
  for (int p = 0; p < 1000; ++p) {
    const FieldSpec& f = fields[p % 2];
    const int d = f.dim();
    Point x0(d), Z(d);
    for (int j = 0; j < d; ++j) {
      x0[j] = 0.5 * u(rng);
      Z[j] = u(rng);
    }
    radial = std::max(radial, std::abs(Z.dot(transverse_potential(f, x0, Z))));
  }
  const bool radial_ok = radial <= 1e-12;

  FieldConfig cq;
  cq.family = "polynomial";
  cq.domain = Box::centered(2, 2.0);
  cq.B_entries[{1, 2}] = "1 + x1^2";
  const TaylorOrderResult tr = verify_taylor_order(make_field(cq), Point::Zero(2),
                                                   {Eigen::Vector2d(1, 0), Eigen::Vector2d(0.6, 0.8)},
                                                   {0.4, 0.2, 0.1, 0.05, 0.025});
  const bool taylor_ok = !tr.exact && tr.slope >= 1.9;

  std::cout << "   double-precision dense solver drift (instrument noise): " << num(worst_d) << "\n";
  detail = "eigenvalue drift " + num(worst) + " vs 10 eps ||H|| = " + num(tol) + "; radial |<Z,A>| max " + num(radial) +
           " (tol 1e-12, 1000 probes); Taylor slope " + num(tr.slope) + " (>= 1.9)";
  return eig_ok && radial_ok && taylor_ok;
}

// ---------------------------------------------------------------- 4..7 radial well

struct RadialRun {
  ScenarioConfig cfg = scenario("radial-well.conf");
  FieldSpec fs = make_field(cfg.field);
  Experiment ex{fs, cfg.rule(), cfg.solver_options()};
};

bool spectrum_inclusion(RadialRun& r, std::string& detail) {
  const auto& sc = r.cfg.semiclassical;
  const SigmaApprox sa = lattice_sigma(r.cfg, r.fs);
  const ScalingReport rep = check_spectrum_inclusion(r.ex, sa, sc.ladder, *sc.K);
  print_report(rep);
  for (const auto& row : rep.rows)
    std::cout << "   hbar " << num(row[0]) << ": D = " << num(row[1]) << ", " << num(row[2]) << " eigenvalues, "
              << num(row[3]) << " wall states excluded\n";
  const double alpha = rep.metrics.at("alpha");
  detail = "window [0, " + num(*sc.K) + "], rho " + num(sa.covering_radius) + "; fitted alpha " +
           (std::isnan(alpha) ? std::string("not identifiable (D = 0 on every rung)") : num(alpha)) +
           "; proven 1.25, conjectured 1.5";
  return rep.pass;
}

bool gap_discreteness(RadialRun& r, std::string& detail) {
  const auto& sc = r.cfg.semiclassical;
  const CheckReport rep = check_gap_discreteness(r.ex, *sc.interval, *sc.inner, sc.ladder, r.cfg.probe_options());
  print_report(rep);
  detail = rep.verdict;
  return rep.pass;
}

bool localization(RadialRun& r, std::string& detail) {
  const auto& sc = r.cfg.semiclassical;
  const LocalizationReport rep = check_localization(r.ex, *sc.interval, *sc.inner, sc.ladder, sc.radii);
  print_report(rep);
  detail = rep.verdict;
  return rep.pass;
}

// ---------------------------------------------------------------- 7, 8, 9 constant field

struct ConstantRun {
  ScenarioConfig cfg = scenario("constant-field.conf");
  FieldSpec fs = make_field(cfg.field);
  Experiment ex{fs, cfg.rule(), cfg.solver_options()};
};

bool ldos_leading(ConstantRun& c, RadialRun& r, std::string& detail) {
  const auto& cs = c.cfg.semiclassical;
  const ScalingReport cl = check_ldos_leading(c.ex, cs.phi->make(), c.cfg.points(), cs.ladder, cs.ldos_tol);
  print_report(cl);
  const CheckReport cg =
      check_ldos_gap(c.ex, cs.gap_phi->make(), lattice_sigma(c.cfg, c.fs), c.cfg.points(), cs.ladder, c.cfg.solver.tol);
  print_report(cg);
  const auto& rs = r.cfg.semiclassical;
  const ScalingReport rl = check_ldos_leading(r.ex, rs.phi->make(), r.cfg.points(), rs.ladder, rs.ldos_tol);
  print_report(rl);

  // well bottom: reported, not asserted
  const ScalingReport origin = check_ldos_leading(r.ex, rs.phi->make(), {Point::Zero(2)}, rs.ladder, rs.ldos_tol);
  std::cout << "   info: radial well at the origin: error " << num(origin.metrics.at("err_at_smallest_hbar"))
            << " at hbar " << num(rs.ladder.back()) << ", beta " << num(origin.metrics.at("beta")) << "\n";

  detail = "constant: " + cl.verdict + "; gap: " + cg.verdict + "; radial (|x| = 0.75): " + rl.verdict;
  return cl.pass && cg.pass && rl.pass;
}

bool offdiag(ConstantRun& c, std::string& detail) {
  const auto& cs = c.cfg.semiclassical;
  const auto& p = cs.offdiag;
  const Point x0 = Eigen::Map<const Eigen::VectorXd>(p[0].data(), p[0].size());
  const Point x1 = Eigen::Map<const Eigen::VectorXd>(p[1].data(), p[1].size());
  const CheckReport rep = check_offdiag_decay(c.ex, *cs.projector, lattice_sigma(c.cfg, c.fs), x0, x1, cs.ladder);
  print_report(rep);
  detail = "separation " + num((x1 - x0).norm()) + ": " + rep.verdict;
  return rep.pass && rep.metrics.at("rate") > 0.0 && rep.metrics.at("max_residual_log10") <= 0.5;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool infrastructure(ConstantRun& c, std::string& detail) {
  // trace identity on the finest rung
  const auto& cs = c.cfg.semiclassical;
  const EigenWindowResult ew = c.ex.eigs(cs.ladder.back(), cs.window);
  const TestFunction phi = cs.phi->make();
  const double trace = trace_phi(ew, phi);
  const double integral = ldos_field(ew, phi).sum() * ew.grid.cell_volume();
  const double trace_err = std::abs(integral - trace) / std::abs(trace);

  // distance transform against brute force
  std::mt19937_64 rng(64);
  int mismatches = 0;
  for (int t = 0; t < 8; ++t) {
    NodeGrid g;
    const Eigen::Index n = 64 - 8 * (t % 4);
    g.origin = Eigen::Vector2d(0, 0);
    g.spacing = Eigen::Vector2d(0.1, 0.1);
    g.counts = {n, 64};
    g.extent = Box(g.origin, Eigen::Vector2d(0.1 * (n - 1), 6.3));
    std::bernoulli_distribution coin(t < 4 ? 0.003 : 0.05);
    std::vector<std::uint8_t> mask(g.size());
    for (auto& m : mask) m = coin(rng);
    mask[rng() % mask.size()] = 1;
    const DistanceField df = distance_transform(g, mask);
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      const auto a = g.multi_index(i);
      long best = std::numeric_limits<long>::max();
      for (Eigen::Index q = 0; q < g.size(); ++q)
        if (mask[q]) {
          const auto b = g.multi_index(q);
          const long dx = long(a[0] - b[0]), dy = long(a[1] - b[1]);
          best = std::min(best, dx * dx + dy * dy);
        }
      if (df.values[i] != std::sqrt(double(best)) * 0.1) ++mismatches;
    }
  }

  // config round trip
  bool round_trip = true;
  for (const char* name : {"constant-field.conf", "radial-well.conf"}) {
    const ScenarioConfig cfg = scenario(name);
    const std::string text = serialize_config(cfg);
    round_trip = round_trip && parse_config_text(text) == cfg && serialize_config(parse_config_text(text)) == text;
  }

  // determinism: the ldos battery twice from scratch, CSV bytes compared
  std::string bytes[2];
  bool runs_ok = true;
  for (int k = 0; k < 2; ++k) {
    ScenarioConfig cfg = c.cfg;
    cfg.output.dir = (fs::temp_directory_path() / ("magspec_acceptance_" + std::to_string(k))).string();
    fs::remove_all(cfg.output.dir);
    std::ostringstream log;
    runs_ok = runs_ok && run("ldos", cfg, log) == kExitOk;
    for (const char* f : {"ldos-leading.csv", "ldos-gap.csv", "offdiag-decay.csv"})
      bytes[k] += slurp(fs::path(cfg.output.dir) / f);
    fs::remove_all(cfg.output.dir);
  }
  const bool identical = runs_ok && !bytes[0].empty() && bytes[0] == bytes[1];

  detail = "trace identity rel. error " + num(trace_err) + " (tol 1e-10); distance transform mismatches " +
           std::to_string(mismatches) + " on 8 grids <= 64^2; config round trip " + (round_trip ? "exact" : "BROKEN") +
           "; re-run " + (identical ? "byte-identical" : "DIFFERS");
  return trace_err <= 1e-10 && mismatches == 0 && round_trip && identical;
}

}  // namespace

int main() {
  set_num_threads(static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));
  const auto t0 = std::chrono::steady_clock::now();

  criterion(1, "Landau ladder", landau_ladder);
  criterion(2, "skew-spectrum oracle", skew_oracle);
  criterion(3, "gauge exactness", gauge_exactness);

  RadialRun radial;
  ConstantRun constant;
  criterion(4, "spectrum inclusion", [&](std::string& d) { return spectrum_inclusion(radial, d); });
  criterion(5, "gap discreteness and probe bound", [&](std::string& d) { return gap_discreteness(radial, d); });
  criterion(6, "eigenfunction localization", [&](std::string& d) { return localization(radial, d); });
  criterion(7, "LDOS leading order", [&](std::string& d) { return ldos_leading(constant, radial, d); });
  criterion(8, "off-diagonal decay", [&](std::string& d) { return offdiag(constant, d); });
  criterion(9, "infrastructure", [&](std::string& d) { return infrastructure(constant, d); });

  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "\n";
  int failed = 0;
  for (const auto& o : outcomes) {
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << o.id << " (" << o.name << ", " << num(o.seconds, 3)
              << " s): " << o.detail << "\n";
    failed += o.pass ? 0 : 1;
  }
  std::cout << "total " << num(total, 4) << " s, " << failed << " failed\n";
  return failed == 0 ? 0 : 1;
}
