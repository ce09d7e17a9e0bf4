#pragma once

#include "magspec/eigensolver.hpp"
#include "magspec/field.hpp"
#include "magspec/test_function.hpp"
#include "magspec/verify.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace magspec {

/// Lattice box and sampling steps.
struct DomainConfig {
  std::optional<Box> core;           // defaults to the field domain
  std::optional<Box> sigma_region;   // where `sigma` samples; defaults to the field domain
  double margin_sqrt_hbar = 6.0;
  double margin_fraction = 0.25;
  double h_coeff = 0.3;
  double h_exponent = 1.0;
  double sigma_step = 0.02;
  double kset_step = 0.02;

  friend bool operator==(const DomainConfig&, const DomainConfig&) = default;
};

/// Written as `kind center width [support_lo support_hi]`.
struct PhiConfig {
  std::string kind = "bump";
  double center = 0.0;
  double width = 1.0;
  std::optional<Interval> support;

  TestFunction make() const;
  friend bool operator==(const PhiConfig&, const PhiConfig&) = default;
};

struct SemiclassicalConfig {
  std::vector<double> ladder{0.2, 0.1, 0.05};
  Interval window{0.0, 2.0};  // eigen window of H/hbar
  double lmax = 6.0;          // top of the sampled Sigma
  std::optional<double> K;    // spectrum-check window [0, K]
  std::optional<Interval> interval;
  std::optional<Interval> inner;
  std::optional<PhiConfig> phi;
  std::optional<PhiConfig> gap_phi;
  double ldos_tol = 0.1;
  std::vector<std::vector<double>> points;
  std::vector<double> radii{0.5, 1.0, 1.5, 2.0, 2.5, 3.0};  // units of sqrt(hbar)
  std::optional<Interval> projector;
  std::vector<std::vector<double>> offdiag;  // two points

  friend bool operator==(const SemiclassicalConfig&, const SemiclassicalConfig&) = default;
};

struct SolverConfig {
  double tol = 1e-8;
  int max_restarts = 400;
  int block = 6;
  int slice_max = 64;
  std::int64_t node_cap = 2'000'000;
  std::uint64_t seed = 7;
  int probes = 100;
  double probe_radius = 2.0;  // units of sqrt(hbar)

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

struct OutputConfig {
  std::string dir = "out";
  std::vector<std::string> formats{"json", "csv"};
  bool matrix = false;        // COO dump of each assembled operator
  bool eigenvectors = false;  // binary dump of each eigen window

  bool wants(const std::string& fmt) const;
  friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct ScenarioConfig {
  std::string name = "scenario";
  FieldConfig field;
  DomainConfig domain;
  SemiclassicalConfig semiclassical;
  SolverConfig solver;
  OutputConfig output;

  Box field_domain() const;
  Box core() const;
  LatticeRule rule() const;
  SolverOptions solver_options() const;
  ProbeOptions probe_options() const;
  std::vector<Point> points() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Every problem found in a config, in file order.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

/// Parses the sectioned `key = value` format. Throws ConfigError listing
/// all errors, not only the first.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config(const std::string& path);

/// Canonical text form; parse_config_text(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& cfg);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

}  // namespace magspec
