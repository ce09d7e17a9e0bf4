#include <doctest.h>

#include "magspec/config.hpp"

#include <string>

using namespace magspec;

namespace {

const std::string kMinimal = R"(
[field]
family = constant
domain = -4, 4

[domain]
core = -0.5, 0.5
)";

std::vector<std::string> errors_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.errors();
  }
  return {};
}

bool mentions(const std::vector<std::string>& errors, const std::string& needle) {
  for (const auto& e : errors)
    if (e.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("minimal constant-field config gets the documented defaults") {
  const ScenarioConfig c = parse_config_text(kMinimal);
  CHECK(c.field.family == "constant");
  CHECK(c.field.strengths == std::vector<double>{1.0});
  CHECK(c.field.gauge == "symmetric");
  CHECK(c.semiclassical.ladder == std::vector<double>{0.2, 0.1, 0.05});
  CHECK(c.semiclassical.window == Interval{0.0, 2.0});
  CHECK(c.domain.h_coeff == 0.3);
  CHECK(c.domain.margin_sqrt_hbar == 6.0);
  CHECK(c.solver.tol == 1e-8);
  CHECK(c.solver.seed == 7);
  CHECK(c.output.formats == std::vector<std::string>{"json", "csv"});
  CHECK(c.core() == Box::centered(2, 0.5));
}

TEST_CASE("three-rung ladder is accepted") {
  const ScenarioConfig c = parse_config_text(kMinimal + "[semiclassical]\nhbar = 0.2,0.1,0.05\n");
  CHECK(c.semiclassical.ladder == std::vector<double>{0.2, 0.1, 0.05});
  CHECK(mentions(errors_of(kMinimal + "[semiclassical]\nhbar = 0.2, 0.1\n"), "semiclassical.hbar"));
}

TEST_CASE("reversed interval names the key") {
  const auto errors = errors_of(kMinimal + "[semiclassical]\ninterval = 2.5, 1.5\n");
  REQUIRE_FALSE(errors.empty());
  CHECK(mentions(errors, "semiclassical.interval: b < a"));
  CHECK(errors.front().rfind("line ", 0) == 0);
}

TEST_CASE("unknown keys, sections and bad values are all reported") {
  const std::string text = kMinimal + R"(
[semiclassical]
lmax = six
colour = blue

[plot]
x = 1

[solver]
tol = 1
tol = 2
)";
  const auto errors = errors_of(text);
  CHECK(errors.size() >= 4);
  CHECK(mentions(errors, "semiclassical.lmax"));
  CHECK(mentions(errors, "semiclassical.colour: unknown key"));
  CHECK(mentions(errors, "unknown section [plot]"));
  CHECK(mentions(errors, "duplicate key"));
  // sorted by line
  for (std::size_t i = 1; i < errors.size(); ++i) {
    if (errors[i - 1].rfind("line ", 0) != 0 || errors[i].rfind("line ", 0) != 0) continue;
    CHECK(std::stoi(errors[i - 1].substr(5)) <= std::stoi(errors[i].substr(5)));
  }
}

TEST_CASE("lattice box must stay inside the field domain") {
  const std::string text = R"(
[field]
family = constant
domain = -1, 1
[domain]
core = -0.5, 0.5
)";
  CHECK(mentions(errors_of(text), "domain.core"));
}

TEST_CASE("test function support must stay inside the window") {
  const auto errors = errors_of(kMinimal + "[semiclassical]\nwindow = 0, 2\nphi = bump 1.5 1\n");
  CHECK(mentions(errors, "semiclassical.phi"));
}

TEST_CASE("polynomial entries and per-axis boxes") {
  const std::string text = R"(
[field]
family = polynomial
dim = 2
B12 = 1 + x1^2
domain = -4, 4, -3.5, 3.5
[domain]
core = -0.5, 0.5
)";
  const ScenarioConfig c = parse_config_text(text);
  CHECK(c.field.B_entries.at({1, 2}) == "1 + x1^2");
  CHECK(c.field_domain().hi[1] == 3.5);
}

TEST_CASE("round trip through the canonical text") {
  for (const char* name : {"constant-field.conf", "radial-well.conf"}) {
    const ScenarioConfig c = parse_config(std::string(MAGSPEC_SOURCE_DIR) + "/configs/" + name);
    const std::string text = serialize_config(c);
    const ScenarioConfig back = parse_config_text(text);
    CHECK(back == c);
    CHECK(serialize_config(back) == text);
  }
  ScenarioConfig c = parse_config_text(kMinimal);
  c.semiclassical.ladder = {0.1 + 0.2, 1.0 / 3.0, 0.05};
  c.solver.tol = 1.2345678901234567e-9;
  CHECK(parse_config_text(serialize_config(c)) == c);
}

TEST_CASE("shortest double text") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-8) == "1e-08");
  CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);
}

TEST_CASE("missing file is an error") {
  CHECK_THROWS_AS(parse_config("/nonexistent/magspec.conf"), Error);
}
