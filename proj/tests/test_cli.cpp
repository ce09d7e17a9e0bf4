#include <doctest.h>

#include "magspec/cli.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <sys/wait.h>

using namespace magspec;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("magspec_cli_" + name);
  fs::remove_all(d);
  return d;
}

ScenarioConfig shipped(const std::string& name) {
  return parse_config(std::string(MAGSPEC_SOURCE_DIR) + "/configs/" + name);
}

// Constant field with coarse rungs so the eigen solves take well under a second.
ScenarioConfig small_constant() {
  ScenarioConfig c = shipped("constant-field.conf");
  c.semiclassical.ladder = {0.4, 0.3, 0.2};
  c.field.domain = Box::centered(2, 5.0);
  c.domain.sigma_step = 0.1;
  return c;
}

int shell(const std::string& cmd) {
  const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("unknown subcommand") {
  std::ostringstream log;
  CHECK(run("plot", small_constant(), log) == kExitUsage);
  const std::string cfg = std::string(MAGSPEC_SOURCE_DIR) + "/configs/constant-field.conf";
  CHECK(shell(std::string(MAGSPEC_CLI) + " plot --config " + cfg) == 2);
  CHECK(shell(std::string(MAGSPEC_CLI) + " sigma") == 2);
}

TEST_CASE("broken config gives a failure record and exit 3") {
  const fs::path dir = fresh_dir("broken");
  fs::create_directories(dir);
  const fs::path conf = dir / "bad.conf";
  std::ofstream(conf) << "[field]\nfamily = dipole\n";
  CHECK(shell(std::string(MAGSPEC_CLI) + " sigma --config " + conf.string() + " --out " + dir.string()) == 3);
  const auto j = nlohmann::json::parse(slurp(dir / "failure.json"));
  CHECK(j["status"] == "error");
  CHECK(j["type"] == "config");
  CHECK_FALSE(j["errors"].empty());
  fs::remove_all(dir);
}

TEST_CASE("sigma on the radial well") {
  ScenarioConfig c = shipped("radial-well.conf");
  c.output.dir = fresh_dir("sigma").string();
  std::ostringstream log;
  REQUIRE(run("sigma", c, log) == kExitOk);
  const auto j = nlohmann::json::parse(slurp(fs::path(c.output.dir) / "sigma.json"));
  CHECK(j["command"] == "sigma");
  const auto& s = j["sigma"];
  const double rho = s["covering_radius"];
  REQUIRE(s["intervals"].size() == 2);
  const auto iv = s["intervals"].get<std::vector<std::vector<double>>>();
  CHECK(iv[0][0] >= 1.0 - rho - 1e-12);
  CHECK(iv[0][0] <= 1.0);
  CHECK(iv[0][1] == doctest::Approx(2.0 + rho));
  CHECK(iv[1][0] <= 3.0);
  CHECK(iv[1][1] == doctest::Approx(4.0));
  CHECK(log.str().find("[ OK ] sigma") != std::string::npos);
  fs::remove_all(c.output.dir);
}

TEST_CASE("missing key for a check is reported") {
  ScenarioConfig c = small_constant();
  c.semiclassical.interval.reset();
  c.semiclassical.inner.reset();
  c.output.dir = fresh_dir("missing").string();
  std::ostringstream log;
  CHECK(run("gap-check", c, log) == kExitError);
  CHECK(fs::exists(fs::path(c.output.dir) / "failure.json"));
  fs::remove_all(c.output.dir);
}

TEST_CASE("reports are byte identical across runs with the same seed") {
  std::string first;
  for (int pass = 0; pass < 2; ++pass) {
    ScenarioConfig c = small_constant();
    c.output.dir = fresh_dir("determinism" + std::to_string(pass)).string();
    std::ostringstream log;
    const int rc = run("ldos", c, log);
    INFO(log.str());
    CHECK(rc == kExitOk);
    std::string bytes;
    for (const char* f : {"ldos-leading.csv", "ldos-gap.csv", "offdiag-decay.csv"})
      bytes += slurp(fs::path(c.output.dir) / f);
    CHECK_FALSE(bytes.empty());
    if (pass == 0) first = bytes;
    else CHECK(bytes == first);
    fs::remove_all(c.output.dir);
  }
}
