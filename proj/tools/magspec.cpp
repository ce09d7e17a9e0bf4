#include "magspec/cli.hpp"
#include "magspec/core.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Semiclassical spectral predictions for magnetic Schroedinger operators, checked on a lattice."};
  std::string command, config, out;
  std::optional<std::uint64_t> seed;
  int threads = 1;

  std::string names;
  for (const auto& s : magspec::subcommands()) names += (names.empty() ? "" : ", ") + s;
  app.add_option("command", command, "One of: " + names)->required();
  app.add_option("--config", config, "Scenario config file")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out, "Output directory (overrides output.dir)");
  app.add_option("--seed", seed, "Random seed (overrides solver.seed)");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return magspec::kExitUsage;
  }

  const auto& subs = magspec::subcommands();
  if (std::find(subs.begin(), subs.end(), command) == subs.end()) {
    std::cerr << "unknown command '" << command << "'\n\n" << app.help();
    return magspec::kExitUsage;
  }

  magspec::ScenarioConfig cfg;
  try {
    cfg = magspec::parse_config(config);
  } catch (const std::exception& e) {
    std::cerr << magspec::write_failure(out, command, e) << "\n";
    return magspec::kExitError;
  }
  if (!out.empty()) cfg.output.dir = out;
  if (seed) cfg.solver.seed = *seed;
  magspec::set_num_threads(threads);
  return magspec::run(command, cfg, std::cout);
}
