#include "obsequiv/scenario.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char **argv) {
  CLI::App app{"Observational-equivalence lab: run scenario files of systems, processes and checks"};
  app.require_subcommand(1);

  auto *run = app.add_subcommand("run", "Run every task of a scenario file");
  std::string scenario;
  std::string out = "out";
  std::string format = "json";
  std::uint64_t seed = 0;
  unsigned jobs = 0;
  run->add_option("scenario", scenario, "Scenario file (JSON, comments allowed)")->required();
  run->add_option("--out", out, "Output directory")->capture_default_str();
  auto *seed_opt = run->add_option("--seed", seed, "Override the scenario's master seed");
  run->add_option("--jobs", jobs, "Worker threads (default: $OBSEQUIV_JOBS or 1)");
  run->add_option("--format", format, "Artifacts to write")
      ->check(CLI::IsMember({"json", "csv", "both"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    // CLI11 uses exit code 0 for --help; map every other usage error to 2.
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  obsequiv::RunOptions options;
  options.out = out;
  options.format = obsequiv::parse_format(format);
  if (*seed_opt)
    options.seed = seed;
  if (jobs == 0) {
    if (const char *env = std::getenv("OBSEQUIV_JOBS")) {
      try {
        jobs = static_cast<unsigned>(std::stoul(env));
      } catch (const std::exception &) {
        std::cerr << "OBSEQUIV_JOBS: expected a positive integer\n";
        return 2;
      }
    }
  }
  options.jobs = jobs == 0 ? 1 : jobs;
  return obsequiv::run_scenario(scenario, options, std::cout, std::cerr);
}
