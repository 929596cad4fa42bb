// This file is part of decolab.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.
//
// Command-line front end. `decolab run` executes a JSON-configured scenario
// and writes series.csv / summary.json; `decolab verify` cross-checks the
// closed-form evolution against the dense reference without needing a
// config file.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "decolab/run_config.hpp"
#include "decolab/runner.hpp"

namespace {

int run_command(const std::string& config_path, const std::string& out_dir,
                bool seed_given, std::uint64_t seed, bool quiet) {
  try {
    decolab::RunConfig config = decolab::load_run_config(config_path);
    if (seed_given) config.seed = seed;
    return decolab::run_scenario(config, out_dir, quiet);
  } catch (const decolab::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return decolab::kExitIo;
  } catch (const decolab::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return decolab::kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return decolab::kExitValidation;
  }
}

int verify_command(const decolab::VerifySettings& settings) {
  try {
    const decolab::VerificationReport report = decolab::run_verification(settings);
    if (!settings.quiet) std::cout << decolab::format_report(report);
    if (!report.ok()) {
      std::cerr << "verification failed: " << report.failures << " of "
                << report.checks_run << " checks exceeded tolerance\n";
      return decolab::kExitVerification;
    }
    return decolab::kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return decolab::kExitValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "decolab: closed-form decoherence dynamics for dephasing models, with a "
      "dense reference evolution for cross-checking"};
  app.set_version_flag("--version", "decolab 0.1.0");
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "./out";
  std::uint64_t seed = 0;
  bool quiet = false;

  CLI::App* run = app.add_subcommand("run", "Execute a JSON-configured scenario");
  run->add_option("--config", config_path, "Path to the JSON run configuration")
      ->required();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  CLI::Option* seed_option =
      run->add_option("--seed", seed, "Override the seed from the config");
  run->add_flag("--quiet", quiet, "Suppress progress output");

  decolab::VerifySettings settings;
  CLI::App* verify = app.add_subcommand(
      "verify", "Cross-check the closed forms against the dense evolution");
  verify
      ->add_option("--sizes", settings.env_sizes,
                   "Environment sizes to sweep (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  verify
      ->add_option("--trials", settings.trials_per_size,
                   "Random trials per environment size")
      ->capture_default_str();
  verify
      ->add_option("--tolerance", settings.tolerance,
                   "Maximum tolerated absolute deviation")
      ->capture_default_str();
  verify->add_option("--seed", settings.seed, "Sweep seed")->capture_default_str();
  verify->add_flag("--quiet", settings.quiet,
                   "Suppress the report table (exit code only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? decolab::kExitOk : decolab::kExitValidation;
  }

  if (run->parsed()) {
    return run_command(config_path, out_dir, seed_option->count() > 0, seed, quiet);
  }
  return verify_command(settings);
}
