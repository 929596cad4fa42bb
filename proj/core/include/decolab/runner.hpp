// This file is part of decolab.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.

#ifndef DECOLAB_RUNNER_HPP
#define DECOLAB_RUNNER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "decolab/run_config.hpp"

namespace decolab {

/// Process exit codes shared by the library runner and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitVerification = 2;
inline constexpr int kExitIo = 3;

/// Executes one configured run. Evolution scenarios sample their series on
/// the time grid and write series.csv plus summary.json into out_dir
/// (created if missing); the verify scenario writes summary.json with a
/// per-operation pass/fail table. Returns an exit code; failures are
/// reported on stderr. Output is byte-for-byte reproducible for identical
/// configs.
int run_scenario(const RunConfig& config, const std::string& out_dir, bool quiet);

/// Settings for the self-check sweep that compares the closed-form spin-bath
/// evolution against the dense reference evolution.
struct VerifySettings {
  std::vector<std::size_t> env_sizes{1, 2, 4, 8, 12};
  std::size_t trials_per_size = 100;
  double tolerance = 1e-10;
  std::uint64_t seed = 97;
  bool quiet = false;
};

/// Result for one cross-checked operation.
struct VerificationEntry {
  std::string operation;
  std::size_t checks = 0;
  std::size_t failures = 0;
  double max_abs_error = 0.0;
};

/// Aggregated result of a verification sweep: one row per cross-checked
/// operation plus totals.
struct VerificationReport {
  std::vector<VerificationEntry> entries;
  std::size_t checks_run = 0;
  std::size_t failures = 0;
  double max_abs_error = 0.0;
  std::string worst_case;  ///< Human-readable locus of the largest error.

  bool ok() const { return failures == 0; }
};

/// Runs the sweep: for each environment size, draws random states,
/// observables, couplings, and times, and cross-checks every closed-form
/// quantity (branch overlap, expectations of each observable kind, reduced
/// state, purity, evolved norm) against the dense evolution.
VerificationReport run_verification(const VerifySettings& settings);

/// Formats the report as an aligned text table (one line per operation).
std::string format_report(const VerificationReport& report);

}  // namespace decolab

#endif  // DECOLAB_RUNNER_HPP
