// This file is part of decolab.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.

#ifndef DECOLAB_RUN_CONFIG_HPP
#define DECOLAB_RUN_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "decolab/model.hpp"
#include "decolab/sid.hpp"
#include "decolab/timescales.hpp"

namespace decolab {

/// Thrown on malformed configuration input. The message carries a
/// JSON-pointer-style path to the offending key ("/spin_bath/a: ...").
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when a referenced file cannot be read or an output cannot be
/// written.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Which observable a spin-bath run records.
struct ObservableConfig {
  ObservableKind kind = ObservableKind::SystemOnly;
  HermitianBlock2 system;
  /// Environment block: broadcast to every spin for Full, the measured
  /// spin's block for SingleEnvSpin, unused for SystemOnly.
  HermitianBlock2 env;
  std::size_t env_index = 0;  ///< SingleEnvSpin only.
};

/// Spin-bath scenario parameters. When `spins` is empty the environment is
/// sampled deterministically from the run seed (n_env spins, couplings in
/// (0, g_max]); otherwise the explicit list is used as given.
struct SpinBathRunConfig {
  std::size_t n_env = 10;
  double g_max = 1.0;
  Complex a{0.7071067811865476, 0.0};
  Complex b{0.7071067811865476, 0.0};
  double hbar = 1.0;
  std::vector<EnvSpin> spins;
  ObservableConfig observable;
};

/// Mean-value-evolution scenario parameters. For table kernels the file
/// paths are kept so the configuration can be re-serialized.
struct SidRunConfig {
  KernelFamily kernel = LorentzianKernel{};
  std::size_t n_omega = 512;
  double omega_max = 20.0;
  double hbar = 1.0;
  std::string table_diag_path;
  std::string table_offdiag_path;
};

/// Self-check scenario parameters (closed forms vs the dense reference
/// evolution).
struct VerifyRunConfig {
  std::vector<std::size_t> sizes{1, 2, 4, 8, 12};
  std::size_t trials = 100;
  double tolerance = 1e-10;
};

enum class Scenario { SpinBath, Sid, TwoTimes, Verify };

std::string to_string(Scenario scenario);

/// A full run description, parsed from JSON.
struct RunConfig {
  Scenario scenario = Scenario::SpinBath;
  std::uint64_t seed = 1;
  TimeGrid grid{0.0, 100.0, 2001};
  SpinBathRunConfig spin_bath;
  SidRunConfig sid;
  TwoTimesScenario two_times;
  VerifyRunConfig verify;
};

/// Parses and validates a JSON run configuration. Unknown keys, sections
/// not used by the selected scenario, and invariant violations are rejected
/// with path-qualified messages. `base_dir` anchors relative table-file
/// paths (pass the directory of the config file, or "." for inline text).
RunConfig parse_run_config(const std::string& json_text, const std::string& base_dir);

/// Reads the file and parses it; relative table paths resolve against the
/// file's directory. Unreadable files raise IoError.
RunConfig load_run_config(const std::string& path);

/// Canonical JSON form of a config; parse_run_config(serialize_run_config(c))
/// reproduces c, and serializing again yields the identical string. Custom
/// (callable) kernels have no file form and are rejected.
std::string serialize_run_config(const RunConfig& config);

/// Loads a table kernel from two text files.
///
/// Diagonal file: lines "omega value"; '#' starts a comment. The omega nodes
/// must form an ascending uniform grid starting at 0.
///
/// Off-diagonal file: lines "omega omega_prime re im" referencing the same
/// nodes. Entries are mirrored Hermitian-style ((j,i) = conj (i,j));
/// specifying both halves inconsistently is an error, and omega = omega'
/// entries must be real. Unspecified entries are zero.
TableKernel load_table_kernel(const std::string& diag_path,
                              const std::string& offdiag_path);

/// The spin-bath model a run config describes (samples the environment from
/// the seed when no explicit spins are given).
SpinBathConfig realize_spin_bath(const SpinBathRunConfig& config, std::uint64_t seed);

/// The observable a run config describes, for an environment of n_env spins.
ObservableSpec realize_observable(const ObservableConfig& config, std::size_t n_env);

}  // namespace decolab

#endif  // DECOLAB_RUN_CONFIG_HPP
