// This file is part of decolab.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.

#ifndef DECOLAB_MODEL_HPP
#define DECOLAB_MODEL_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace decolab {

using Complex = std::complex<double>;

/// One environment spin: local state amplitudes (alpha -> up, beta -> down)
/// and its coupling frequency g to the central two-level system.
struct EnvSpin {
  Complex alpha{1.0, 0.0};
  Complex beta{0.0, 0.0};
  double g = 0.0;
};

/// Central qubit amplitudes (a -> |0>, b -> |1>), the environment spin list,
/// and the action scale used to convert rates to times. Amplitudes must be
/// normalized; configurations that fail validation are rejected, never
/// renormalized on the caller's behalf.
struct SpinBathConfig {
  Complex a{1.0, 0.0};
  Complex b{0.0, 0.0};
  std::vector<EnvSpin> spins;
  double hbar = 1.0;

  std::size_t n_env() const { return spins.size(); }
};

/// 2x2 Hermitian block. `d0`/`d1` are the diagonal entries and `off` is the
/// (0,1) entry; the (1,0) entry is implicitly conj(off).
struct HermitianBlock2 {
  double d0 = 1.0;
  double d1 = 1.0;
  Complex off{0.0, 0.0};
};

HermitianBlock2 identity_block();

enum class ObservableKind { Full, SystemOnly, SingleEnvSpin };

/// Product observable: one 2x2 block for the central system and one per
/// environment spin. `kind` records which structural family it belongs to
/// (general product, identity environment, or identity everywhere except one
/// environment site given by `env_index`).
struct ObservableSpec {
  HermitianBlock2 system;
  std::vector<HermitianBlock2> env;
  ObservableKind kind = ObservableKind::Full;
  std::size_t env_index = 0;  // meaningful for SingleEnvSpin only
};

/// Uniform time grid with at least two points.
struct TimeGrid {
  TimeGrid(double t_start, double t_end, std::size_t n_points);

  double t_start;
  double t_end;
  std::size_t n_points;

  double dt() const { return (t_end - t_start) / double(n_points - 1); }
  double time_at(std::size_t i) const { return t_start + double(i) * dt(); }
  std::vector<double> times() const;
};

/// Collect human-readable constraint violations; an empty result means the
/// configuration is usable by every evaluation routine.
std::vector<std::string> validate_config(const SpinBathConfig& config);

/// Throw std::invalid_argument listing all violations, if any.
void require_valid(const SpinBathConfig& config);

/// Tolerance applied to the |.|^2 normalization checks above.
inline constexpr double kNormTolerance = 1e-12;

// --- deterministic sampling -------------------------------------------------
//
// All sampling is a pure function of (inputs, seed): the engine is the
// standardized mt19937_64 and the uniform/Gaussian transforms below are
// implemented here rather than taken from the standard library, whose
// distributions are permitted to differ between implementations.

/// Uniform double in [0, 1) from the top 53 bits of the engine output.
double uniform_01(std::mt19937_64& engine);

/// State of a single spin drawn uniformly from the unit sphere of C^2
/// (two complex Gaussian components, normalized). Returns {alpha, beta}.
std::pair<Complex, Complex> haar_qubit(std::mt19937_64& engine);

/// n independent spins with uniform states and couplings uniform on
/// (0, g_max]: the coupling never comes out exactly zero.
std::vector<EnvSpin> sample_environment(std::size_t n, std::uint64_t seed,
                                        double g_max);

/// Full configuration with uniformly drawn central amplitudes as well.
SpinBathConfig sample_spin_bath_config(std::size_t n, std::uint64_t seed,
                                       double g_max);

// --- observable constructors --------------------------------------------------

/// Observable acting as `system` on the central qubit and as the identity on
/// all n environment spins.
ObservableSpec observable_system_only(const HermitianBlock2& system,
                                      std::size_t n_env);

/// Observable acting as `block` on environment spin j and as the identity
/// everywhere else. Throws std::invalid_argument when j >= n_env.
ObservableSpec observable_single_env(std::size_t j, const HermitianBlock2& block,
                                     std::size_t n_env);

/// General product observable.
ObservableSpec make_full_observable(const HermitianBlock2& system,
                                    std::vector<HermitianBlock2> env);

/// Structural audit: does the block content actually match the declared kind?
/// Returns violation messages (empty when consistent).
std::vector<std::string> audit_observable_kind(const ObservableSpec& obs);

}  // namespace decolab

#endif  // DECOLAB_MODEL_HPP
