// This file is part of decolab.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.

#include "decolab/model.hpp"

#include <cmath>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace decolab {

namespace {

bool finite(const Complex& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

double norm2(const Complex& z) { return std::norm(z); }

}  // namespace

TimeGrid::TimeGrid(double t_start_, double t_end_, std::size_t n_points_)
    : t_start(t_start_), t_end(t_end_), n_points(n_points_) {
  if (!std::isfinite(t_start) || !std::isfinite(t_end)) {
    throw std::invalid_argument("time grid endpoints must be finite");
  }
  if (!(t_end > t_start)) {
    throw std::invalid_argument("time grid requires t_end > t_start");
  }
  if (n_points < 2) {
    throw std::invalid_argument("time grid requires at least 2 points");
  }
}

std::vector<double> TimeGrid::times() const {
  std::vector<double> out;
  out.reserve(n_points);
  for (std::size_t i = 0; i < n_points; ++i) out.push_back(time_at(i));
  return out;
}

HermitianBlock2 identity_block() { return HermitianBlock2{1.0, 1.0, Complex{0.0, 0.0}}; }

std::vector<std::string> validate_config(const SpinBathConfig& config) {
  std::vector<std::string> violations;
  if (!finite(config.a) || !finite(config.b)) {
    violations.push_back("central amplitudes must be finite");
  } else {
    const double norm = norm2(config.a) + norm2(config.b);
    if (std::abs(norm - 1.0) > kNormTolerance) {
      violations.push_back("central amplitudes not normalized: |a|^2 + |b|^2 = " +
                           std::to_string(norm));
    }
  }
  if (!(config.hbar > 0.0) || !std::isfinite(config.hbar)) {
    violations.push_back("hbar must be positive and finite");
  }
  for (std::size_t i = 0; i < config.spins.size(); ++i) {
    const EnvSpin& s = config.spins[i];
    if (!finite(s.alpha) || !finite(s.beta) || !std::isfinite(s.g)) {
      violations.push_back("spin " + std::to_string(i) + " has non-finite fields");
      continue;
    }
    const double norm = norm2(s.alpha) + norm2(s.beta);
    if (std::abs(norm - 1.0) > kNormTolerance) {
      violations.push_back("spin " + std::to_string(i) +
                           " not normalized: |alpha|^2 + |beta|^2 = " +
                           std::to_string(norm));
    }
  }
  return violations;
}

void require_valid(const SpinBathConfig& config) {
  const auto violations = validate_config(config);
  if (violations.empty()) return;
  std::string message = "invalid configuration:";
  for (const auto& v : violations) message += " " + v + ";";
  message.pop_back();
  throw std::invalid_argument(message);
}

double uniform_01(std::mt19937_64& engine) {
  return double(engine() >> 11) * 0x1.0p-53;
}

namespace {

// Two independent standard Gaussians; u1 is kept away from 0 so the log is
// always finite.
std::pair<double, double> gaussian_pair(std::mt19937_64& engine) {
  const double u1 = 1.0 - uniform_01(engine);
  const double u2 = uniform_01(engine);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace

std::pair<Complex, Complex> haar_qubit(std::mt19937_64& engine) {
  for (;;) {
    const auto [g1, g2] = gaussian_pair(engine);
    const auto [g3, g4] = gaussian_pair(engine);
    const double norm = std::sqrt(g1 * g1 + g2 * g2 + g3 * g3 + g4 * g4);
    if (norm < 1e-8) continue;  // essentially impossible, but keep it exact
    return {Complex{g1 / norm, g2 / norm}, Complex{g3 / norm, g4 / norm}};
  }
}

namespace {

std::vector<EnvSpin> sample_spins(std::mt19937_64& engine, std::size_t n, double g_max) {
  std::vector<EnvSpin> spins;
  spins.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    EnvSpin spin;
    std::tie(spin.alpha, spin.beta) = haar_qubit(engine);
    spin.g = g_max * (1.0 - uniform_01(engine));  // in (0, g_max]
    spins.push_back(spin);
  }
  return spins;
}

}  // namespace

std::vector<EnvSpin> sample_environment(std::size_t n, std::uint64_t seed, double g_max) {
  if (!(g_max > 0.0) || !std::isfinite(g_max)) {
    throw std::invalid_argument("g_max must be positive and finite");
  }
  std::mt19937_64 engine(seed);
  return sample_spins(engine, n, g_max);
}

SpinBathConfig sample_spin_bath_config(std::size_t n, std::uint64_t seed, double g_max) {
  if (!(g_max > 0.0) || !std::isfinite(g_max)) {
    throw std::invalid_argument("g_max must be positive and finite");
  }
  std::mt19937_64 engine(seed);
  SpinBathConfig config;
  std::tie(config.a, config.b) = haar_qubit(engine);
  config.spins = sample_spins(engine, n, g_max);
  return config;
}

ObservableSpec observable_system_only(const HermitianBlock2& system, std::size_t n_env) {
  ObservableSpec obs;
  obs.system = system;
  obs.env.assign(n_env, identity_block());
  obs.kind = ObservableKind::SystemOnly;
  return obs;
}

ObservableSpec observable_single_env(std::size_t j, const HermitianBlock2& block,
                                     std::size_t n_env) {
  if (j >= n_env) {
    throw std::invalid_argument("environment index " + std::to_string(j) +
                                " out of range for " + std::to_string(n_env) +
                                " spins");
  }
  ObservableSpec obs;
  obs.system = identity_block();
  obs.env.assign(n_env, identity_block());
  obs.env[j] = block;
  obs.kind = ObservableKind::SingleEnvSpin;
  obs.env_index = j;
  return obs;
}

ObservableSpec make_full_observable(const HermitianBlock2& system,
                                    std::vector<HermitianBlock2> env) {
  ObservableSpec obs;
  obs.system = system;
  obs.env = std::move(env);
  obs.kind = ObservableKind::Full;
  return obs;
}

namespace {

bool is_identity(const HermitianBlock2& b) {
  return b.d0 == 1.0 && b.d1 == 1.0 && b.off == Complex{0.0, 0.0};
}

}  // namespace

std::vector<std::string> audit_observable_kind(const ObservableSpec& obs) {
  std::vector<std::string> violations;
  switch (obs.kind) {
    case ObservableKind::Full:
      break;  // no structural constraint
    case ObservableKind::SystemOnly:
      for (std::size_t i = 0; i < obs.env.size(); ++i) {
        if (!is_identity(obs.env[i])) {
          violations.push_back("system-only observable has non-identity block at spin " +
                               std::to_string(i));
        }
      }
      break;
    case ObservableKind::SingleEnvSpin:
      if (obs.env_index >= obs.env.size()) {
        violations.push_back("single-spin observable index out of range");
        break;
      }
      if (!is_identity(obs.system)) {
        violations.push_back("single-spin observable has non-identity system block");
      }
      for (std::size_t i = 0; i < obs.env.size(); ++i) {
        if (i != obs.env_index && !is_identity(obs.env[i])) {
          violations.push_back("single-spin observable has non-identity block at spin " +
                               std::to_string(i));
        }
      }
      break;
  }
  return violations;
}

}  // namespace decolab
