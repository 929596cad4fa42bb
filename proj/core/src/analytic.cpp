// This file is part of decolab.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.

#include "decolab/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace decolab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559005768;

void require_matching_env(const SpinBathConfig& config, const ObservableSpec& obs) {
  if (obs.env.size() != config.n_env()) {
    throw std::invalid_argument("observable has " + std::to_string(obs.env.size()) +
                                " environment blocks for " +
                                std::to_string(config.n_env()) + " spins");
  }
}

// Product of per-spin complex factors. Large spin counts switch to
// log-magnitude plus phase accumulation so magnitudes like 1e-600 survive;
// an exactly-zero factor short-circuits the product to zero.
template <class Factor>
Complex spin_product(const SpinBathConfig& config, Factor&& factor) {
  const std::size_t n = config.n_env();
  if (n <= kLogProductSpins) {
    Complex product{1.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) product *= factor(config.spins[i]);
    return product;
  }
  double log_mag = 0.0;
  double phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex f = factor(config.spins[i]);
    const double mag = std::abs(f);
    if (mag == 0.0) return Complex{0.0, 0.0};
    log_mag += std::log(mag);
    phase = std::remainder(phase + std::arg(f), kTwoPi);
  }
  return std::polar(std::exp(log_mag), phase);
}

// Product of per-spin real factors, tracked as log-magnitude plus sign for
// large spin counts.
template <class Factor>
double real_spin_product(const SpinBathConfig& config, Factor&& factor) {
  const std::size_t n = config.n_env();
  if (n <= kLogProductSpins) {
    double product = 1.0;
    for (std::size_t i = 0; i < n; ++i) product *= factor(config.spins[i]);
    return product;
  }
  double log_mag = 0.0;
  double sign = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = factor(config.spins[i]);
    if (f == 0.0) return 0.0;
    if (f < 0.0) sign = -sign;
    log_mag += std::log(std::abs(f));
  }
  return sign * std::exp(log_mag);
}

}  // namespace

Complex overlap_r(const SpinBathConfig& config, double t) {
  const double t_over_hbar = t / config.hbar;
  return spin_product(config, [t_over_hbar](const EnvSpin& s) {
    const double p = std::norm(s.alpha);
    const double q = std::norm(s.beta);
    const double angle = s.g * t_over_hbar;
    return p * std::polar(1.0, angle) + q * std::polar(1.0, -angle);
  });
}

Complex gamma0(const SpinBathConfig& config, const ObservableSpec& obs, double t) {
  require_matching_env(config, obs);
  const double t_over_hbar = t / config.hbar;
  const std::size_t n = config.n_env();
  // Each factor is real: a real diagonal part plus a conjugate pair.
  double log_mag = 0.0;
  double sign = 1.0;
  double product = 1.0;
  const bool log_space = n > kLogProductSpins;
  for (std::size_t i = 0; i < n; ++i) {
    const EnvSpin& s = config.spins[i];
    const HermitianBlock2& e = obs.env[i];
    const Complex w = std::conj(s.alpha) * s.beta * e.off;
    const double angle = s.g * t_over_hbar;
    const double f = std::norm(s.alpha) * e.d0 + std::norm(s.beta) * e.d1 +
                     2.0 * (w.real() * std::cos(angle) + w.imag() * std::sin(angle));
    if (log_space) {
      if (f == 0.0) return Complex{0.0, 0.0};
      if (f < 0.0) sign = -sign;
      log_mag += std::log(std::abs(f));
    } else {
      product *= f;
    }
  }
  return Complex{log_space ? sign * std::exp(log_mag) : product, 0.0};
}

Complex gamma1(const SpinBathConfig& config, const ObservableSpec& obs, double t) {
  require_matching_env(config, obs);
  const double t_over_hbar = t / config.hbar;
  std::size_t index = 0;
  return spin_product(config, [&index, &obs, t_over_hbar](const EnvSpin& s) {
    const HermitianBlock2& e = obs.env[index++];
    const double angle = s.g * t_over_hbar;
    const Complex w = std::conj(s.alpha) * s.beta * e.off;
    return std::norm(s.alpha) * e.d0 * std::polar(1.0, angle) +
           std::norm(s.beta) * e.d1 * std::polar(1.0, -angle) +
           Complex{2.0 * w.real(), 0.0};
  });
}

double expectation_full(const SpinBathConfig& config, const ObservableSpec& obs,
                        double t) {
  require_matching_env(config, obs);
  const double pa = std::norm(config.a);
  const double pb = std::norm(config.b);
  // The two populations see the environment from opposite branches, which is
  // a time reversal of each other; collapsing both onto gamma0(t) is exact
  // only when every per-spin interference coefficient is real.
  const double diag = pa * obs.system.d0 * gamma0(config, obs, t).real() +
                      pb * obs.system.d1 * gamma0(config, obs, -t).real();
  const Complex s10 = std::conj(obs.system.off);
  const Complex cross = config.a * std::conj(config.b) * s10 * gamma1(config, obs, t);
  return diag + 2.0 * cross.real();
}

double expectation_s0(const SpinBathConfig& config, const HermitianBlock2& system,
                      double t) {
  const double pa = std::norm(config.a);
  const double pb = std::norm(config.b);
  const Complex s10 = std::conj(system.off);
  const Complex cross = config.a * std::conj(config.b) * s10 * overlap_r(config, t);
  return pa * system.d0 + pb * system.d1 + 2.0 * cross.real();
}

double expectation_single_env(const SpinBathConfig& config, std::size_t j,
                              const HermitianBlock2& block, double t) {
  if (j >= config.n_env()) {
    throw std::invalid_argument("environment index " + std::to_string(j) +
                                " out of range for " +
                                std::to_string(config.n_env()) + " spins");
  }
  const EnvSpin& s = config.spins[j];
  const double p = std::norm(s.alpha);
  const double q = std::norm(s.beta);
  const double mean = p * block.d0 + q * block.d1;
  const Complex w = std::conj(s.alpha) * s.beta * block.off;
  const double angle = s.g * t / config.hbar;
  // The two branches drive the observed spin with opposite phases.
  const double osc_plus = 2.0 * (w.real() * std::cos(angle) + w.imag() * std::sin(angle));
  const double osc_minus = 2.0 * (w.real() * std::cos(angle) - w.imag() * std::sin(angle));
  return std::norm(config.a) * (mean + osc_plus) + std::norm(config.b) * (mean + osc_minus);
}

double expectation(const SpinBathConfig& config, const ObservableSpec& obs, double t) {
  require_matching_env(config, obs);
  switch (obs.kind) {
    case ObservableKind::SystemOnly:
      return expectation_s0(config, obs.system, t);
    case ObservableKind::SingleEnvSpin:
      if (obs.env_index >= obs.env.size()) {
        throw std::invalid_argument("single-spin observable index out of range");
      }
      return expectation_single_env(config, obs.env_index, obs.env[obs.env_index], t);
    case ObservableKind::Full:
      break;
  }
  return expectation_full(config, obs, t);
}

ReducedState2 reduced_state(const SpinBathConfig& config, double t) {
  ReducedState2 state;
  state.p0 = std::norm(config.a);
  state.p1 = std::norm(config.b);
  state.coh = config.a * std::conj(config.b) * overlap_r(config, t);
  return state;
}

double purity(const SpinBathConfig& config, double t) {
  const double pa = std::norm(config.a);
  const double pb = std::norm(config.b);
  const double r2 = std::norm(overlap_r(config, t));
  return pa * pa + pb * pb + 2.0 * pa * pb * r2;
}

ComplexSeries overlap_series(const SpinBathConfig& config, const TimeGrid& grid) {
  return sample_complex_series(grid, [&](double t) { return overlap_r(config, t); });
}

ComplexSeries gamma1_series(const SpinBathConfig& config, const ObservableSpec& obs,
                            const TimeGrid& grid) {
  return sample_complex_series(grid, [&](double t) { return gamma1(config, obs, t); });
}

RealSeries expectation_series(const SpinBathConfig& config, const ObservableSpec& obs,
                              const TimeGrid& grid) {
  return sample_real_series(grid, [&](double t) { return expectation(config, obs, t); });
}

}  // namespace decolab
