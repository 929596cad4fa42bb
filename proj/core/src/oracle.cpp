// This file is part of decolab.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.

#include "decolab/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace decolab {

namespace {

void require_capacity(std::size_t n_env) {
  if (n_env > kMaxOracleSpins) {
    throw CapacityError("dense evolution supports at most " +
                        std::to_string(kMaxOracleSpins) + " environment spins, got " +
                        std::to_string(n_env));
  }
}

// Compensated accumulator for one real component.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

// Environment-amplitude table: entry e is the product over spins of the
// amplitude selected by bit i of e (0 -> alpha/up, 1 -> beta/down).
std::vector<Complex> env_amplitudes(const SpinBathConfig& config) {
  std::vector<Complex> env{Complex{1.0, 0.0}};
  for (std::size_t i = 0; i < config.n_env(); ++i) {
    const std::size_t size = env.size();
    env.resize(size * 2);
    for (std::size_t e = 0; e < size; ++e) {
      const Complex base = env[e];
      env[e] = base * config.spins[i].alpha;
      env[size + e] = base * config.spins[i].beta;  // bit i set
    }
  }
  return env;
}

// Sum of g_i * sigma_i per environment basis state (sigma +1 for bit 0 / up).
std::vector<double> env_energies(const SpinBathConfig& config) {
  std::vector<double> energy{0.0};
  for (std::size_t i = 0; i < config.n_env(); ++i) {
    const std::size_t size = energy.size();
    energy.resize(size * 2);
    for (std::size_t e = 0; e < size; ++e) {
      const double base = energy[e];
      energy[e] = base + config.spins[i].g;
      energy[size + e] = base - config.spins[i].g;
    }
  }
  return energy;
}

// In-place application of a 2x2 Hermitian block to one tensor slot, given by
// the bit position of that slot in the amplitude index.
void apply_block_on_bit(std::vector<Complex>& amp, std::size_t bit,
                        const HermitianBlock2& block) {
  const std::size_t mask = std::size_t(1) << bit;
  const Complex m01 = block.off;
  const Complex m10 = std::conj(block.off);
  for (std::size_t idx = 0; idx < amp.size(); ++idx) {
    if (idx & mask) continue;
    const Complex x0 = amp[idx];
    const Complex x1 = amp[idx | mask];
    amp[idx] = block.d0 * x0 + m01 * x1;
    amp[idx | mask] = m10 * x0 + block.d1 * x1;
  }
}

}  // namespace

FullState build_initial(const SpinBathConfig& config) {
  require_capacity(config.n_env());
  const std::size_t n = config.n_env();
  FullState state;
  state.n_env = n;
  const std::vector<Complex> env = env_amplitudes(config);
  state.amp.resize(env.size() * 2);
  for (std::size_t e = 0; e < env.size(); ++e) {
    state.amp[e] = config.a * env[e];
    state.amp[(std::size_t(1) << n) | e] = config.b * env[e];
  }
  return state;
}

FullState evolve(const FullState& state, const SpinBathConfig& config, double t) {
  if (config.n_env() != state.n_env) {
    throw std::invalid_argument("configuration and state disagree on spin count");
  }
  const std::vector<double> energy = env_energies(config);
  const double half_angle = t / (2.0 * config.hbar);
  FullState out;
  out.n_env = state.n_env;
  out.amp.resize(state.amp.size());
  const std::size_t env_size = energy.size();
  for (std::size_t e = 0; e < env_size; ++e) {
    const Complex phase = std::polar(1.0, half_angle * energy[e]);
    out.amp[e] = state.amp[e] * phase;
    out.amp[env_size | e] = state.amp[env_size | e] * std::conj(phase);
  }
  return out;
}

FullState apply_observable(const FullState& state, const ObservableSpec& obs) {
  if (obs.env.size() != state.n_env) {
    throw std::invalid_argument("observable has " + std::to_string(obs.env.size()) +
                                " environment blocks for " +
                                std::to_string(state.n_env) + " spins");
  }
  FullState out = state;
  apply_block_on_bit(out.amp, state.n_env, obs.system);
  for (std::size_t i = 0; i < obs.env.size(); ++i) {
    apply_block_on_bit(out.amp, i, obs.env[i]);
  }
  return out;
}

Complex inner_product(const FullState& x, const FullState& y) {
  if (x.amp.size() != y.amp.size()) {
    throw std::invalid_argument("states have different dimensions");
  }
  KahanSum re;
  KahanSum im;
  for (std::size_t i = 0; i < x.amp.size(); ++i) {
    const Complex term = std::conj(x.amp[i]) * y.amp[i];
    re.add(term.real());
    im.add(term.imag());
  }
  return Complex{re.sum, im.sum};
}

double expectation(const FullState& state, const ObservableSpec& obs) {
  return inner_product(state, apply_observable(state, obs)).real();
}

ReducedState2 partial_trace(const FullState& state) {
  const std::size_t env_size = std::size_t(1) << state.n_env;
  KahanSum p0;
  KahanSum p1;
  KahanSum coh_re;
  KahanSum coh_im;
  for (std::size_t e = 0; e < env_size; ++e) {
    const Complex a0 = state.amp[e];
    const Complex a1 = state.amp[env_size | e];
    p0.add(std::norm(a0));
    p1.add(std::norm(a1));
    const Complex term = a0 * std::conj(a1);
    coh_re.add(term.real());
    coh_im.add(term.imag());
  }
  ReducedState2 reduced;
  reduced.p0 = p0.sum;
  reduced.p1 = p1.sum;
  reduced.coh = Complex{coh_re.sum, coh_im.sum};
  return reduced;
}

double state_norm(const FullState& state) {
  KahanSum sum;
  for (const Complex& a : state.amp) sum.add(std::norm(a));
  return std::sqrt(sum.sum);
}

Complex environment_overlap(const SpinBathConfig& config, double t) {
  require_capacity(config.n_env());
  const double half_angle = t / (2.0 * config.hbar);
  // Branch vectors built entry by entry: branch 0 advances each spin's
  // up-phase, branch 1 retards it.
  std::vector<Complex> branch0{Complex{1.0, 0.0}};
  std::vector<Complex> branch1{Complex{1.0, 0.0}};
  for (std::size_t i = 0; i < config.n_env(); ++i) {
    const EnvSpin& s = config.spins[i];
    const Complex phase = std::polar(1.0, half_angle * s.g);
    const std::size_t size = branch0.size();
    branch0.resize(size * 2);
    branch1.resize(size * 2);
    for (std::size_t e = 0; e < size; ++e) {
      const Complex b0 = branch0[e];
      const Complex b1 = branch1[e];
      branch0[e] = b0 * s.alpha * phase;
      branch0[size + e] = b0 * s.beta * std::conj(phase);
      branch1[e] = b1 * s.alpha * std::conj(phase);
      branch1[size + e] = b1 * s.beta * phase;
    }
  }
  KahanSum re;
  KahanSum im;
  for (std::size_t e = 0; e < branch0.size(); ++e) {
    const Complex term = std::conj(branch1[e]) * branch0[e];
    re.add(term.real());
    im.add(term.imag());
  }
  return Complex{re.sum, im.sum};
}

}  // namespace decolab
