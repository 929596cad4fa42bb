// This file is part of decolab.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.

#ifndef DECOLAB_ANALYTIC_HPP
#define DECOLAB_ANALYTIC_HPP

#include <vector>

#include "decolab/model.hpp"

namespace decolab {

/// Reduced 2x2 state of the central qubit: populations and the single
/// off-diagonal (0,1) entry.
struct ReducedState2 {
  double p0 = 1.0;
  double p1 = 0.0;
  Complex coh{0.0, 0.0};
};

struct RealSeries {
  std::vector<double> t;
  std::vector<double> v;
};

struct ComplexSeries {
  std::vector<double> t;
  std::vector<Complex> v;
};

// Closed-form evaluation of the dephasing dynamics. Everything below assumes
// a configuration that passes validate_config(); the evaluation routines do
// not re-validate.

/// Branch overlap r(t): product over spins of
///   |alpha|^2 e^{i g t / hbar} + |beta|^2 e^{-i g t / hbar}.
/// Satisfies |r| <= 1, r(0) = 1 and r(-t) = conj(r(t)). Products over more
/// than kLogProductSpins spins are accumulated as log-magnitude plus phase to
/// avoid premature underflow/overflow.
Complex overlap_r(const SpinBathConfig& config, double t);

/// Environment factor multiplying the population part of a product
/// observable, for the branch anchored on |0>:
///   prod_i [ |alpha|^2 e00 + |beta|^2 e11
///            + 2 Re(conj(alpha) beta off e^{-i g t / hbar}) ].
/// Real for Hermitian blocks (returned with zero imaginary part); the |1>
/// branch value is gamma0 evaluated at -t.
Complex gamma0(const SpinBathConfig& config, const ObservableSpec& obs, double t);

/// Environment factor multiplying the interference part:
///   prod_i [ |alpha|^2 e00 e^{i g t / hbar} + |beta|^2 e11 e^{-i g t / hbar}
///            + 2 Re(conj(alpha) beta off) ].
/// Equals gamma0 at t = 0 and reduces to overlap_r for identity blocks.
Complex gamma1(const SpinBathConfig& config, const ObservableSpec& obs, double t);

/// Expectation value of a general product observable in the evolved pure
/// state:
///   |a|^2 s00 gamma0(t) + |b|^2 s11 gamma0(-t) + 2 Re[a conj(b) s10 gamma1(t)].
double expectation_full(const SpinBathConfig& config, const ObservableSpec& obs,
                        double t);

/// Expectation of an observable acting on the central qubit only:
///   |a|^2 s00 + |b|^2 s11 + 2 Re[a conj(b) s10 r(t)].
double expectation_s0(const SpinBathConfig& config, const HermitianBlock2& system,
                      double t);

/// Expectation of an observable acting on environment spin j only. Periodic
/// in t with period 2*pi*hbar/g_j.
double expectation_single_env(const SpinBathConfig& config, std::size_t j,
                              const HermitianBlock2& block, double t);

/// Dispatch on obs.kind to the specialized evaluations above.
double expectation(const SpinBathConfig& config, const ObservableSpec& obs,
                   double t);

/// Reduced state of the central qubit: populations are constant, the
/// coherence is a conj(b) r(t).
ReducedState2 reduced_state(const SpinBathConfig& config, double t);

/// Purity of the reduced state: |a|^4 + |b|^4 + 2 |a|^2 |b|^2 |r(t)|^2.
double purity(const SpinBathConfig& config, double t);

/// Spin-count threshold above which per-spin products switch to log-space
/// accumulation.
inline constexpr std::size_t kLogProductSpins = 1000;

// --- series sampling ----------------------------------------------------------

template <class F>
RealSeries sample_real_series(const TimeGrid& grid, F&& f) {
  RealSeries s;
  s.t = grid.times();
  s.v.reserve(s.t.size());
  for (double t : s.t) s.v.push_back(f(t));
  return s;
}

template <class F>
ComplexSeries sample_complex_series(const TimeGrid& grid, F&& f) {
  ComplexSeries s;
  s.t = grid.times();
  s.v.reserve(s.t.size());
  for (double t : s.t) s.v.push_back(f(t));
  return s;
}

ComplexSeries overlap_series(const SpinBathConfig& config, const TimeGrid& grid);
ComplexSeries gamma1_series(const SpinBathConfig& config, const ObservableSpec& obs,
                            const TimeGrid& grid);
RealSeries expectation_series(const SpinBathConfig& config, const ObservableSpec& obs,
                              const TimeGrid& grid);

}  // namespace decolab

#endif  // DECOLAB_ANALYTIC_HPP
