// This file is part of decolab.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.

#ifndef DECOLAB_ORACLE_HPP
#define DECOLAB_ORACLE_HPP

#include <stdexcept>
#include <vector>

#include "decolab/analytic.hpp"
#include "decolab/model.hpp"

namespace decolab {

/// Thrown when a requested dense state vector would exceed the supported
/// environment size.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Largest environment the dense reference evolution will allocate
/// (2^(n+1) amplitudes).
inline constexpr std::size_t kMaxOracleSpins = 24;

/// Dense state vector over the full tensor product space. Amplitude layout:
/// index = (s << n_env) | e, where s is the central qubit bit (0 maps to |0>)
/// and bit i of e is the state of environment spin i (0 maps to up).
struct FullState {
  std::size_t n_env = 0;
  std::vector<Complex> amp;
};

/// Product initial state assembled amplitude by amplitude.
FullState build_initial(const SpinBathConfig& config);

/// Advance by t: the Hamiltonian is diagonal in the product basis, so
/// evolution multiplies each amplitude by a pure phase
///   exp(i * sgn(s) * (t / (2 hbar)) * sum_i g_i sigma_i),
/// with sgn(+1) for the central bit 0, sgn(-1) for bit 1, and sigma +1/-1 for
/// environment bit up/down. Composable: evolving by t1 then t2 equals
/// evolving by t1 + t2.
FullState evolve(const FullState& state, const SpinBathConfig& config, double t);

/// Apply a product observable factor by factor (one 2x2 block per tensor
/// slot). The result is generally unnormalized.
FullState apply_observable(const FullState& state, const ObservableSpec& obs);

/// Compensated inner product <x|y>.
Complex inner_product(const FullState& x, const FullState& y);

/// Re <state| obs |state>. The imaginary residue is a numerical diagnostic
/// available through inner_product/apply_observable.
double expectation(const FullState& state, const ObservableSpec& obs);

/// Trace out the environment.
ReducedState2 partial_trace(const FullState& state);

/// Euclidean norm of the state vector.
double state_norm(const FullState& state);

/// Brute-force inner product of the two evolved environment branch vectors,
/// <E1(t)|E0(t)>, assembled entry by entry over all 2^n basis states. This is
/// the independent reference for overlap_r.
Complex environment_overlap(const SpinBathConfig& config, double t);

}  // namespace decolab

#endif  // DECOLAB_ORACLE_HPP
