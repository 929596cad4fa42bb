// This file is part of decolab.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.

#ifndef DECOLAB_TIMESCALES_HPP
#define DECOLAB_TIMESCALES_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

#include "decolab/analytic.hpp"
#include "decolab/model.hpp"

namespace decolab {

/// A characteristic time that may be finite, infinite (the process never
/// completes), not reached within the sampled horizon, or not evaluated for
/// this scenario. Never encoded as a sentinel float.
struct TimeValue {
  enum class Kind { Finite, Infinite, NotReached, NotEvaluated };
  Kind kind = Kind::NotEvaluated;
  double value = 0.0;  ///< Meaningful only when kind == Finite.

  static TimeValue finite(double t) { return {Kind::Finite, t}; }
  static TimeValue infinite() { return {Kind::Infinite, 0.0}; }
  static TimeValue not_reached() { return {Kind::NotReached, 0.0}; }
  static TimeValue not_evaluated() { return {Kind::NotEvaluated, 0.0}; }

  bool is_finite() const { return kind == Kind::Finite; }
};

/// How a reported time scale was obtained.
enum class TimeScaleMethod {
  ThresholdCrossing,  ///< First debounced crossing of a sampled envelope.
  EnvelopeFit,        ///< Exponential fit to a decaying envelope.
  PoleFormula,        ///< Closed form hbar / (energy width).
};

std::string to_string(TimeValue::Kind kind);
std::string to_string(TimeScaleMethod method);

/// The three characteristic times of a run, each tagged with how it was
/// obtained: the
/// suppression time of interference terms (decoherence), the equilibration
/// time of the observed subsystem (relaxation), and the equilibration time
/// of the whole closed system (recurrence-free relaxation, infinite when the
/// whole system never settles).
struct TimeScaleReport {
  TimeValue t_ds;  ///< Decoherence (interference suppression) time.
  TimeValue t_rs;  ///< Subsystem relaxation time.
  TimeValue t_ru;  ///< Whole-system relaxation time.
  TimeScaleMethod t_ds_method = TimeScaleMethod::ThresholdCrossing;
  TimeScaleMethod t_rs_method = TimeScaleMethod::PoleFormula;
  TimeScaleMethod t_ru_method = TimeScaleMethod::PoleFormula;
  /// True when the entries satisfy t_ds <= t_rs <= t_ru, treating Infinite
  /// as +infinity and skipping NotReached / NotEvaluated entries.
  bool ordering_ok = true;
};

/// Closed-form relaxation time hbar / v for a resonance of energy width v.
/// Non-positive width means no decay: the result is Infinite.
TimeValue pole_relaxation_time(double v, double hbar);

/// Initial-state spread of the branch energy difference for a spin bath:
///   v = sqrt( sum_i g_i^2 |alpha_i|^2 |beta_i|^2 ).
/// The branch overlap falls off like exp(-2 (v t / hbar)^2) at short times,
/// so hbar / v is the natural relaxation scale; spins with g = 0 or a pure
/// local state contribute nothing (they never entangle).
double interaction_energy_spread(const SpinBathConfig& config);

/// First grid time at which series.v drops below ratio * series.v[0] and
/// stays below it for the next `debounce` samples. NotReached when no such
/// time exists in the sampled range. Values are expected non-negative;
/// requires 0 < ratio < 1.
TimeValue crossing_time(const RealSeries& series, double ratio,
                        std::size_t debounce = 3);

/// Drop ratio used for decoherence-time crossings (one e-folding).
inline constexpr double kDecoherenceRatio = 0.36787944117144233;

/// Report for a sampled spin-bath run: t_ds from the debounced e-folding
/// crossing of |r(t)|, t_rs from the pole formula applied to the interaction
/// energy spread, t_ru always Infinite for this family (the environment
/// spins have no self-interaction, so the whole closed system never
/// equilibrates).
TimeScaleReport spin_bath_report(const SpinBathConfig& config, const TimeGrid& grid);

/// Thrown when stage detection cannot interpret a series (too few samples,
/// dynamic range below two decades, non-positive data where a log is
/// required, ...).
struct DetectionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A two-rate scenario: a fast component driven by the system-environment
/// interaction and a slow component driven by the environment's internal
/// interaction,
///   y(t) = weight_a exp(-gamma_se t / hbar) + weight_b exp(-gamma_e t / hbar).
/// gamma_e = 0 encodes a non-interacting environment (flat tail).
struct TwoTimesScenario {
  double gamma_se = 1.0;
  double gamma_e = 1e-3;
  double weight_a = 1.0;
  double weight_b = 1.0;
  double hbar = 1.0;
};

/// Samples the closed-form two-rate signal on the grid.
RealSeries two_times_series(const TwoTimesScenario& scenario, const TimeGrid& grid);

/// Result of splitting a decaying series into (up to) two exponential stages.
struct TwoStageDetection {
  bool two_stages = false;     ///< False when one exponential explains the data.
  double gamma_fast = 0.0;     ///< Early-stage rate.
  double gamma_slow = 0.0;     ///< Late-stage rate; 0 when the tail is flat.
  TimeValue fast_time;         ///< hbar / gamma_fast.
  TimeValue slow_time;         ///< hbar / gamma_slow; Infinite for a flat tail.
  double split_time = 0.0;     ///< Knee position between the stages.
  double residual_fast = 0.0;  ///< RMS log-residual of the early fit.
  double residual_slow = 0.0;  ///< RMS log-residual of the late fit.
};

/// Detects one vs two exponential stages in a positive decaying series.
/// Strategy: a single log-affine fit that already explains the data wins
/// (requires two decades of dynamic range); otherwise the best two-segment
/// split locates the knee, the tail is fitted first, its extrapolation is
/// subtracted from the head (peeling), and the head is refitted clean. A
/// tail rate below 1e-4 of the head rate is reported as flat (slow_time
/// Infinite). Raises DetectionError when neither interpretation is
/// supported by the data.
TwoStageDetection detect_two_stages(const RealSeries& series, double hbar);

/// Report for the two-rate scenario via detect_two_stages on the sampled
/// signal: t_ds not evaluated (no interference term in this reduced
/// description), t_rs = hbar / gamma_fast, t_ru = hbar / gamma_slow (or
/// Infinite for a flat tail).
TimeScaleReport two_times_report(const TwoTimesScenario& scenario, const TimeGrid& grid);

/// Decoherence time from a relaxation time and a macroscopicity coefficient:
///   t_ds = m * t_rs, with m typically a squared length ratio << 1.
/// Infinite and NotReached/NotEvaluated inputs pass through unchanged;
/// requires m > 0.
TimeValue decoherence_time_from_relaxation(TimeValue t_rs, double m);

/// Macroscopicity coefficient (l_micro / l_macro)^2 from two lengths
/// (typically a de Broglie wavelength against a coherence length).
double macroscopicity_from_lengths(double l_micro, double l_macro);

/// Ordering check used by TimeScaleReport (see ordering_ok there).
bool ordering_ok(const TimeValue& t_ds, const TimeValue& t_rs, const TimeValue& t_ru);

}  // namespace decolab

#endif  // DECOLAB_TIMESCALES_HPP
