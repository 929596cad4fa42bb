// This file is part of decolab.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.

#include "decolab/timescales.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "decolab/fitting.hpp"

namespace decolab {

std::string to_string(TimeValue::Kind kind) {
  switch (kind) {
    case TimeValue::Kind::Finite:
      return "finite";
    case TimeValue::Kind::Infinite:
      return "infinite";
    case TimeValue::Kind::NotReached:
      return "not reached";
    case TimeValue::Kind::NotEvaluated:
      return "not evaluated";
  }
  return "unknown";
}

std::string to_string(TimeScaleMethod method) {
  switch (method) {
    case TimeScaleMethod::ThresholdCrossing:
      return "threshold-crossing";
    case TimeScaleMethod::EnvelopeFit:
      return "envelope-fit";
    case TimeScaleMethod::PoleFormula:
      return "pole-formula";
  }
  return "unknown";
}

TimeValue pole_relaxation_time(double v, double hbar) {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    throw std::invalid_argument("hbar must be positive and finite");
  }
  if (!(v > 0.0) || !std::isfinite(v)) return TimeValue::infinite();
  return TimeValue::finite(hbar / v);
}

double interaction_energy_spread(const SpinBathConfig& config) {
  double sum = 0.0;
  for (const EnvSpin& s : config.spins) {
    sum += s.g * s.g * std::norm(s.alpha) * std::norm(s.beta);
  }
  return std::sqrt(sum);
}

TimeValue crossing_time(const RealSeries& series, double ratio, std::size_t debounce) {
  if (!(ratio > 0.0) || !(ratio < 1.0)) {
    throw std::invalid_argument("crossing ratio must lie in (0, 1)");
  }
  if (series.t.size() != series.v.size() || series.t.empty()) {
    throw std::invalid_argument("malformed series");
  }
  const double threshold = ratio * series.v[0];
  const std::size_t n = series.v.size();
  for (std::size_t i = 0; i + debounce < n; ++i) {
    if (!(series.v[i] < threshold)) continue;
    bool sustained = true;
    for (std::size_t k = 1; k <= debounce; ++k) {
      if (!(series.v[i + k] < threshold)) {
        sustained = false;
        break;
      }
    }
    if (sustained) return TimeValue::finite(series.t[i]);
  }
  return TimeValue::not_reached();
}

TimeScaleReport spin_bath_report(const SpinBathConfig& config, const TimeGrid& grid) {
  const RealSeries abs_r =
      sample_real_series(grid, [&](double t) { return std::abs(overlap_r(config, t)); });
  TimeScaleReport report;
  report.t_ds = crossing_time(abs_r, kDecoherenceRatio);
  report.t_ds_method = TimeScaleMethod::ThresholdCrossing;
  report.t_rs = pole_relaxation_time(interaction_energy_spread(config), config.hbar);
  report.t_rs_method = TimeScaleMethod::PoleFormula;
  // The environment spins have no self-interaction in this family, so the
  // whole closed system never equilibrates.
  report.t_ru = TimeValue::infinite();
  report.t_ru_method = TimeScaleMethod::PoleFormula;
  report.ordering_ok = ordering_ok(report.t_ds, report.t_rs, report.t_ru);
  return report;
}

RealSeries two_times_series(const TwoTimesScenario& scenario, const TimeGrid& grid) {
  return sample_real_series(grid, [&](double t) {
    return scenario.weight_a * std::exp(-scenario.gamma_se * t / scenario.hbar) +
           scenario.weight_b * std::exp(-scenario.gamma_e * t / scenario.hbar);
  });
}

namespace {

constexpr double kSingleStageRms = 0.01;
constexpr double kSingleStageMaxDev = 0.05;
constexpr double kMinDynamicRange = 100.0;
constexpr double kFlatTailRatio = 1e-4;
constexpr double kPeelKeepRatio = 1e-4;
constexpr double kNoiseFloorRatio = 1e-12;
constexpr std::size_t kMinSegment = 8;

// Prefix sums that give the least-squares SSE of an affine fit on any index
// range in O(1).
struct SegmentStats {
  std::vector<double> st, sy, stt, sty, syy;

  SegmentStats(const std::vector<double>& t, const std::vector<double>& y) {
    const std::size_t n = t.size();
    st.assign(n + 1, 0.0);
    sy.assign(n + 1, 0.0);
    stt.assign(n + 1, 0.0);
    sty.assign(n + 1, 0.0);
    syy.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      st[i + 1] = st[i] + t[i];
      sy[i + 1] = sy[i] + y[i];
      stt[i + 1] = stt[i] + t[i] * t[i];
      sty[i + 1] = sty[i] + t[i] * y[i];
      syy[i + 1] = syy[i] + y[i] * y[i];
    }
  }

  // SSE of the best affine fit on [lo, hi).
  double sse(std::size_t lo, std::size_t hi) const {
    const double n = double(hi - lo);
    const double sum_t = st[hi] - st[lo];
    const double sum_y = sy[hi] - sy[lo];
    const double sum_tt = stt[hi] - stt[lo];
    const double sum_ty = sty[hi] - sty[lo];
    const double sum_yy = syy[hi] - syy[lo];
    const double ctt = sum_tt - sum_t * sum_t / n;
    const double cty = sum_ty - sum_t * sum_y / n;
    const double cyy = sum_yy - sum_y * sum_y / n;
    if (!(ctt > 0.0)) return cyy;
    return std::max(0.0, cyy - cty * cty / ctt);
  }
};

}  // namespace

TwoStageDetection detect_two_stages(const RealSeries& series, double hbar) {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    throw std::invalid_argument("hbar must be positive and finite");
  }
  if (series.t.size() != series.v.size()) {
    throw std::invalid_argument("malformed series");
  }

  // Drop the tail once it reaches the numerical noise floor (log fits there
  // would measure roundoff).
  std::vector<double> t = series.t;
  std::vector<double> y = series.v;
  double y_max = 0.0;
  for (double v : y) y_max = std::max(y_max, v);
  if (!(y_max > 0.0)) throw DetectionError("series is not positive");
  const double floor = kNoiseFloorRatio * y_max;
  std::size_t usable = y.size();
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] <= floor) {
      usable = i;
      break;
    }
  }
  t.resize(usable);
  y.resize(usable);
  if (t.size() < 2 * kMinSegment) {
    throw DetectionError("too few usable samples for stage detection");
  }

  double y_min = y[0];
  for (double v : y) y_min = std::min(y_min, v);
  std::vector<double> log_y(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) log_y[i] = std::log(y[i]);

  const AffineFit global = fit_affine(t, log_y);
  // The rms alone can be diluted by a densely sampled tail, so a short fast
  // stage must also be invisible pointwise before one exponential wins.
  double global_max_dev = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double predicted = global.intercept + global.slope * t[i];
    global_max_dev = std::max(global_max_dev, std::abs(log_y[i] - predicted));
  }
  if (global.rms_residual < kSingleStageRms && global_max_dev < kSingleStageMaxDev) {
    // One exponential explains everything; claiming a rate still needs two
    // decades of measured decay.
    if (y_max / y_min < kMinDynamicRange) {
      throw DetectionError("dynamic range below two decades; no measurable decay");
    }
    const double gamma = -global.slope * hbar;
    if (!(gamma > 0.0)) throw DetectionError("series does not decay");
    TwoStageDetection result;
    result.two_stages = false;
    result.gamma_fast = gamma;
    result.gamma_slow = gamma;
    result.fast_time = TimeValue::finite(hbar / gamma);
    result.slow_time = result.fast_time;
    result.split_time = 0.0;
    result.residual_fast = global.rms_residual;
    result.residual_slow = global.rms_residual;
    return result;
  }

  // Locate the knee: the split minimizing the combined SSE of independent
  // affine fits on the two segments.
  const SegmentStats stats(t, log_y);
  const std::size_t n = t.size();
  std::size_t best_split = kMinSegment;
  double best_sse = std::numeric_limits<double>::infinity();
  for (std::size_t k = kMinSegment; k + kMinSegment <= n; ++k) {
    const double sse = stats.sse(0, k) + stats.sse(k, n);
    if (sse < best_sse) {
      best_sse = sse;
      best_split = k;
    }
  }
  const double t_knee = t[best_split];

  // Rough early rate, used only to decide where the fast component has died.
  const AffineFit head_rough =
      fit_affine(std::vector<double>(t.begin(), t.begin() + best_split),
                 std::vector<double>(log_y.begin(), log_y.begin() + best_split));
  const double gamma_fast_rough = -head_rough.slope * hbar;
  if (!(gamma_fast_rough > 0.0)) {
    throw DetectionError("early stage does not decay");
  }

  double tail_start = t_knee + 3.0 * hbar / gamma_fast_rough;
  std::size_t tail_lo = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (t[i] >= tail_start) {
      tail_lo = i;
      break;
    }
  }
  if (n - tail_lo < kMinSegment) {
    tail_lo = n / 2;  // fallback: latter half
    tail_start = t[tail_lo];
  }
  const AffineFit tail = fit_affine(std::vector<double>(t.begin() + tail_lo, t.end()),
                                    std::vector<double>(log_y.begin() + tail_lo, log_y.end()));
  const double gamma_slow_raw = -tail.slope * hbar;

  // Peel: subtract the extrapolated tail from the head so the fast rate is
  // fitted on a clean single exponential.
  std::vector<double> head_t;
  std::vector<double> head_z;
  double z_max = 0.0;
  for (std::size_t i = 0; i < tail_lo; ++i) {
    const double z = y[i] - std::exp(tail.intercept + tail.slope * t[i]);
    if (z > 0.0) {
      head_t.push_back(t[i]);
      head_z.push_back(z);
      z_max = std::max(z_max, z);
    }
  }
  std::vector<double> kept_t;
  std::vector<double> kept_log_z;
  double z_min_kept = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < head_z.size(); ++i) {
    if (head_z[i] > kPeelKeepRatio * z_max) {
      kept_t.push_back(head_t[i]);
      kept_log_z.push_back(std::log(head_z[i]));
      z_min_kept = std::min(z_min_kept, head_z[i]);
    }
  }
  if (kept_t.size() < kMinSegment) {
    throw DetectionError("fast stage has too few samples after tail subtraction");
  }
  if (z_max / z_min_kept < kMinDynamicRange) {
    throw DetectionError("fast stage spans less than two decades after tail subtraction");
  }
  const AffineFit head = fit_affine(kept_t, kept_log_z);
  const double gamma_fast = -head.slope * hbar;
  if (!(gamma_fast > 0.0)) {
    throw DetectionError("fast stage does not decay after tail subtraction");
  }

  TwoStageDetection result;
  result.two_stages = true;
  result.gamma_fast = gamma_fast;
  result.fast_time = TimeValue::finite(hbar / gamma_fast);
  result.split_time = t_knee;
  result.residual_fast = head.rms_residual;
  result.residual_slow = tail.rms_residual;
  if (gamma_slow_raw <= kFlatTailRatio * gamma_fast) {
    result.gamma_slow = 0.0;
    result.slow_time = TimeValue::infinite();
  } else {
    result.gamma_slow = gamma_slow_raw;
    result.slow_time = TimeValue::finite(hbar / gamma_slow_raw);
  }
  return result;
}

TimeScaleReport two_times_report(const TwoTimesScenario& scenario, const TimeGrid& grid) {
  const RealSeries series = two_times_series(scenario, grid);
  const TwoStageDetection detection = detect_two_stages(series, scenario.hbar);
  TimeScaleReport report;
  report.t_ds = TimeValue::not_evaluated();
  report.t_ds_method = TimeScaleMethod::ThresholdCrossing;
  report.t_rs = detection.fast_time;
  report.t_rs_method = TimeScaleMethod::EnvelopeFit;
  report.t_ru = detection.slow_time;
  report.t_ru_method = TimeScaleMethod::EnvelopeFit;
  report.ordering_ok = ordering_ok(report.t_ds, report.t_rs, report.t_ru);
  return report;
}

TimeValue decoherence_time_from_relaxation(TimeValue t_rs, double m) {
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw std::invalid_argument("macroscopicity coefficient must be positive and finite");
  }
  if (t_rs.kind != TimeValue::Kind::Finite) return t_rs;
  return TimeValue::finite(m * t_rs.value);
}

double macroscopicity_from_lengths(double l_micro, double l_macro) {
  if (!(l_micro > 0.0) || !(l_macro > 0.0) || !std::isfinite(l_micro) ||
      !std::isfinite(l_macro)) {
    throw std::invalid_argument("lengths must be positive and finite");
  }
  const double ratio = l_micro / l_macro;
  return ratio * ratio;
}

bool ordering_ok(const TimeValue& t_ds, const TimeValue& t_rs, const TimeValue& t_ru) {
  std::vector<double> present;
  for (const TimeValue* v : {&t_ds, &t_rs, &t_ru}) {
    switch (v->kind) {
      case TimeValue::Kind::Finite:
        present.push_back(v->value);
        break;
      case TimeValue::Kind::Infinite:
        present.push_back(std::numeric_limits<double>::infinity());
        break;
      default:
        break;  // skip entries with no comparable value
    }
  }
  for (std::size_t i = 1; i < present.size(); ++i) {
    if (present[i] < present[i - 1]) return false;
  }
  return true;
}

}  // namespace decolab
