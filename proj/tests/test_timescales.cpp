#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "decolab/timescales.hpp"
#include "support.hpp"

using namespace decolab;

TEST_CASE("pole formula inverts the energy spread") {
  const TimeValue t = pole_relaxation_time(2.0, 3.0);
  REQUIRE(t.is_finite());
  CHECK(t.value == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(pole_relaxation_time(0.0, 1.0).kind == TimeValue::Kind::Infinite);
  CHECK_THROWS_AS(pole_relaxation_time(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("interaction energy spread weights couplings by both populations") {
  SpinBathConfig config;
  const double s2 = 1.0 / std::sqrt(2.0);
  config.spins.push_back(EnvSpin{{s2, 0.0}, {s2, 0.0}, 1.0});   // p q = 1/4
  config.spins.push_back(EnvSpin{{1.0, 0.0}, {0.0, 0.0}, 2.0});  // polarized: inert
  CHECK(interaction_energy_spread(config) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(interaction_energy_spread(SpinBathConfig{}) == 0.0);
}

TEST_CASE("threshold crossing requires a sustained dip") {
  RealSeries series;
  series.t = {0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0};
  series.v = {1.0, 0.3, 0.5, 0.5, 0.2, 0.1, 0.05, 0.01};
  // ratio 0.4: the dip at t = 1 is not sustained; t = 4 starts the real one.
  const TimeValue t = crossing_time(series, 0.4);
  REQUIRE(t.is_finite());
  CHECK(t.value == doctest::Approx(4.0));

  RealSeries level;
  level.t = series.t;
  level.v.assign(series.t.size(), 1.0);
  CHECK(crossing_time(level, 0.4).kind == TimeValue::Kind::NotReached);

  CHECK_THROWS_AS(crossing_time(series, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(crossing_time(RealSeries{}, 0.4), std::invalid_argument);
}

TEST_CASE("spin-bath report orders suppression before relaxation") {
  const SpinBathConfig config = sample_spin_bath_config(30, 41, 1.0);
  const TimeGrid grid(0.0, 50.0, 5001);
  const TimeScaleReport report = spin_bath_report(config, grid);

  REQUIRE(report.t_ds.is_finite());
  REQUIRE(report.t_rs.is_finite());
  CHECK(report.t_ru.kind == TimeValue::Kind::Infinite);
  CHECK(report.ordering_ok);
  CHECK(report.t_ds_method == TimeScaleMethod::ThresholdCrossing);
  CHECK(report.t_rs_method == TimeScaleMethod::PoleFormula);

  const double v = interaction_energy_spread(config);
  CHECK(report.t_rs.value == doctest::Approx(config.hbar / v).epsilon(1e-12));
  // For many random spins the overlap is near-Gaussian in time, which puts
  // the 1/e crossing around 0.707 of the pole time; allow a generous band.
  CHECK(report.t_ds.value > 0.4 * report.t_rs.value);
  CHECK(report.t_ds.value < 1.1 * report.t_rs.value);
}

TEST_CASE("spin-bath report degrades gracefully without dynamics") {
  const TimeGrid grid(0.0, 10.0, 101);

  SpinBathConfig empty;  // no environment at all
  const TimeScaleReport none = spin_bath_report(empty, grid);
  CHECK(none.t_ds.kind == TimeValue::Kind::NotReached);
  CHECK(none.t_rs.kind == TimeValue::Kind::Infinite);
  CHECK(none.ordering_ok);

  SpinBathConfig frozen;  // spins present but decoupled
  const double s2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < 4; ++i) {
    frozen.spins.push_back(EnvSpin{{s2, 0.0}, {0.0, s2}, 0.0});
  }
  const TimeScaleReport still = spin_bath_report(frozen, grid);
  CHECK(still.t_ds.kind == TimeValue::Kind::NotReached);
  CHECK(still.t_rs.kind == TimeValue::Kind::Infinite);
}

TEST_CASE("two-rate series evaluates the closed form") {
  TwoTimesScenario scenario;
  scenario.gamma_se = 2.0;
  scenario.gamma_e = 0.25;
  scenario.weight_a = 0.75;
  scenario.weight_b = 1.5;
  scenario.hbar = 0.5;
  const TimeGrid grid(0.0, 2.0, 3);
  const RealSeries series = two_times_series(scenario, grid);
  REQUIRE(series.v.size() == 3);
  CHECK(series.v[0] == doctest::Approx(2.25).epsilon(1e-14));
  CHECK(series.v[1] ==
        doctest::Approx(0.75 * std::exp(-4.0) + 1.5 * std::exp(-0.5)).epsilon(1e-14));
}

TEST_CASE("well-separated rates are recovered to a fraction of a percent") {
  TwoTimesScenario scenario;  // defaults: 1.0 and 1e-3
  const TimeGrid grid(0.0, 5000.0, 20001);
  const RealSeries series = two_times_series(scenario, grid);
  const TwoStageDetection detection = detect_two_stages(series, scenario.hbar);
  CHECK(detection.two_stages);
  CHECK(detection.gamma_fast == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(detection.gamma_slow == doctest::Approx(1e-3).epsilon(1e-3));
  REQUIRE(detection.fast_time.is_finite());
  REQUIRE(detection.slow_time.is_finite());
  CHECK(detection.fast_time.value == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(detection.slow_time.value == doctest::Approx(1000.0).epsilon(1e-3));
  CHECK(detection.split_time > 0.0);
  CHECK(detection.split_time < 100.0);
}

TEST_CASE("a non-interacting environment shows up as a flat tail") {
  TwoTimesScenario scenario;
  scenario.gamma_e = 0.0;
  scenario.weight_b = 0.5;
  const TimeGrid grid(0.0, 60.0, 2401);
  const TwoStageDetection detection =
      detect_two_stages(two_times_series(scenario, grid), scenario.hbar);
  CHECK(detection.two_stages);
  CHECK(detection.gamma_slow == 0.0);
  CHECK(detection.slow_time.kind == TimeValue::Kind::Infinite);
  CHECK(detection.gamma_fast == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("equal rates collapse to a single stage with equal times") {
  TwoTimesScenario scenario;
  scenario.gamma_se = 0.7;
  scenario.gamma_e = 0.7;
  const TimeGrid grid(0.0, 30.0, 1201);
  const TwoStageDetection detection =
      detect_two_stages(two_times_series(scenario, grid), scenario.hbar);
  CHECK_FALSE(detection.two_stages);
  CHECK(detection.gamma_fast == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(detection.gamma_slow == detection.gamma_fast);
  REQUIRE(detection.fast_time.is_finite());
  REQUIRE(detection.slow_time.is_finite());
  CHECK(detection.fast_time.value == detection.slow_time.value);
}

TEST_CASE("stage detection refuses data it cannot interpret") {
  RealSeries short_series;
  short_series.t = {0.0, 1.0, 2.0};
  short_series.v = {1.0, 0.5, 0.25};
  CHECK_THROWS_AS(detect_two_stages(short_series, 1.0), DetectionError);

  // A clean exponential sampled over too shallow a window: one stage fits
  // perfectly but the dynamic range is far below two decades.
  TimeGrid shallow(0.0, 0.3, 101);
  RealSeries narrow;
  narrow.t = shallow.times();
  for (double t : narrow.t) narrow.v.push_back(2.0 * std::exp(-t));
  CHECK_THROWS_AS(detect_two_stages(narrow, 1.0), DetectionError);

  RealSeries negative;
  negative.t = shallow.times();
  negative.v.assign(negative.t.size(), -1.0);
  CHECK_THROWS_AS(detect_two_stages(negative, 1.0), DetectionError);
}

TEST_CASE("two-rate report maps stages onto the time scales") {
  TwoTimesScenario scenario;
  const TimeGrid grid(0.0, 5000.0, 20001);
  const TimeScaleReport report = two_times_report(scenario, grid);
  CHECK(report.t_ds.kind == TimeValue::Kind::NotEvaluated);
  REQUIRE(report.t_rs.is_finite());
  REQUIRE(report.t_ru.is_finite());
  CHECK(report.t_rs.value == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(report.t_ru.value == doctest::Approx(1000.0).epsilon(1e-3));
  CHECK(report.t_rs_method == TimeScaleMethod::EnvelopeFit);
  CHECK(report.t_ru_method == TimeScaleMethod::EnvelopeFit);
  CHECK(report.ordering_ok);
}

TEST_CASE("macroscopicity rescales relaxation into decoherence") {
  CHECK(macroscopicity_from_lengths(1e-10, 1e-2) == doctest::Approx(1e-16).epsilon(1e-12));
  CHECK_THROWS_AS(macroscopicity_from_lengths(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(macroscopicity_from_lengths(1.0, -1.0), std::invalid_argument);

  const TimeValue scaled =
      decoherence_time_from_relaxation(TimeValue::finite(10.0), 0.01);
  REQUIRE(scaled.is_finite());
  CHECK(scaled.value == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(decoherence_time_from_relaxation(TimeValue::infinite(), 0.5).kind ==
        TimeValue::Kind::Infinite);
  CHECK(decoherence_time_from_relaxation(TimeValue::not_reached(), 0.5).kind ==
        TimeValue::Kind::NotReached);
  CHECK_THROWS_AS(decoherence_time_from_relaxation(TimeValue::finite(1.0), 0.0),
                  std::invalid_argument);
}

TEST_CASE("ordering check treats the value kinds sensibly") {
  const TimeValue t1 = TimeValue::finite(1.0);
  const TimeValue t2 = TimeValue::finite(2.0);
  const TimeValue t3 = TimeValue::finite(3.0);
  CHECK(ordering_ok(t1, t2, t3));
  CHECK_FALSE(ordering_ok(t2, t1, t3));
  CHECK_FALSE(ordering_ok(t1, t3, t2));
  CHECK(ordering_ok(t1, t2, TimeValue::infinite()));
  CHECK_FALSE(ordering_ok(TimeValue::infinite(), t2, t3));
  // Unevaluated or unreached entries simply drop out of the comparison.
  CHECK(ordering_ok(TimeValue::not_reached(), t1, t2));
  CHECK(ordering_ok(t1, TimeValue::not_evaluated(), t2));
  CHECK_FALSE(ordering_ok(t2, TimeValue::not_evaluated(), t1));
}
