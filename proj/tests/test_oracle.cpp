#include <cmath>
#include <random>

#include <doctest.h>

#include "decolab/oracle.hpp"
#include "support.hpp"

using namespace decolab;
using decolab::testing::cdist;

namespace {

HermitianBlock2 block(double d0, double d1, Complex off) {
  HermitianBlock2 b;
  b.d0 = d0;
  b.d1 = d1;
  b.off = off;
  return b;
}

}  // namespace

TEST_CASE("initial amplitudes follow the (central << n) | environment layout") {
  SpinBathConfig config;
  config.a = {0.6, 0.0};
  config.b = {0.0, 0.8};
  config.spins.push_back(EnvSpin{{0.28, 0.0}, {0.0, 0.96}, 1.0});
  const FullState state = build_initial(config);
  REQUIRE(state.amp.size() == 4);
  CHECK(cdist(state.amp[0], config.a * config.spins[0].alpha) < 1e-15);
  CHECK(cdist(state.amp[1], config.a * config.spins[0].beta) < 1e-15);
  CHECK(cdist(state.amp[2], config.b * config.spins[0].alpha) < 1e-15);
  CHECK(cdist(state.amp[3], config.b * config.spins[0].beta) < 1e-15);
  CHECK(state_norm(state) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("evolution applies the diagonal phases spin by spin") {
  SpinBathConfig config;
  config.a = {0.6, 0.0};
  config.b = {0.0, 0.8};
  config.hbar = 0.5;
  config.spins.push_back(EnvSpin{{0.28, 0.0}, {0.0, 0.96}, 1.3});
  const double t = 0.9;
  const FullState state = evolve(build_initial(config), config, t);
  const double angle = t / (2.0 * config.hbar) * config.spins[0].g;
  // central bit 0 evolves with +angle on an up spin, -angle on a down spin;
  // central bit 1 flips both signs.
  CHECK(cdist(state.amp[0], config.a * config.spins[0].alpha *
                                std::polar(1.0, angle)) < 1e-14);
  CHECK(cdist(state.amp[1], config.a * config.spins[0].beta *
                                std::polar(1.0, -angle)) < 1e-14);
  CHECK(cdist(state.amp[2], config.b * config.spins[0].alpha *
                                std::polar(1.0, -angle)) < 1e-14);
  CHECK(cdist(state.amp[3], config.b * config.spins[0].beta *
                                std::polar(1.0, angle)) < 1e-14);
}

TEST_CASE("evolution preserves the norm and composes additively") {
  const SpinBathConfig config = sample_spin_bath_config(9, 13, 1.0);
  const FullState initial = build_initial(config);
  const FullState direct = evolve(initial, config, 3.7);
  const FullState stepped = evolve(evolve(initial, config, 1.5), config, 2.2);
  CHECK(state_norm(direct) == doctest::Approx(1.0).epsilon(1e-13));
  double worst = 0.0;
  for (std::size_t i = 0; i < direct.amp.size(); ++i) {
    worst = std::max(worst, cdist(direct.amp[i], stepped.amp[i]));
  }
  CHECK(worst < 1e-13);
}

TEST_CASE("dense branch overlap agrees with the closed form across sizes") {
  for (std::size_t n : {std::size_t(1), std::size_t(3), std::size_t(10)}) {
    const SpinBathConfig config = sample_spin_bath_config(n, 100 + n, 1.0);
    for (double t : {0.0, 0.8, -5.2, 11.4}) {
      CHECK(cdist(environment_overlap(config, t), overlap_r(config, t)) < 1e-12);
    }
  }
}

TEST_CASE("dense expectation reproduces the frozen two-spin value") {
  SpinBathConfig config;
  config.a = {0.48, 0.36};
  config.b = {0.8, 0.0};
  config.hbar = 2.0;
  config.spins.push_back(EnvSpin{{0.6, 0.0}, {0.0, 0.8}, 0.9});
  const double s3 = 1.0 / std::sqrt(3.0);
  const double m = std::sqrt(2.0 / 3.0);
  config.spins.push_back(
      EnvSpin{{s3, 0.0}, {m * 0.5, m * std::sqrt(3.0) / 2.0}, 1.7});
  const ObservableSpec obs = make_full_observable(
      block(1.0, -1.0, {0.5, 0.0}),
      {block(0.25, 0.75, {-0.2, 0.3}), block(-0.5, 0.5, {0.1, -0.6})});
  const FullState state = evolve(build_initial(config), config, 1.1);
  // frozen from an independently coded dense matrix evolution
  CHECK(expectation(state, obs) ==
        doctest::Approx(-0.060484320329329266).epsilon(1e-12));
}

TEST_CASE("applying an observable matches the quadratic form") {
  const SpinBathConfig config = sample_spin_bath_config(6, 21, 1.0);
  std::mt19937_64 engine(6);
  std::vector<HermitianBlock2> env;
  for (std::size_t i = 0; i < config.n_env(); ++i) {
    env.push_back(decolab::testing::random_block(engine));
  }
  const ObservableSpec obs =
      make_full_observable(decolab::testing::random_block(engine), env);
  const FullState state = evolve(build_initial(config), config, 2.4);
  const FullState applied = apply_observable(state, obs);
  const Complex quad = inner_product(state, applied);
  CHECK(quad.imag() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(expectation(state, obs) == doctest::Approx(quad.real()).epsilon(1e-13));
}

TEST_CASE("tracing out the environment gives the two-level state") {
  const SpinBathConfig config = sample_spin_bath_config(8, 37, 1.0);
  const double t = 1.9;
  const ReducedState2 traced = partial_trace(evolve(build_initial(config), config, t));
  CHECK(traced.p0 == doctest::Approx(std::norm(config.a)).epsilon(1e-12));
  CHECK(traced.p1 == doctest::Approx(std::norm(config.b)).epsilon(1e-12));
  const Complex expected = config.a * std::conj(config.b) * overlap_r(config, t);
  CHECK(cdist(traced.coh, expected) < 1e-12);
}

TEST_CASE("dense evolution refuses oversized environments") {
  SpinBathConfig config;
  config.a = {1.0, 0.0};
  config.b = {0.0, 0.0};
  for (int i = 0; i < 25; ++i) {
    config.spins.push_back(EnvSpin{{1.0, 0.0}, {0.0, 0.0}, 0.1});
  }
  CHECK_THROWS_AS(build_initial(config), CapacityError);
  CHECK_THROWS_AS(environment_overlap(config, 1.0), CapacityError);
}
