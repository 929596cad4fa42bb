#include <cmath>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "decolab/analytic.hpp"
#include "decolab/model.hpp"
#include "support.hpp"

using namespace decolab;
using decolab::testing::cdist;
using decolab::testing::make_spin;

namespace {

HermitianBlock2 block(double d0, double d1, Complex off) {
  HermitianBlock2 b;
  b.d0 = d0;
  b.d1 = d1;
  b.off = off;
  return b;
}

// One spin tilted off both poles; the branch overlap reduces to cos(g t / hbar).
SpinBathConfig tilted_single_spin() {
  SpinBathConfig config;
  config.a = {0.6, 0.0};
  config.b = {0.0, 0.8};
  const double s2 = 1.0 / std::sqrt(2.0);
  config.spins.push_back(EnvSpin{{s2, 0.0}, {0.0, s2}, 1.3});
  return config;
}

// Two unequal spins with hbar = 2, frozen against an independently coded
// dense matrix evolution.
SpinBathConfig two_spin_reference() {
  SpinBathConfig config;
  config.a = {0.48, 0.36};
  config.b = {0.8, 0.0};
  config.hbar = 2.0;
  config.spins.push_back(EnvSpin{{0.6, 0.0}, {0.0, 0.8}, 0.9});
  const double s3 = 1.0 / std::sqrt(3.0);
  const double m = std::sqrt(2.0 / 3.0);
  config.spins.push_back(
      EnvSpin{{s3, 0.0}, {m * 0.5, m * std::sqrt(3.0) / 2.0}, 1.7});
  return config;
}

}  // namespace

TEST_CASE("branch overlap starts at one and never exceeds one") {
  const SpinBathConfig config = sample_spin_bath_config(20, 5, 1.5);
  CHECK(cdist(overlap_r(config, 0.0), {1.0, 0.0}) < 1e-12);
  for (double t = -8.0; t <= 8.0; t += 0.37) {
    CHECK(std::abs(overlap_r(config, t)) <= 1.0 + 1e-12);
  }
}

TEST_CASE("branch overlap conjugates under time reversal") {
  const SpinBathConfig config = sample_spin_bath_config(7, 11, 2.0);
  for (double t : {0.3, 1.9, 5.5}) {
    CHECK(cdist(overlap_r(config, -t), std::conj(overlap_r(config, t))) < 1e-13);
  }
}

TEST_CASE("equatorial single spin gives a cosine overlap") {
  const SpinBathConfig config = tilted_single_spin();
  for (double t : {0.7, -2.3, 4.0}) {
    CHECK(cdist(overlap_r(config, t), {std::cos(1.3 * t), 0.0}) < 1e-13);
  }
  // frozen from the independent dense evolution
  CHECK(overlap_r(config, 0.7).real() ==
        doctest::Approx(0.61374574948881144).epsilon(1e-13));
  CHECK(overlap_r(config, -2.3).real() ==
        doctest::Approx(-0.98853182082739566).epsilon(1e-13));
}

TEST_CASE("squared overlap matches the per-spin interference product") {
  const SpinBathConfig config = sample_spin_bath_config(15, 42, 1.0);
  for (double t : {0.5, 2.2, 9.1}) {
    double product = 1.0;
    for (const EnvSpin& spin : config.spins) {
      const double p = std::norm(spin.alpha);
      const double q = std::norm(spin.beta);
      const double s = std::sin(spin.g * t / config.hbar);
      product *= 1.0 - 4.0 * p * q * s * s;
    }
    const double r2 = std::norm(overlap_r(config, t));
    CHECK(r2 == doctest::Approx(product).epsilon(1e-12));
  }
}

TEST_CASE("interference factor with identity environment blocks is the overlap") {
  const SpinBathConfig config = sample_spin_bath_config(9, 3, 1.0);
  const ObservableSpec obs =
      observable_system_only(block(0.3, -0.7, {0.1, 0.2}), config.n_env());
  for (double t : {0.0, 1.4, -3.3}) {
    CHECK(cdist(gamma1(config, obs, t), overlap_r(config, t)) < 1e-13);
  }
}

TEST_CASE("interference and population factors agree at t = 0") {
  const SpinBathConfig config = sample_spin_bath_config(6, 19, 1.0);
  std::mt19937_64 engine(4);
  std::vector<HermitianBlock2> env;
  for (std::size_t i = 0; i < config.n_env(); ++i) {
    env.push_back(decolab::testing::random_block(engine));
  }
  const ObservableSpec obs =
      make_full_observable(decolab::testing::random_block(engine), env);
  CHECK(cdist(gamma1(config, obs, 0.0), gamma0(config, obs, 0.0)) < 1e-13);
  CHECK(gamma0(config, obs, 2.7).imag() == 0.0);
}

TEST_CASE("single-spin expectation matches the frozen dense value") {
  const SpinBathConfig config = tilted_single_spin();
  const ObservableSpec obs = make_full_observable(
      block(0.5, -0.5, {0.2, 0.4}), {block(0.5, -0.25, {0.3, 0.1})});
  CHECK(expectation_full(config, obs, 0.7) ==
        doctest::Approx(0.17530247472854935).epsilon(1e-13));
  CHECK(expectation_full(config, obs, -2.3) ==
        doctest::Approx(0.020985259824963021).epsilon(1e-12));
}

TEST_CASE("two-spin quantities match the frozen dense values") {
  const SpinBathConfig config = two_spin_reference();
  const ObservableSpec obs = make_full_observable(
      block(1.0, -1.0, {0.5, 0.0}),
      {block(0.25, 0.75, {-0.2, 0.3}), block(-0.5, 0.5, {0.1, -0.6})});
  const double t = 1.1;
  CHECK(expectation_full(config, obs, t) ==
        doctest::Approx(-0.060484320329329266).epsilon(1e-12));
  CHECK(cdist(overlap_r(config, t),
              {0.48686869852259956, -0.31499045090516109}) < 1e-13);
  CHECK(purity(config, t) == doctest::Approx(0.69414866042177237).epsilon(1e-12));
  CHECK(expectation_single_env(config, 1, block(-0.5, 0.5, {0.1, -0.6}), t) ==
        doctest::Approx(0.53089629353651135).epsilon(1e-12));
}

TEST_CASE("observable dispatch agrees with the general product form") {
  const SpinBathConfig config = sample_spin_bath_config(5, 23, 1.0);
  std::mt19937_64 engine(9);
  const HermitianBlock2 system = decolab::testing::random_block(engine);
  const HermitianBlock2 env = decolab::testing::random_block(engine);

  const ObservableSpec system_only = observable_system_only(system, config.n_env());
  const ObservableSpec single = observable_single_env(2, env, config.n_env());
  for (double t : {0.4, 3.8}) {
    CHECK(expectation(config, system_only, t) ==
          doctest::Approx(expectation_full(config, system_only, t)).epsilon(1e-13));
    CHECK(expectation(config, system_only, t) ==
          doctest::Approx(expectation_s0(config, system, t)).epsilon(1e-13));
    CHECK(expectation(config, single, t) ==
          doctest::Approx(expectation_full(config, single, t)).epsilon(1e-13));
  }
}

TEST_CASE("expectation rejects observables sized for a different environment") {
  const SpinBathConfig config = sample_spin_bath_config(4, 8, 1.0);
  const ObservableSpec obs = observable_system_only(identity_block(), 5);
  CHECK_THROWS_AS(expectation(config, obs, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gamma1(config, obs, 1.0), std::invalid_argument);
}

TEST_CASE("identity observable stays one for all times") {
  const SpinBathConfig config = sample_spin_bath_config(25, 14, 1.0);
  const ObservableSpec obs =
      observable_system_only(identity_block(), config.n_env());
  for (double t : {0.0, 0.9, 17.0}) {
    CHECK(expectation(config, obs, t) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("log-domain product path agrees with the direct product") {
  // Spins beyond the first ten are frozen (g = 0, pure up, identity blocks),
  // so the big model's quantities must equal the ten-spin model's, while the
  // factor count pushes evaluation onto the log-domain code path.
  const SpinBathConfig small = sample_spin_bath_config(10, 55, 1.0);
  SpinBathConfig big = small;
  for (std::size_t i = 10; i < 1500; ++i) {
    big.spins.push_back(EnvSpin{{1.0, 0.0}, {0.0, 0.0}, 0.0});
  }
  REQUIRE(big.n_env() > kLogProductSpins);

  std::mt19937_64 engine(17);
  const HermitianBlock2 system = decolab::testing::random_block(engine);
  std::vector<HermitianBlock2> env_small, env_big;
  for (std::size_t i = 0; i < 10; ++i) {
    env_small.push_back(decolab::testing::random_block(engine));
  }
  env_big = env_small;
  env_big.resize(1500, identity_block());
  const ObservableSpec obs_small = make_full_observable(system, env_small);
  const ObservableSpec obs_big = make_full_observable(system, env_big);

  for (double t : {0.8, -4.1, 12.9}) {
    CHECK(cdist(overlap_r(big, t), overlap_r(small, t)) < 1e-11);
    CHECK(expectation_full(big, obs_big, t) ==
          doctest::Approx(expectation_full(small, obs_small, t)).epsilon(1e-11));
    CHECK(cdist(gamma1(big, obs_big, t), gamma1(small, obs_small, t)) < 1e-11);
  }
}

TEST_CASE("overlap product short-circuits on an exactly dark spin") {
  SpinBathConfig config = sample_spin_bath_config(1200, 66, 1.0);
  // A spin lying on the equator kills the overlap completely at the time
  // where its phase reaches a quarter turn.
  const double s2 = 1.0 / std::sqrt(2.0);
  config.spins[600] = EnvSpin{{s2, 0.0}, {s2, 0.0}, 1.0};
  const double pi = 3.14159265358979323846;
  const double t_dark = pi / 2.0;  // g t / hbar = pi/2 makes the factor zero
  CHECK(std::abs(overlap_r(config, t_dark)) < 1e-12);
}

TEST_CASE("population product short-circuits on an exactly zero block") {
  const SpinBathConfig config = sample_spin_bath_config(1200, 67, 1.0);
  std::vector<HermitianBlock2> env(1200, identity_block());
  env[700] = block(0.0, 0.0, {0.0, 0.0});
  const ObservableSpec obs = make_full_observable(identity_block(), env);
  CHECK(expectation_full(config, obs, 2.1) == 0.0);
  CHECK(std::abs(gamma0(config, obs, 2.1)) == 0.0);
}

TEST_CASE("reduced state keeps populations and damps coherence") {
  const SpinBathConfig config = sample_spin_bath_config(12, 29, 1.0);
  const double p0 = std::norm(config.a);
  const double p1 = std::norm(config.b);
  for (double t : {0.0, 1.3, 6.6}) {
    const ReducedState2 rho = reduced_state(config, t);
    CHECK(rho.p0 == doctest::Approx(p0).epsilon(1e-13));
    CHECK(rho.p1 == doctest::Approx(p1).epsilon(1e-13));
    const Complex expected = config.a * std::conj(config.b) * overlap_r(config, t);
    CHECK(cdist(rho.coh, expected) < 1e-13);
    CHECK(purity(config, t) ==
          doctest::Approx(rho.p0 * rho.p0 + rho.p1 * rho.p1 +
                          2.0 * std::norm(rho.coh))
              .epsilon(1e-12));
  }
  CHECK(purity(config, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("series wrappers sample the grid pointwise") {
  const SpinBathConfig config = sample_spin_bath_config(5, 101, 1.0);
  const TimeGrid grid(0.0, 2.0, 21);
  const ComplexSeries overlap = overlap_series(config, grid);
  REQUIRE(overlap.t.size() == 21);
  CHECK(cdist(overlap.v[13], overlap_r(config, grid.time_at(13))) == 0.0);

  const ObservableSpec obs =
      observable_system_only(block(0.2, -0.2, {0.0, 0.1}), config.n_env());
  const RealSeries values = expectation_series(config, obs, grid);
  REQUIRE(values.v.size() == 21);
  CHECK(values.v[7] == expectation(config, obs, grid.time_at(7)));
}
