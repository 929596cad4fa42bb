// Shared helpers for the unit tests.

#ifndef DECOLAB_TESTS_SUPPORT_HPP
#define DECOLAB_TESTS_SUPPORT_HPP

#include <cmath>
#include <complex>
#include <random>

#include "decolab/model.hpp"

namespace decolab::testing {

/// |x - y| for complex values, as a plain double for CHECK messages.
inline double cdist(const Complex& x, const Complex& y) { return std::abs(x - y); }

/// A normalized spin from raw (unnormalized) component values.
inline EnvSpin make_spin(Complex alpha, Complex beta, double g) {
  const double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
  return EnvSpin{alpha / norm, beta / norm, g};
}

/// Deterministic Hermitian 2x2 block with entries of order one.
inline HermitianBlock2 random_block(std::mt19937_64& engine) {
  const auto symmetric = [&engine] { return 2.0 * uniform_01(engine) - 1.0; };
  HermitianBlock2 block;
  block.d0 = symmetric();
  block.d1 = symmetric();
  block.off = 0.5 * Complex{symmetric(), symmetric()};
  return block;
}

}  // namespace decolab::testing

#endif  // DECOLAB_TESTS_SUPPORT_HPP
