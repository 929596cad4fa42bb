// This file is part of decolab.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.

#ifndef DECOLAB_FITTING_HPP
#define DECOLAB_FITTING_HPP

#include <cstddef>
#include <vector>

namespace decolab {

/// Least-squares affine fit y = intercept + slope * x.
struct AffineFit {
  double intercept = 0.0;
  double slope = 0.0;
  /// Root-mean-square of the fit residuals.
  double rms_residual = 0.0;
  /// Standard error of the slope estimate (0 when n == 2).
  double slope_stderr = 0.0;
  std::size_t n = 0;
};

/// Ordinary least squares on the given samples. Requires x.size() == y.size()
/// and at least two distinct x values.
AffineFit fit_affine(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace decolab

#endif  // DECOLAB_FITTING_HPP
