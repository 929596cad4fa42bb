// This file is part of decolab.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.

#include "decolab/fitting.hpp"

#include <cmath>
#include <stdexcept>

namespace decolab {

AffineFit fit_affine(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("fit_affine: x and y differ in length");
  }
  const std::size_t n = x.size();
  if (n < 2) {
    throw std::invalid_argument("fit_affine: need at least two samples");
  }
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= double(n);
  mean_y /= double(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mean_x;
    sxx += dx * dx;
    sxy += dx * (y[i] - mean_y);
  }
  if (sxx == 0.0) {
    throw std::invalid_argument("fit_affine: x values are all equal");
  }
  AffineFit fit;
  fit.n = n;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    sse += r * r;
  }
  fit.rms_residual = std::sqrt(sse / double(n));
  fit.slope_stderr = n > 2 ? std::sqrt(sse / double(n - 2) / sxx) : 0.0;
  return fit;
}

}  // namespace decolab
