// This file is part of decolab.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.

#ifndef DECOLAB_SID_HPP
#define DECOLAB_SID_HPP

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "decolab/analytic.hpp"
#include "decolab/model.hpp"

namespace decolab {

/// Thrown when a decay fit cannot be attempted on the requested data
/// (no measurable decay, too few usable samples, non-positive envelope, ...).
struct FitDomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Correlation profile in the frequency difference nu = omega - omega':
///   k(nu) = width^2 / (nu^2 + width^2).
/// The continuum off-diagonal contribution then carries an
/// exp(-width |t| / hbar) envelope, so `width` doubles as the decay rate.
struct LorentzianKernel {
  double center = 10.0;    ///< Centre of the energy profile.
  double width = 1.0;      ///< Half-width; sets the relaxation rate.
  double amplitude = 1.0;  ///< Overall scale.
};

/// Correlation profile k(nu) = exp(-nu^2 / (2 sigma^2)). The continuum
/// contribution decays like exp(-sigma^2 t^2 / (2 hbar^2)), which is not
/// exponential; decay fits must flag this rather than force a rate.
struct GaussianKernel {
  double center = 10.0;
  double sigma = 1.0;
  double amplitude = 1.0;
};

/// Kernel specified by explicit per-node tables (see the text formats in the
/// repository docs). Not resamplable: refinement checks reject this family.
struct TableKernel {
  std::vector<double> omega;                  ///< Grid nodes, ascending from 0.
  std::vector<double> diag;                   ///< diag[i] at omega[i].
  std::vector<std::vector<Complex>> offdiag;  ///< offdiag[i][j], Hermitian.
};

/// Kernel given by callables; resamplable at any resolution.
struct CustomKernel {
  std::function<double(double)> diag;              ///< diag(omega).
  std::function<Complex(double, double)> offdiag;  ///< offdiag(omega, omega').
};

using KernelFamily =
    std::variant<LorentzianKernel, GaussianKernel, TableKernel, CustomKernel>;

/// A kernel sampled on a uniform frequency grid [0, omega_max]: the diagonal
/// (already-stationary) part, the dense Hermitian off-diagonal table, the
/// trapezoid quadrature weights, and cached per-offset sums that make time
/// evaluation O(n_omega).
struct SidKernel {
  std::size_t n_omega = 0;
  double omega_max = 0.0;
  double hbar = 1.0;
  std::vector<double> omega;    ///< Grid nodes.
  std::vector<double> weight;   ///< Trapezoid weights.
  std::vector<double> diag;     ///< Diagonal kernel values at the nodes.
  std::vector<Complex> offdiag; ///< Row-major n x n off-diagonal table.
  /// cached[m] = sum over i - j = m of w_i w_j offdiag(i, j), m >= 0; the
  /// m < 0 half is the conjugate by Hermitian symmetry.
  std::vector<Complex> offset_sums;
  double diag_mass = 0.0;  ///< Quadrature of diag: the stationary value.

  Complex offdiag_at(std::size_t i, std::size_t j) const {
    return offdiag[i * n_omega + j];
  }
};

/// Upper bound on n_omega accepted by sample_kernel (the dense table is
/// n_omega^2 complex values).
inline constexpr std::size_t kMaxOmegaPoints = 2048;

/// Builds the sampled kernel. For the closed-form families the energy
/// profile is a Gaussian of width omega_max/16 around `center`, and
/// construction rejects profiles whose mass is not essentially contained in
/// [0, omega_max] (fraction >= 1 - 1e-6), so domain truncation stays far
/// below fit tolerances. Off-diagonal tables must be Hermitian; violations
/// are rejected at construction. TableKernel input must already live on the
/// matching uniform grid.
SidKernel sample_kernel(const KernelFamily& family, std::size_t n_omega,
                        double omega_max, double hbar);

/// Mean-value expectation at time t:
///   X(t) = diag_mass + sum_{i,j} w_i w_j offdiag(i,j) e^{i (omega_i - omega_j) t / hbar},
/// evaluated through the cached per-offset sums (exactly real by Hermitian
/// symmetry).
double expectation_at(const SidKernel& kernel, double t);

/// |X(t) - diag_mass|: the decaying off-diagonal contribution.
double offdiag_envelope(const SidKernel& kernel, double t);

/// The envelope sampled over a grid.
RealSeries offdiag_envelope(const SidKernel& kernel, const TimeGrid& grid);

/// The t -> infinity limit of the continuum signal (= diag_mass).
double asymptotic_value(const SidKernel& kernel);

/// Period of the discretization artifact: the sampled signal repeats after
/// 2 pi hbar / d_omega, so decay fits must stay well inside that.
double revival_time(const SidKernel& kernel);

/// Grid on [0, 0.4 * revival_time]: long enough to expose the decay, short
/// enough that discretization echoes (which grow toward half the revival
/// period) stay negligible.
TimeGrid default_envelope_grid(const SidKernel& kernel, std::size_t n_points = 501);

/// Result of fitting A exp(-gamma t / hbar) to a decaying envelope.
struct DecayEstimate {
  double gamma = 0.0;        ///< Decay rate in energy units (> 0).
  double t_relax = 0.0;      ///< hbar / gamma.
  double residual = 0.0;     ///< RMS residual of the log-envelope fit.
  bool exponential = false;  ///< True when the residual is below threshold.
  std::size_t n_used = 0;    ///< Samples that survived window + floor cuts.
};

/// RMS log-residual at or below which a decay is labelled exponential.
inline constexpr double kExponentialResidualMax = 0.05;

/// Fits log(envelope) vs t by least squares. The initial transient is
/// excluded: the fit starts at three times the first e-folding crossing of
/// the series. Trailing samples at the numerical noise floor (1e-12 of the
/// window maximum) are cut before the log is taken; at least eight samples
/// must survive. A series that never decays below 1/e, or whose fitted rate
/// is not positive, raises FitDomainError. A decaying but non-exponential
/// shape is reported with exponential = false, not rejected.
DecayEstimate fit_decay(const RealSeries& envelope, double hbar);

/// Convenience: samples the kernel's off-diagonal envelope on
/// default_envelope_grid and fits it.
DecayEstimate fit_kernel_decay(const SidKernel& kernel, std::size_t n_points = 501);

/// One row of a grid refinement study.
struct RefinementRow {
  std::size_t n_omega = 0;
  double value = 0.0;         ///< X(t_eval) at this resolution.
  double error = 0.0;         ///< |value - finest-grid value|.
  double revival_time = 0.0;  ///< Discretization revival period at this n.
};

/// Result of a refinement study at fixed evaluation time.
struct RefinementReport {
  double t_eval = 0.0;
  std::vector<RefinementRow> rows;
  /// Convergence order estimated from the finest triple of resolutions using
  /// consecutive-level differences; 0 when not estimable (fewer than three
  /// resolutions, or differences at the roundoff floor).
  double observed_order = 0.0;
};

/// Re-samples the kernel at each resolution (ascending, at least two) and
/// evaluates X(t_eval); the per-row error column measures deviation from the
/// finest grid. Requires a resamplable family (TableKernel throws
/// std::invalid_argument).
RefinementReport grid_refinement_check(const KernelFamily& family,
                                       const std::vector<std::size_t>& resolutions,
                                       double omega_max, double hbar, double t_eval);

}  // namespace decolab

#endif  // DECOLAB_SID_HPP
