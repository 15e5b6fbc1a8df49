// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <functional>

#include "gstable/family.hpp"

namespace gstable {

using Complex = std::complex<double>;

/// Uniform evaluation grid on [t_min, t_max].
struct GridSpec {
  double t_min;
  double t_max;
  int n_points;

  GridSpec(double t_min_, double t_max_, int n_points_);
  double point(int i) const;
};

/// Pieces of the subordination reading of the gamma-in-(1,2) mixture
/// identity: a Gaussian chf with mean 2 and variance 2*(-c), mixed by the
/// half-shape member through its Laplace exponent.
struct SubordinationSpec {
  double gaussian_mean;      // = 2
  double gaussian_variance;  // = 2 * (-c), requires c < 0
  double a;
  double c;
  double gamma_tilde;        // gamma / 2

  static SubordinationSpec from(const FamilyParams& params);

  /// l(u) = A [1 - (1 + cu)^{gamma/2}]  (log Laplace transform of the mixer).
  Complex laplace_exponent(Complex u) const;

  /// psi(t) = 2it - (-c) t^2  (log of the Gaussian chf).
  Complex characteristic_exponent(double t) const;
};

/// g(z) = A [1 - (1 - izc)^gamma], principal branch, on the analyticity
/// strip Re(1 - izc) > 0.  Throws StripViolationError outside it.
Complex log_chf(const FamilyParams& params, Complex z);

/// f(t) = exp g(t) for real t.  Throws ValidityError when the member is not
/// a proper chf.
Complex chf(const FamilyParams& params, double t);

/// Same formula with no validity gate; used by the magnitude and Bochner
/// probes which exist to expose invalid members.
Complex chf_unchecked(const FamilyParams& params, double t);

/// f_theta(t) = exp{ a_tilde [1 - (1 - it c_theta)^gamma] }.
Complex chf_tilted(const TiltedView& view, double t);

/// Geometric extension omega(t) = 1 / (1 - ln f_theta(t)).  Permitted for
/// gamma > 2 (case f); validity there is decided by the prober, not assumed.
Complex chf_geometric(const TiltedView& view, double t);

/// max_t | f_theta(t) - f^{alpha}(beta t) |  over the grid.
double stability_residual(const FamilyParams& params, double theta, const GridSpec& grid);

/// max_t | f_theta(t) - f(t - i theta)/f(-i theta) |  over the grid.
double tilt_residual(const FamilyParams& params, double theta, const GridSpec& grid);

/// max_t | g(t - i theta) - g(-i theta) - alpha g(beta t) |  over the grid.
double balance_residual(const FamilyParams& params, double theta, const GridSpec& grid);

/// max_t | f(t) - exp{ l(-psi(t)) } | for gamma in (1,2), c < 0.
double mixture_residual(const FamilyParams& params, const GridSpec& grid);

/// max_t |f(t)| over the grid, computed without a validity gate.
double magnitude_check(const FamilyParams& params, const GridSpec& grid);

/// Positive-definiteness probe: minimum eigenvalue over n_trials random
/// Hermitian matrices [phi(t_i - t_j)] with point sets drawn in [-T, T],
/// T cycling through {1, 10, 50}.  Deterministic for a given seed.
double bochner_check(const std::function<Complex(double)>& chf_values,
                     int n_points, int n_trials, std::uint64_t seed);

}  // namespace gstable
