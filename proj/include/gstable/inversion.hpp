// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <vector>

#include "gstable/chf.hpp"
#include "gstable/family.hpp"
#include "gstable/fourier.hpp"

namespace gstable {

/// Grid of (x, pdf, cdf) plus the point mass at zero for mixed members.
struct DensityTable {
  std::vector<double> x;
  std::vector<double> pdf;
  std::vector<double> cdf;
  double atom_at_zero = 0.0;
};

/// Point mass at zero: e^A for compound-Poisson-gamma members, 1-q for their
/// geometric extensions, 0 everywhere else.
double atom_mass(const FamilyParams& params);
double atom_mass(const GeometricView& view);

/// Density/cdf evaluation facade for one member.  Construction picks the
/// route (exact mixture series for case a, characteristic-function inversion
/// for the rest) and prebuilds whatever that route needs, so evaluation is
/// cheap and the object is safe to share across threads.
class Inverter {
 public:
  explicit Inverter(const FamilyParams& params, double pdf_abs_tol = 1e-9);
  explicit Inverter(const TiltedView& view, double pdf_abs_tol = 1e-9);
  explicit Inverter(const GeometricView& view, double pdf_abs_tol = 1e-9);
  ~Inverter();
  Inverter(Inverter&&) noexcept;
  Inverter& operator=(Inverter&&) noexcept;

  /// Density of the continuous part.  Mixed members reject x == 0.
  double pdf(double x) const;

  /// F(x) including the atom, clipped to [0, 1].
  double cdf(double x) const;

  /// Inverse cdf for u in (1e-9, 1-1e-9); returns 0 when u falls inside
  /// the atom.
  double quantile(double u) const;

  double atom() const;
  double mean() const;
  double stddev() const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

double pdf_at(const FamilyParams& params, double x, double abs_tol = 1e-9);
double pdf_at(const TiltedView& view, double x, double abs_tol = 1e-9);
double pdf_at(const GeometricView& view, double x, double abs_tol = 1e-9);
double cdf_at(const FamilyParams& params, double x);
double cdf_at(const TiltedView& view, double x);
double cdf_at(const GeometricView& view, double x);
double quantile(const FamilyParams& params, double u);
double quantile(const TiltedView& view, double u);
double quantile(const GeometricView& view, double u);

/// Corrected convolution series for geometric case a:
///   Omega(x) = sum_{n>=0} (1-q) q^n F_Gamma(n*gamma_bar, c_theta)(x),
/// truncated once q^{N+1} <= tolerance.
double geometric_series_cdf(const GeometricView& view, double x, double tolerance);

DensityTable density_table(const Inverter& inv, double x_lo, double x_hi, int n_points);

// Closed-form oracles for the special cases.
double ig_pdf(double mu, double lambda, double x);
double ig_cdf(double mu, double lambda, double x);
double levy_pdf(double c_tilde, double x);
double levy_cdf(double c_tilde, double x);
double normal_pdf(double mean, double variance, double x);
double normal_cdf(double mean, double variance, double x);
double gamma_pdf(double shape, double scale, double x);
double gamma_cdf(double shape, double scale, double x);

enum class OracleKind { InverseGaussian, Levy, Normal, Gamma };

/// Dispatcher over the closed forms; p2 is ignored for Levy.
double oracle_pdf(OracleKind kind, double p1, double p2, double x);
double oracle_cdf(OracleKind kind, double p1, double p2, double x);

}  // namespace gstable
