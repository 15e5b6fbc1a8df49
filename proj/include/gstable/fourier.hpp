// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

namespace gstable::detail {

using Complex = std::complex<double>;

/// Sine integral Si(x) = int_0^x sin(u)/u du.
double sine_integral(double x);

/// Spherical Bessel j_0..j_kmax at omega >= 0 into out[0..kmax].
void spherical_bessel_j(double omega, int kmax, double* out);

/// Piecewise Legendre model of a smooth complex-valued function on [0, T],
/// built once and integrated against e^{-itx} for any x afterwards.  Panels
/// are refined until the tail of each local Legendre expansion meets its
/// share of abs_tol, so the quadrature error bound is uniform in x.
class OscillatoryModel {
 public:
  static constexpr int kNodes = 16;

  OscillatoryModel(const std::function<Complex(double)>& f, double t_end,
                   double abs_tol, int max_panels = 4000);

  /// int_0^T f(t) e^{-itx} dt over the modelled panels.  Tail handling
  /// beyond T is the caller's business (IBP correction or a sine-integral
  /// term, depending on the integrand).
  Complex integrate(double x) const;

  /// Bound on int_0^T |f - model| plus the phase-resolution allowance at x.
  double error_bound(double x) const;

  double t_end() const { return t_end_; }
  Complex f_at_end() const { return f_end_; }
  Complex df_at_end() const { return df_end_; }
  double abs_f_at_half() const { return abs_f_half_; }

 private:
  struct Panel {
    double mid;
    double half;
    std::array<Complex, kNodes> coef;
    double coef_mass;  // sum |a_k|, used for phase-error accounting
  };

  std::vector<Panel> panels_;
  double t_end_;
  double model_error_;
  Complex f_end_;
  Complex df_end_;
  double abs_f_half_;
};

/// f(T) e^{-iTx} / (ix): first integration-by-parts term for the tail
/// int_T^inf f e^{-itx} dt of a smooth decaying integrand.  Zero when the
/// phase T*x cannot be resolved in double precision.
Complex ibp_tail_correction(Complex f_end, double t_end, double x);

/// Scan outward from t0, doubling, until |f| stays below `floor` across an
/// octave or `cap` is reached.  Returns the truncation point.
double decay_scan(const std::function<double(double)>& abs_f, double t0,
                  double floor, double cap);

}  // namespace gstable::detail
