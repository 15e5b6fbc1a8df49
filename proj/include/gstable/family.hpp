// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "gstable/errors.hpp"

namespace gstable {

/// One member of the family with log-chf  g(t) = A [1 - (1 - itc)^gamma].
///
/// gamma is the shape exponent (gamma <= 2 for a proper chf; gamma > 2 is
/// only meaningful through its geometric extension), A scales the exponent
/// and c carries the units of the random variable.
struct FamilyParams {
  double gamma;
  double a;
  double c;

  FamilyParams(double gamma_, double a_, double c_);

  /// Explicit escape hatch for c == 0 (constant-at-zero member).
  static FamilyParams degenerate(double gamma_, double a_);

  double gamma_bar() const { return -gamma; }     // shape of the gamma jumps, case a
  double gamma_tilde() const { return gamma / 2.0; }
  double a_bar() const { return -a; }
};

enum class CaseTag {
  CompoundPoissonGamma,  // gamma < 0
  TiltedPositiveStable,  // 0 < gamma < 1
  Degenerate,            // gamma = 1
  TiltedExtremeStable,   // 1 < gamma < 2
  Gaussian,              // gamma = 2
  GeometricOnly,         // gamma > 2
};

const char* to_string(CaseTag tag);

struct ValidityReport {
  bool is_valid_chf;
  std::string implemented_condition;
  std::string paper_claimed_condition;
  bool discrepancy_flag;
};

/// theta together with everything derived from it.  B = 1 - c*theta must be
/// positive; the tilted member (gamma, a_tilde, c_theta) is again a family
/// member with the same case tag.
struct TiltedView {
  FamilyParams base;
  double theta;
  double b_factor;  // B = 1 - c*theta
  double a_tilde;   // A * B^gamma
  double c_theta;   // c / B
  double alpha;     // (1 - c*theta)^gamma
  double beta;      // 1 / (1 - c*theta)

  FamilyParams member() const;
};

struct Interval {
  double lo;
  double hi;
  bool contains(double x) const { return x > lo && x < hi; }
};

/// Geometric extension of a (tilted) member: chf 1 / (1 - ln f_theta).
/// For case a the convolution-series ratio q = -a_tilde / (1 - a_tilde)
/// lies in (0,1); other cases sample through the exponential-time
/// construction only.
struct GeometricView {
  TiltedView base;
  double q;                          // NaN outside case a
  bool exp_time_construction = true;
  bool case_f_caveat = false;        // gamma > 2: validity is empirical
};

GeometricView make_geometric(const TiltedView& view);

/// Regime of gamma.  Total on gamma != 0; throws IllDefinedShapeError at 0.
CaseTag classify(const FamilyParams& params);

/// Sign conditions under which the chf formula is a proper chf.  The
/// implemented table follows the |f(t)| <= 1 necessity argument; for
/// gamma in (1,2) this contradicts the published condition, which the
/// report records via discrepancy_flag.
ValidityReport validate(const FamilyParams& params);

/// Natural domain of theta: { theta : 1 - c*theta > 0 }.
Interval theta_domain(const FamilyParams& params);

/// Exponential tilt by theta.  Throws SingularTiltError at or beyond 1/c.
TiltedView tilt(const FamilyParams& params, double theta);

/// Cumulant generating function m(lambda) = A [1 - (1 - lambda c)^gamma],
/// defined on 1 - lambda c > 0.
double cgf(const FamilyParams& params, double lambda);

/// n-th cumulant  kappa_n = -A (-c)^n gamma (gamma-1) ... (gamma-n+1).
double cumulant(const FamilyParams& params, int n);

/// Tweedie power p = 1 + 1/(1 - gamma); undefined at gamma = 1.
double tweedie_power(double gamma);

}  // namespace gstable
