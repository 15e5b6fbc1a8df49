// SPDX-License-Identifier: Apache-2.0
#include "gstable/family.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace gstable {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw InvalidInputError(std::string(name) + " must be finite");
  }
}

}  // namespace

FamilyParams::FamilyParams(double gamma_, double a_, double c_)
    : gamma(gamma_), a(a_), c(c_) {
  require_finite(gamma, "gamma");
  require_finite(a, "a");
  require_finite(c, "c");
  if (c == 0.0) {
    throw InvalidInputError("c = 0 requires the explicit degenerate constructor");
  }
}

FamilyParams FamilyParams::degenerate(double gamma_, double a_) {
  FamilyParams p(gamma_, a_, 1.0);
  p.c = 0.0;
  return p;
}

const char* to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::CompoundPoissonGamma: return "compound-poisson-gamma";
    case CaseTag::TiltedPositiveStable: return "tilted-positive-stable";
    case CaseTag::Degenerate: return "degenerate";
    case CaseTag::TiltedExtremeStable: return "tilted-extreme-stable";
    case CaseTag::Gaussian: return "gaussian";
    case CaseTag::GeometricOnly: return "geometric-only";
  }
  return "unknown";
}

FamilyParams TiltedView::member() const {
  if (c_theta == 0.0) {
    return FamilyParams::degenerate(base.gamma, a_tilde);
  }
  return FamilyParams(base.gamma, a_tilde, c_theta);
}

CaseTag classify(const FamilyParams& params) {
  const double g = params.gamma;
  if (g == 0.0) throw IllDefinedShapeError();
  if (g < 0.0) return CaseTag::CompoundPoissonGamma;
  if (g < 1.0) return CaseTag::TiltedPositiveStable;
  if (g == 1.0) return CaseTag::Degenerate;
  if (g < 2.0) return CaseTag::TiltedExtremeStable;
  if (g == 2.0) return CaseTag::Gaussian;
  return CaseTag::GeometricOnly;
}

ValidityReport validate(const FamilyParams& params) {
  const CaseTag tag = classify(params);
  ValidityReport report;
  report.discrepancy_flag = false;
  switch (tag) {
    case CaseTag::CompoundPoissonGamma:
      report.is_valid_chf = params.a < 0.0;
      report.implemented_condition = "gamma < 0 requires A < 0";
      report.paper_claimed_condition = "A < 0 (stated as -A > 0)";
      break;
    case CaseTag::TiltedPositiveStable:
      report.is_valid_chf = params.a > 0.0;
      report.implemented_condition = "gamma in (0,1) requires A > 0";
      report.paper_claimed_condition = "A > 0";
      break;
    case CaseTag::Degenerate:
      report.is_valid_chf = true;
      report.implemented_condition = "gamma = 1 is always valid (constant at A*c)";
      report.paper_claimed_condition = "always valid";
      break;
    case CaseTag::TiltedExtremeStable:
      // |f(t)| <= 1 as |t| -> inf forces A < 0 here; the published table
      // claims A > 0 together with c < 0.
      report.is_valid_chf = params.a < 0.0;
      report.implemented_condition = "gamma in (1,2) requires A < 0; c unrestricted";
      report.paper_claimed_condition = "A > 0 and c < 0";
      report.discrepancy_flag = true;
      break;
    case CaseTag::Gaussian:
      report.is_valid_chf = params.a < 0.0;
      report.implemented_condition = "gamma = 2 requires A < 0";
      report.paper_claimed_condition = "A < 0";
      break;
    case CaseTag::GeometricOnly:
      report.is_valid_chf = false;
      report.implemented_condition = "gamma > 2 is never a valid chf (geometric extension only)";
      report.paper_claimed_condition = "not a proper probability distribution";
      break;
  }
  return report;
}

Interval theta_domain(const FamilyParams& params) {
  const double inf = std::numeric_limits<double>::infinity();
  if (params.c == 0.0) return {-inf, inf};
  if (params.c > 0.0) return {-inf, 1.0 / params.c};
  return {1.0 / params.c, inf};
}

TiltedView tilt(const FamilyParams& params, double theta) {
  require_finite(theta, "theta");
  const double b = 1.0 - params.c * theta;
  if (b <= 0.0) {
    std::ostringstream msg;
    msg << "theta = " << theta << " is at or beyond the singular point 1/c = "
        << 1.0 / params.c;
    throw SingularTiltError(msg.str());
  }
  TiltedView view{params, theta, b, 0.0, 0.0, 0.0, 0.0};
  view.alpha = std::pow(b, params.gamma);
  view.beta = 1.0 / b;
  view.a_tilde = params.a * view.alpha;
  view.c_theta = params.c / b;
  return view;
}

double cgf(const FamilyParams& params, double lambda) {
  const double w = 1.0 - lambda * params.c;
  if (w <= 0.0) {
    throw InvalidInputError("lambda outside the mgf strip: 1 - lambda*c must be positive");
  }
  return params.a * (1.0 - std::pow(w, params.gamma));
}

double cumulant(const FamilyParams& params, int n) {
  if (n < 1) throw InvalidInputError("cumulant order must be >= 1");
  double falling = 1.0;
  for (int j = 0; j < n; ++j) falling *= params.gamma - j;
  return -params.a * std::pow(-params.c, n) * falling;
}

double tweedie_power(double gamma) {
  if (gamma == 1.0) {
    throw InvalidInputError("Tweedie power is undefined at gamma = 1");
  }
  return 1.0 + 1.0 / (1.0 - gamma);
}

GeometricView make_geometric(const TiltedView& view) {
  GeometricView gview{view, std::numeric_limits<double>::quiet_NaN(), true, false};
  const CaseTag tag = classify(view.base);
  if (tag == CaseTag::CompoundPoissonGamma) {
    gview.q = -view.a_tilde / (1.0 - view.a_tilde);
  } else if (tag == CaseTag::GeometricOnly) {
    gview.case_f_caveat = true;
  }
  return gview;
}

}  // namespace gstable
