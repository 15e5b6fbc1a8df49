// SPDX-License-Identifier: Apache-2.0
#include "gstable/chf.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "gstable/rng.hpp"

namespace gstable {

GridSpec::GridSpec(double t_min_, double t_max_, int n_points_)
    : t_min(t_min_), t_max(t_max_), n_points(n_points_) {
  if (n_points < 1) throw InvalidInputError("grid needs at least one point");
  if (n_points >= 2 && !(t_min < t_max)) {
    throw InvalidInputError("grid requires t_min < t_max");
  }
}

double GridSpec::point(int i) const {
  if (n_points == 1) return t_min;
  return t_min + (t_max - t_min) * static_cast<double>(i) / (n_points - 1);
}

SubordinationSpec SubordinationSpec::from(const FamilyParams& params) {
  if (!(params.gamma > 1.0 && params.gamma < 2.0)) {
    throw RegimeError("subordination spec requires gamma in (1,2)");
  }
  if (params.c >= 0.0) {
    throw RegimeError("subordination spec requires c < 0 (Gaussian variance 2*(-c) > 0)");
  }
  return SubordinationSpec{2.0, 2.0 * (-params.c), params.a, params.c, params.gamma / 2.0};
}

Complex SubordinationSpec::laplace_exponent(Complex u) const {
  return a * (1.0 - std::pow(1.0 + c * u, gamma_tilde));
}

Complex SubordinationSpec::characteristic_exponent(double t) const {
  const double c_bar = -c;
  return Complex(-c_bar * t * t, 2.0 * t);
}

Complex log_chf(const FamilyParams& params, Complex z) {
  const Complex w = 1.0 - Complex(0.0, 1.0) * z * params.c;
  if (!(w.real() > 0.0)) {
    std::ostringstream msg;
    msg << "argument outside the analyticity strip: Re(1 - izc) = " << w.real()
        << " <= 0, boundary at Im(z) = " << -1.0 / params.c;
    throw StripViolationError(msg.str());
  }
  return params.a * (1.0 - std::pow(w, params.gamma));
}

Complex chf_unchecked(const FamilyParams& params, double t) {
  return std::exp(log_chf(params, Complex(t, 0.0)));
}

Complex chf(const FamilyParams& params, double t) {
  const ValidityReport report = validate(params);
  if (!report.is_valid_chf) {
    throw ValidityError("not a valid chf: " + report.implemented_condition);
  }
  return chf_unchecked(params, t);
}

Complex chf_tilted(const TiltedView& view, double t) {
  const Complex w = Complex(1.0, -t * view.c_theta);
  return std::exp(view.a_tilde * (1.0 - std::pow(w, view.base.gamma)));
}

Complex chf_geometric(const TiltedView& view, double t) {
  const CaseTag tag = classify(view.base);
  if (tag != CaseTag::GeometricOnly) {
    const ValidityReport report = validate(view.member());
    if (!report.is_valid_chf) {
      throw ValidityError("geometric extension of an invalid member: " +
                          report.implemented_condition);
    }
  }
  const Complex w = Complex(1.0, -t * view.c_theta);
  const Complex log_f = view.a_tilde * (1.0 - std::pow(w, view.base.gamma));
  const Complex denom = 1.0 - log_f;
  if (std::abs(denom) < 1e-300) {
    throw OverflowError("geometric chf denominator below 1e-300");
  }
  return 1.0 / denom;
}

namespace {

TiltedView checked_tilt(const FamilyParams& params, double theta) {
  if (!theta_domain(params).contains(theta) && theta != 0.0) {
    throw SingularTiltError("theta outside the natural domain");
  }
  return tilt(params, theta);
}

}  // namespace

double stability_residual(const FamilyParams& params, double theta, const GridSpec& grid) {
  const TiltedView view = checked_tilt(params, theta);
  double worst = 0.0;
  for (int i = 0; i < grid.n_points; ++i) {
    const double t = grid.point(i);
    const Complex lhs = chf_tilted(view, t);
    const Complex rhs = std::exp(view.alpha * log_chf(params, Complex(view.beta * t, 0.0)));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double tilt_residual(const FamilyParams& params, double theta, const GridSpec& grid) {
  const TiltedView view = checked_tilt(params, theta);
  const Complex g_at_tilt = log_chf(params, Complex(0.0, -theta));
  double worst = 0.0;
  for (int i = 0; i < grid.n_points; ++i) {
    const double t = grid.point(i);
    const Complex lhs = chf_tilted(view, t);
    const Complex rhs = std::exp(log_chf(params, Complex(t, -theta)) - g_at_tilt);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double balance_residual(const FamilyParams& params, double theta, const GridSpec& grid) {
  const TiltedView view = checked_tilt(params, theta);
  const Complex g_at_tilt = log_chf(params, Complex(0.0, -theta));
  double worst = 0.0;
  for (int i = 0; i < grid.n_points; ++i) {
    const double t = grid.point(i);
    const Complex lhs = log_chf(params, Complex(t, -theta));
    const Complex rhs = g_at_tilt + view.alpha * log_chf(params, Complex(view.beta * t, 0.0));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double mixture_residual(const FamilyParams& params, const GridSpec& grid) {
  const SubordinationSpec spec = SubordinationSpec::from(params);
  double worst = 0.0;
  for (int i = 0; i < grid.n_points; ++i) {
    const double t = grid.point(i);
    const Complex lhs = chf_unchecked(params, t);
    const Complex rhs = std::exp(spec.laplace_exponent(-spec.characteristic_exponent(t)));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double magnitude_check(const FamilyParams& params, const GridSpec& grid) {
  double worst = 0.0;
  for (int i = 0; i < grid.n_points; ++i) {
    worst = std::max(worst, std::abs(chf_unchecked(params, grid.point(i))));
  }
  return worst;
}

double bochner_check(const std::function<Complex(double)>& chf_values,
                     int n_points, int n_trials, std::uint64_t seed) {
  if (n_points < 2 || n_points > 128) {
    throw InvalidInputError("bochner_check requires 2 <= n_points <= 128");
  }
  if (n_trials < 1) throw InvalidInputError("bochner_check requires n_trials >= 1");

  // Hermitian symmetry of the supplied values is a prerequisite of the probe.
  {
    SplitMix64 rng(SplitMix64::substream(seed, 0xB0C4));
    for (int i = 0; i < 8; ++i) {
      const double s = (rng.uniform() - 0.5) * 20.0;
      const Complex fwd = chf_values(s);
      const Complex bwd = chf_values(-s);
      if (std::abs(bwd - std::conj(fwd)) > 1e-8 * (1.0 + std::abs(fwd))) {
        throw InvalidInputError("chf values are not Hermitian: phi(-t) != conj(phi(t))");
      }
    }
  }

  static constexpr double kScales[] = {1.0, 10.0, 50.0};
  double min_eig = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < n_trials; ++trial) {
    SplitMix64 rng(SplitMix64::substream(seed, static_cast<std::uint64_t>(trial) + 1));
    const double scale = kScales[trial % 3];
    std::vector<double> points(n_points);
    for (int i = 0; i < n_points; ++i) points[i] = (2.0 * rng.uniform() - 1.0) * scale;

    Eigen::MatrixXcd m(n_points, n_points);
    for (int i = 0; i < n_points; ++i) {
      m(i, i) = chf_values(0.0).real();
      for (int j = i + 1; j < n_points; ++j) {
        const Complex v = chf_values(points[i] - points[j]);
        m(i, j) = v;
        m(j, i) = std::conj(v);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    min_eig = std::min(min_eig, solver.eigenvalues().minCoeff());
  }
  return min_eig;
}

}  // namespace gstable
