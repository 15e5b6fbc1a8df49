// SPDX-License-Identifier: Apache-2.0
#include "gstable/inversion.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>

namespace gstable {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kCdfTol = 1e-7;

double clip01(double v) { return std::min(1.0, std::max(0.0, v)); }

double std_gamma_pdf(double y, double shape) {
  if (y <= 0.0) return shape < 1.0 && y == 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return std::exp((shape - 1.0) * std::log(y) - y - std::lgamma(shape));
}

// Truncation length for a Poisson-weight sum with the given mean.
int poisson_terms(double rate) {
  return static_cast<int>(rate + 12.0 * std::sqrt(rate) + 30.0);
}

}  // namespace

double atom_mass(const FamilyParams& params) {
  if (classify(params) != CaseTag::CompoundPoissonGamma) return 0.0;
  if (!validate(params).is_valid_chf) {
    throw ValidityError("atom mass of an invalid compound-Poisson member");
  }
  return std::exp(params.a);
}

double atom_mass(const GeometricView& view) {
  if (classify(view.base) != CaseTag::CompoundPoissonGamma) return 0.0;
  if (!(view.base.a_tilde < 0.0)) {
    throw ValidityError("geometric case-a atom requires a_tilde < 0");
  }
  return 1.0 - view.q;
}

struct Inverter::Impl {
  enum class Route { PoissonSeries, Fourier, GeomMixture, GeomFourier, GeomExponential };

  Route route;
  bool geometric = false;
  FamilyParams member = FamilyParams(2.0, -1.0, 1.0);  // effective (gamma, a_tilde, c_theta)
  std::optional<GeometricView> gview;
  double pdf_tol;
  double atom = 0.0;
  double mean = 0.0;
  double sd = 0.0;

  // Poisson-gamma series (case a; also inner members of the geometric mixture).
  double rate = 0.0;   // -a_tilde
  double shape = 0.0;  // -gamma
  double scale = 0.0;  // c_theta, signed

  // Fourier inversion; models are built on first use (call_once, so a
  // shared Inverter stays safe across threads).
  std::function<Complex(double)> phi;
  mutable std::once_flag pdf_once;
  mutable std::once_flag cdf_once;
  mutable std::unique_ptr<detail::OscillatoryModel> pdf_model;
  mutable std::unique_ptr<detail::OscillatoryModel> cdf_model;
  double t_end = 0.0;
  Complex phi_end{0.0, 0.0};
  Complex dphi_end{0.0, 0.0};
  double tail_rho2 = 2.0;  // 2 * per-octave decay ratio at the truncation point

  // Exponential-time mixture nodes (geometric case a), weights include e^{-s}.
  std::vector<double> mix_s;
  std::vector<double> mix_w;

  // Geometric extension of the degenerate member: exponential with scale mu.
  double exp_mu = 0.0;

  double series_pdf(double rate_arg, double x) const;
  double series_cdf(double rate_arg, double x) const;
  void setup_fourier(std::function<Complex(double)> phi_fn, double t0, double cap);
  void ensure_pdf_model() const;
  void ensure_cdf_model() const;
  double fourier_pdf(double x) const;
  double fourier_cdf(double x, double* err_out) const;
  double plain_tail_bound() const;
};

double Inverter::Impl::series_pdf(double rate_arg, double x) const {
  const double y = x / scale;
  if (y <= 0.0) return 0.0;
  const int n_terms = poisson_terms(rate_arg);
  double log_w = -rate_arg;  // log Poisson(0)
  double sum = 0.0;
  for (int n = 1; n <= n_terms; ++n) {
    log_w += std::log(rate_arg) - std::log(static_cast<double>(n));
    sum += std::exp(log_w) * std_gamma_pdf(y, n * shape);
  }
  return sum / std::abs(scale);
}

double Inverter::Impl::series_cdf(double rate_arg, double x) const {
  const bool positive_support = scale > 0.0;
  const double a0 = std::exp(-rate_arg);
  if (positive_support && x < 0.0) return 0.0;
  if (!positive_support && x >= 0.0) return 1.0;
  const double y = x / scale;  // > 0 on the continuous side
  const int n_terms = poisson_terms(rate_arg);
  double log_w = -rate_arg;
  double sum = 0.0;
  for (int n = 1; n <= n_terms; ++n) {
    log_w += std::log(rate_arg) - std::log(static_cast<double>(n));
    const double p = boost::math::gamma_p(n * shape, y);
    // For positive scale this accumulates P(G <= y); mirrored support needs
    // the upper tail P(G >= y).
    sum += std::exp(log_w) * (positive_support ? p : 1.0 - p);
  }
  if (positive_support) return clip01(a0 + sum);
  return clip01(sum);
}

void Inverter::Impl::setup_fourier(std::function<Complex(double)> phi_fn,
                                   double t0, double cap) {
  phi = std::move(phi_fn);
  const auto abs_phi = [this](double t) { return std::abs(phi(t)); };
  t_end = detail::decay_scan(abs_phi, t0, 1e-15, cap);
  phi_end = phi(t_end);
  dphi_end = (phi_end - phi(t_end * (1.0 - 1e-4))) / (1e-4 * t_end);
  const double half_abs = std::abs(phi(0.5 * t_end));
  tail_rho2 = half_abs > 0.0 ? 2.0 * std::abs(phi_end) / half_abs : 0.0;
}

void Inverter::Impl::ensure_pdf_model() const {
  std::call_once(pdf_once, [this] {
    pdf_model = std::make_unique<detail::OscillatoryModel>(phi, t_end, 1e-10);
  });
}

void Inverter::Impl::ensure_cdf_model() const {
  std::call_once(cdf_once, [this] {
    const auto f = phi;
    const auto h = [f](double t) { return (f(t) - 1.0) / t; };
    cdf_model = std::make_unique<detail::OscillatoryModel>(h, t_end, 1e-10);
  });
}

double Inverter::Impl::plain_tail_bound() const {
  if (tail_rho2 < 0.95) {
    return std::abs(phi_end) * (t_end / 2.0) / (1.0 - tail_rho2);
  }
  return std::numeric_limits<double>::infinity();
}

double Inverter::Impl::fourier_pdf(double x) const {
  ensure_pdf_model();
  Complex integral = pdf_model->integrate(x);
  double err = pdf_model->error_bound(x);
  if (x != 0.0 && std::abs(t_end * x) < 1e14) {
    integral += detail::ibp_tail_correction(phi_end, t_end, x);
    err += 2.0 * std::abs(dphi_end) / (x * x) +
           std::abs(phi_end) * std::abs(t_end * x) * 1.1e-16;
  } else {
    err += plain_tail_bound();
  }
  err /= kPi;
  if (!(err <= pdf_tol)) {
    throw AccuracyError("pdf quadrature could not reach the requested tolerance", err);
  }
  return std::max(0.0, integral.real() / kPi);
}

double Inverter::Impl::fourier_cdf(double x, double* err_out) const {
  ensure_cdf_model();
  const Complex integral = cdf_model->integrate(x);
  double f = 0.5 - integral.imag() / kPi;
  if (x > 0.0) {
    f += detail::sine_integral(t_end * x) / kPi;
  } else if (x < 0.0) {
    f -= detail::sine_integral(-t_end * x) / kPi;
  }
  double err = cdf_model->error_bound(x) / kPi;
  const Complex u_end = phi_end / t_end;
  if (x != 0.0 && std::abs(t_end * x) < 1e14) {
    f -= detail::ibp_tail_correction(u_end, t_end, x).imag() / kPi;
    err += (2.0 * std::abs(dphi_end / t_end) / (x * x) +
            std::abs(u_end) * std::abs(t_end * x) * 1.1e-16) /
           kPi;
  } else {
    err += plain_tail_bound() / t_end / kPi;
  }
  if (err_out) *err_out = err;
  if (!(err <= kCdfTol)) {
    throw AccuracyError("cdf quadrature could not reach the requested tolerance", err);
  }
  return clip01(f);
}

namespace {

// Moments of the exponential-time mixture: X | T ~ member(a_tilde * T), so
// E X = kappa_1 and Var X = kappa_2 + kappa_1^2 of the base member.
void geometric_moments(const FamilyParams& member, double* mean, double* sd) {
  const double k1 = cumulant(member, 1);
  const double k2 = cumulant(member, 2);
  *mean = k1;
  *sd = std::sqrt(std::max(0.0, k2 + k1 * k1));
}

std::pair<std::vector<double>, std::vector<double>> exp_mixture_nodes() {
  // 192 Gauss-Legendre nodes on [0, 48]; weights carry the e^{-s} factor.
  constexpr int n = 192;
  constexpr double s_max = 48.0;
  std::vector<double> s(n), w(n);
  // Newton iteration on P_n, same construction as the 16-point table.
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double p0 = 0, p1 = 0;
    for (int iter = 0; iter < 100; ++iter) {
      p0 = 1.0;
      p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
      }
      const double dp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double pd0 = 1.0, pd1 = 0.0;
    for (int k = 0; k < n; ++k) {
      const double p2 = pd1;
      pd1 = pd0;
      pd0 = ((2.0 * k + 1.0) * x * pd1 - k * p2) / (k + 1.0);
    }
    const double dp = n * (x * pd0 - pd1) / (x * x - 1.0);
    const double node = 0.5 * s_max * (1.0 - x) ;
    const double weight = s_max / ((1.0 - x * x) * dp * dp);
    s[i] = node;
    w[i] = weight * std::exp(-node);
  }
  return {s, w};
}

}  // namespace

Inverter::Inverter(const FamilyParams& params, double pdf_abs_tol)
    : impl_(std::make_unique<Impl>()) {
  Impl& im = *impl_;
  im.member = params;
  im.pdf_tol = pdf_abs_tol;
  const CaseTag tag = classify(params);
  if (tag == CaseTag::Degenerate) {
    throw DegenerateError("degenerate member has no density");
  }
  const ValidityReport report = validate(params);
  if (!report.is_valid_chf) {
    throw ValidityError("inversion of an invalid member: " + report.implemented_condition);
  }
  im.mean = cumulant(params, 1);
  const double var = cumulant(params, 2);
  if (var < 1e-10) {
    throw DegenerateError("member is numerically degenerate (variance below 1e-10)");
  }
  im.sd = std::sqrt(var);
  if (tag == CaseTag::CompoundPoissonGamma) {
    im.route = Impl::Route::PoissonSeries;
    im.rate = -params.a;
    im.shape = -params.gamma;
    im.scale = params.c;
    im.atom = std::exp(params.a);
  } else {
    im.route = Impl::Route::Fourier;
    const FamilyParams m = params;
    const auto phi = [m](double t) { return chf_unchecked(m, t); };
    im.setup_fourier(phi, 1.0 / std::abs(params.c), 1e13);
  }
}

Inverter::Inverter(const TiltedView& view, double pdf_abs_tol)
    : Inverter(view.member(), pdf_abs_tol) {}

Inverter::Inverter(const GeometricView& view, double pdf_abs_tol)
    : impl_(std::make_unique<Impl>()) {
  Impl& im = *impl_;
  im.geometric = true;
  im.gview = view;
  im.member = view.base.member();
  im.pdf_tol = pdf_abs_tol;
  const CaseTag tag = classify(im.member);
  if (tag != CaseTag::GeometricOnly) {
    const ValidityReport report = validate(im.member);
    if (!report.is_valid_chf) {
      throw ValidityError("geometric extension of an invalid member: " +
                          report.implemented_condition);
    }
  }
  geometric_moments(im.member, &im.mean, &im.sd);
  switch (tag) {
    case CaseTag::CompoundPoissonGamma: {
      im.route = Impl::Route::GeomMixture;
      im.rate = -im.member.a;
      im.shape = -im.member.gamma;
      im.scale = im.member.c;
      im.atom = 1.0 - view.q;
      auto nodes = exp_mixture_nodes();
      im.mix_s = std::move(nodes.first);
      im.mix_w = std::move(nodes.second);
      break;
    }
    case CaseTag::Degenerate: {
      im.route = Impl::Route::GeomExponential;
      im.exp_mu = im.member.a * im.member.c;
      if (im.exp_mu == 0.0) {
        throw DegenerateError("geometric extension of the zero constant is a point mass");
      }
      im.mean = im.exp_mu;
      im.sd = std::abs(im.exp_mu);
      break;
    }
    default: {
      im.route = Impl::Route::GeomFourier;
      if (im.sd * im.sd < 1e-10) {
        throw DegenerateError("member is numerically degenerate (variance below 1e-10)");
      }
      const TiltedView base = view.base;
      const auto phi = [base](double t) { return chf_geometric(base, t); };
      const double c_abs = std::abs(im.member.c);
      im.setup_fourier(phi, c_abs > 0.0 ? 1.0 / c_abs : 1.0, 1e12);
      break;
    }
  }
}

Inverter::~Inverter() = default;
Inverter::Inverter(Inverter&&) noexcept = default;
Inverter& Inverter::operator=(Inverter&&) noexcept = default;

double Inverter::pdf(double x) const {
  const Impl& im = *impl_;
  switch (im.route) {
    case Impl::Route::PoissonSeries:
      if (x == 0.0) {
        throw InvalidInputError("mixed distribution: density undefined at the atom x = 0");
      }
      return im.series_pdf(im.rate, x);
    case Impl::Route::Fourier:
      return im.fourier_pdf(x);
    case Impl::Route::GeomMixture: {
      if (x == 0.0) {
        throw InvalidInputError("mixed distribution: density undefined at the atom x = 0");
      }
      double sum = 0.0;
      for (std::size_t i = 0; i < im.mix_s.size(); ++i) {
        sum += im.mix_w[i] * im.series_pdf(im.rate * im.mix_s[i], x);
      }
      return sum;
    }
    case Impl::Route::GeomExponential: {
      const double y = x / im.exp_mu;
      if (y <= 0.0) return 0.0;
      return std::exp(-y) / std::abs(im.exp_mu);
    }
    case Impl::Route::GeomFourier:
      return im.fourier_pdf(x);
  }
  return 0.0;
}

double Inverter::cdf(double x) const {
  const Impl& im = *impl_;
  switch (im.route) {
    case Impl::Route::PoissonSeries:
      return im.series_cdf(im.rate, x);
    case Impl::Route::Fourier:
      return im.fourier_cdf(x, nullptr);
    case Impl::Route::GeomMixture: {
      double sum = 0.0;
      for (std::size_t i = 0; i < im.mix_s.size(); ++i) {
        sum += im.mix_w[i] * im.series_cdf(im.rate * im.mix_s[i], x);
      }
      return clip01(sum);
    }
    case Impl::Route::GeomExponential: {
      if (im.exp_mu > 0.0) {
        return x < 0.0 ? 0.0 : 1.0 - std::exp(-x / im.exp_mu);
      }
      return x >= 0.0 ? 1.0 : std::exp(-x / im.exp_mu);
    }
    case Impl::Route::GeomFourier:
      return im.fourier_cdf(x, nullptr);
  }
  return 0.0;
}

double Inverter::quantile(double u) const {
  if (!(u > 1e-9 && u < 1.0 - 1e-9)) {
    throw InvalidInputError("quantile requires u in (1e-9, 1 - 1e-9)");
  }
  const Impl& im = *impl_;
  if (im.atom > 0.0) {
    const double f0 = cdf(0.0);
    if (u <= f0 && u > f0 - im.atom - 1e-12) return 0.0;
  }
  const double spread = std::max({im.sd, std::abs(im.mean) * 0.25, 1e-6});
  double lo = im.mean - 4.0 * spread;
  double hi = im.mean + 4.0 * spread;
  double step = 4.0 * spread;
  int guard = 0;
  while (cdf(lo) > u) {
    step *= 2.0;
    lo -= step;
    if (++guard > 80) throw BracketingError("quantile bracketing failed on the left");
  }
  guard = 0;
  step = 4.0 * spread;
  while (cdf(hi) < u) {
    step *= 2.0;
    hi += step;
    if (++guard > 80) throw BracketingError("quantile bracketing failed on the right");
  }
  double f_lo = cdf(lo);
  double f_hi = cdf(hi);
  const double x_tol = 1e-10 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  for (int i = 0; i < 200 && hi - lo > x_tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = cdf(mid);
    if (f_mid >= u) {
      hi = mid;
      f_hi = f_mid;
    } else {
      lo = mid;
      f_lo = f_mid;
    }
  }
  if (f_hi > f_lo) {
    const double interp = lo + (u - f_lo) * (hi - lo) / (f_hi - f_lo);
    if (interp >= lo && interp <= hi) return interp;
  }
  return 0.5 * (lo + hi);
}

double Inverter::atom() const { return impl_->atom; }
double Inverter::mean() const { return impl_->mean; }
double Inverter::stddev() const { return impl_->sd; }

double pdf_at(const FamilyParams& params, double x, double abs_tol) {
  return Inverter(params, abs_tol).pdf(x);
}
double pdf_at(const TiltedView& view, double x, double abs_tol) {
  return Inverter(view, abs_tol).pdf(x);
}
double pdf_at(const GeometricView& view, double x, double abs_tol) {
  return Inverter(view, abs_tol).pdf(x);
}
double cdf_at(const FamilyParams& params, double x) { return Inverter(params).cdf(x); }
double cdf_at(const TiltedView& view, double x) { return Inverter(view).cdf(x); }
double cdf_at(const GeometricView& view, double x) { return Inverter(view).cdf(x); }
double quantile(const FamilyParams& params, double u) { return Inverter(params).quantile(u); }
double quantile(const TiltedView& view, double u) { return Inverter(view).quantile(u); }
double quantile(const GeometricView& view, double u) { return Inverter(view).quantile(u); }

double geometric_series_cdf(const GeometricView& view, double x, double tolerance) {
  if (classify(view.base) != CaseTag::CompoundPoissonGamma) {
    throw RegimeError("geometric series requires case a (gamma < 0)");
  }
  if (!(view.base.a_tilde < 0.0)) {
    throw RegimeError("geometric series requires a_tilde < 0");
  }
  if (!(view.base.c_theta > 0.0)) {
    throw RegimeError("geometric series implemented for c_theta > 0 (positive support)");
  }
  if (!(tolerance > 0.0)) throw InvalidInputError("tolerance must be positive");
  if (x < 0.0) return 0.0;
  const double q = view.q;
  const double shape = -view.base.base.gamma;
  const double y = x / view.base.c_theta;
  int n_max = static_cast<int>(std::ceil(std::log(tolerance) / std::log(q))) + 1;
  n_max = std::min(std::max(n_max, 1), 200000);
  double weight = 1.0 - q;  // n = 0
  double sum = weight;      // unit step at zero
  for (int n = 1; n <= n_max; ++n) {
    weight *= q;
    sum += weight * boost::math::gamma_p(n * shape, y);
  }
  return clip01(sum);
}

DensityTable density_table(const Inverter& inv, double x_lo, double x_hi, int n_points) {
  if (n_points < 1) throw InvalidInputError("density table needs at least one point");
  if (n_points >= 2 && !(x_lo < x_hi)) throw InvalidInputError("x_lo must be below x_hi");
  DensityTable table;
  table.atom_at_zero = inv.atom();
  table.x.reserve(n_points);
  table.pdf.reserve(n_points);
  table.cdf.reserve(n_points);
  for (int i = 0; i < n_points; ++i) {
    const double x =
        n_points == 1 ? x_lo : x_lo + (x_hi - x_lo) * static_cast<double>(i) / (n_points - 1);
    table.x.push_back(x);
    table.pdf.push_back(inv.pdf(x));
    table.cdf.push_back(inv.cdf(x));
  }
  return table;
}

double ig_pdf(double mu, double lambda, double x) {
  if (!(mu > 0.0 && lambda > 0.0)) throw InvalidInputError("IG requires mu, lambda > 0");
  if (x <= 0.0) return 0.0;
  const double d = x - mu;
  return std::sqrt(lambda / (2.0 * kPi * x * x * x)) *
         std::exp(-lambda * d * d / (2.0 * mu * mu * x));
}

double ig_cdf(double mu, double lambda, double x) {
  if (!(mu > 0.0 && lambda > 0.0)) throw InvalidInputError("IG requires mu, lambda > 0");
  if (x <= 0.0) return 0.0;
  const double s = std::sqrt(lambda / x);
  const double term1 = normal_cdf(0.0, 1.0, s * (x / mu - 1.0));
  const double z = s * (x / mu + 1.0);
  // exp(2 lambda/mu) * Phi(-z), evaluated in log space to dodge overflow.
  const double log_phi = std::log(0.5) + std::log(std::erfc(z / std::sqrt(2.0)));
  return clip01(term1 + std::exp(2.0 * lambda / mu + log_phi));
}

double levy_pdf(double c_tilde, double x) {
  if (!(c_tilde > 0.0)) throw InvalidInputError("Levy requires c_tilde > 0");
  if (x <= 0.0) return 0.0;
  return std::sqrt(c_tilde / (2.0 * kPi)) * std::pow(x, -1.5) * std::exp(-c_tilde / (2.0 * x));
}

double levy_cdf(double c_tilde, double x) {
  if (!(c_tilde > 0.0)) throw InvalidInputError("Levy requires c_tilde > 0");
  if (x <= 0.0) return 0.0;
  return std::erfc(std::sqrt(c_tilde / (2.0 * x)));
}

double normal_pdf(double mean, double variance, double x) {
  if (!(variance > 0.0)) throw InvalidInputError("normal requires variance > 0");
  const double d = x - mean;
  return std::exp(-d * d / (2.0 * variance)) / std::sqrt(2.0 * kPi * variance);
}

double normal_cdf(double mean, double variance, double x) {
  if (!(variance > 0.0)) throw InvalidInputError("normal requires variance > 0");
  return 0.5 * std::erfc((mean - x) / std::sqrt(2.0 * variance));
}

double gamma_pdf(double shape, double scale, double x) {
  if (!(shape > 0.0 && scale > 0.0)) throw InvalidInputError("gamma requires shape, scale > 0");
  if (x <= 0.0) return 0.0;
  return std_gamma_pdf(x / scale, shape) / scale;
}

double gamma_cdf(double shape, double scale, double x) {
  if (!(shape > 0.0 && scale > 0.0)) throw InvalidInputError("gamma requires shape, scale > 0");
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p(shape, x / scale);
}

double oracle_pdf(OracleKind kind, double p1, double p2, double x) {
  switch (kind) {
    case OracleKind::InverseGaussian: return ig_pdf(p1, p2, x);
    case OracleKind::Levy: return levy_pdf(p1, x);
    case OracleKind::Normal: return normal_pdf(p1, p2, x);
    case OracleKind::Gamma: return gamma_pdf(p1, p2, x);
  }
  throw InvalidInputError("unknown oracle kind");
}

double oracle_cdf(OracleKind kind, double p1, double p2, double x) {
  switch (kind) {
    case OracleKind::InverseGaussian: return ig_cdf(p1, p2, x);
    case OracleKind::Levy: return levy_cdf(p1, x);
    case OracleKind::Normal: return normal_cdf(p1, p2, x);
    case OracleKind::Gamma: return gamma_cdf(p1, p2, x);
  }
  throw InvalidInputError("unknown oracle kind");
}

}  // namespace gstable
