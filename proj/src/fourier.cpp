// SPDX-License-Identifier: Apache-2.0
#include "gstable/fourier.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace gstable::detail {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 16-point Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton
// iteration on P_16.
struct GaussLegendre16 {
  std::array<double, 16> node;
  std::array<double, 16> weight;

  GaussLegendre16() {
    const int n = 16;
    for (int i = 0; i < n / 2; ++i) {
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
      p0 = 1.0;
      p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
      }
      const double dp = n * (x * p0 - p1) / (x * x - 1.0);
      node[i] = -x;
      node[n - 1 - i] = x;
      weight[i] = weight[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

const GaussLegendre16& gl16() {
  static const GaussLegendre16 table;
  return table;
}

// P_k(node_j) for k, j in 0..15.
const std::array<std::array<double, 16>, 16>& legendre_table();

// Legendre polynomial values P_0..P_{kmax} at x.
void legendre_values(double x, int kmax, double* out) {
  out[0] = 1.0;
  if (kmax >= 1) out[1] = x;
  for (int k = 1; k < kmax; ++k) {
    out[k + 1] = ((2.0 * k + 1.0) * x * out[k] - k * out[k - 1]) / (k + 1.0);
  }
}

const std::array<std::array<double, 16>, 16>& legendre_table() {
  static const auto table = [] {
    std::array<std::array<double, 16>, 16> t{};
    std::array<double, 16> col{};
    for (int j = 0; j < 16; ++j) {
      legendre_values(gl16().node[j], 15, col.data());
      for (int k = 0; k < 16; ++k) t[k][j] = col[k];
    }
    return t;
  }();
  return table;
}

}  // namespace

double sine_integral(double x) {
  const double ax = std::abs(x);
  double result;
  if (ax <= 4.0) {
    // Power series sum (-1)^k x^{2k+1} / ((2k+1)(2k+1)!).
    double term = ax;
    double sum = ax;
    for (int k = 1; k < 40; ++k) {
      term *= -ax * ax / ((2.0 * k) * (2.0 * k + 1.0));
      sum += term / (2.0 * k + 1.0);
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    result = sum;
  } else {
    // Si(x) = pi/2 + Im E1(ix); E1 by the Lentz continued fraction, which
    // converges on the imaginary axis for moderate |x|.
    const Complex z(0.0, ax);
    Complex b = z + 1.0;
    Complex c = 1.0 / 1e-30;
    Complex d = 1.0 / b;
    Complex h = d;
    for (int i = 1; i <= 200; ++i) {
      const double an = -static_cast<double>(i) * i;
      b += 2.0;
      d = 1.0 / (an * d + b);
      c = b + an / c;
      const Complex delta = c * d;
      h *= delta;
      if (std::abs(delta - 1.0) < 1e-16) break;
    }
    const Complex e1 = h * std::exp(-z);
    result = kPi / 2.0 + e1.imag();
  }
  return x < 0.0 ? -result : result;
}

void spherical_bessel_j(double omega, int kmax, double* out) {
  if (omega < 0.0) throw std::invalid_argument("spherical_bessel_j: omega must be >= 0");
  if (omega < 1e-8) {
    // j_k(w) ~ w^k / (2k+1)!!
    double v = 1.0;
    for (int k = 0; k <= kmax; ++k) {
      out[k] = v;
      v *= omega / (2.0 * k + 3.0);
    }
    out[0] = 1.0 - omega * omega / 6.0;
    return;
  }
  const double j0 = std::sin(omega) / omega;
  if (omega > kmax + 2.0) {
    // Upward recurrence is stable when omega exceeds the order.
    out[0] = j0;
    if (kmax >= 1) out[1] = j0 / omega - std::cos(omega) / omega;
    for (int k = 1; k < kmax; ++k) {
      out[k + 1] = (2.0 * k + 1.0) / omega * out[k] - out[k - 1];
    }
    return;
  }
  // Downward Miller recurrence, normalized by j0.
  const int start = kmax + 16 + static_cast<int>(omega);
  double jp = 0.0;
  double jc = 1e-30;
  for (int k = start; k >= 0; --k) {
    const double jm = (2.0 * k + 3.0) / omega * jc - jp;
    jp = jc;
    jc = jm;
    if (k <= kmax) out[k] = jm;
    if (std::abs(jc) > 1e250) {
      jp /= 1e250;
      jc /= 1e250;
      for (int i = std::min(kmax, k); i <= kmax; ++i) out[i] /= 1e250;
    }
  }
  const double norm = j0 / jc;
  for (int k = 0; k <= kmax; ++k) out[k] *= norm;
}

OscillatoryModel::OscillatoryModel(const std::function<Complex(double)>& f,
                                   double t_end, double abs_tol, int max_panels)
    : t_end_(t_end), model_error_(0.0) {
  if (!(t_end > 0.0)) throw std::invalid_argument("OscillatoryModel: t_end must be > 0");
  const auto& gl = gl16();

  // Work stack of intervals, starting from a geometric subdivision so that
  // long smooth stretches cost O(log T) panels.
  std::vector<std::pair<double, double>> stack;
  {
    double w0 = t_end;
    while (w0 > 0.5) w0 /= 2.0;
    double lo = 0.0, hi = w0;
    std::vector<std::pair<double, double>> fwd;
    while (lo < t_end) {
      fwd.emplace_back(lo, hi);
      lo = hi;
      hi = std::min(t_end, 2.0 * hi);
    }
    stack.assign(fwd.rbegin(), fwd.rend());
  }

  const auto& pk = legendre_table();
  while (!stack.empty()) {
    const auto [lo, hi] = stack.back();
    stack.pop_back();
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);

    Panel panel;
    panel.mid = mid;
    panel.half = half;

    std::array<Complex, kNodes> fv;
    for (int j = 0; j < kNodes; ++j) fv[j] = f(mid + half * gl.node[j]);

    double mass = 0.0;
    for (int k = 0; k < kNodes; ++k) {
      Complex acc(0.0, 0.0);
      for (int j = 0; j < kNodes; ++j) acc += gl.weight[j] * fv[j] * pk[k][j];
      panel.coef[k] = (2.0 * k + 1.0) / 2.0 * acc;
      mass += std::abs(panel.coef[k]);
    }
    panel.coef_mass = mass;

    const double tail = std::abs(panel.coef[kNodes - 2]) + std::abs(panel.coef[kNodes - 1]);
    const double err_est = 2.0 * half * tail * 2.0;
    const double budget = abs_tol * (half / t_end_) + abs_tol * 1e-5;
    if (err_est > budget && static_cast<int>(panels_.size()) + static_cast<int>(stack.size()) < max_panels &&
        half > 1e-14 * (1.0 + mid)) {
      stack.emplace_back(mid, hi);
      stack.emplace_back(lo, mid);
      continue;
    }
    model_error_ += err_est;
    panels_.push_back(panel);
  }

  f_end_ = f(t_end);
  const double h = 1e-4 * t_end;
  df_end_ = (f_end_ - f(t_end - h)) / h;
  abs_f_half_ = std::abs(f(0.5 * t_end));
}

Complex OscillatoryModel::integrate(double x) const {
  Complex total(0.0, 0.0);
  std::array<double, kNodes> jk;
  for (const Panel& p : panels_) {
    const double omega = p.half * x;
    spherical_bessel_j(std::abs(omega), kNodes - 1, jk.data());
    // M_k(omega) = 2 (-i)^k j_k(omega) for omega >= 0; conjugate pattern for
    // omega < 0 since j_k is real.
    Complex sum(0.0, 0.0);
    Complex ik(1.0, 0.0);
    const Complex step = (omega >= 0.0) ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
    for (int k = 0; k < kNodes; ++k) {
      sum += p.coef[k] * ik * (2.0 * jk[k]);
      ik *= step;
    }
    const double phase = -p.mid * x;
    total += p.half * std::exp(Complex(0.0, phase)) * sum;
  }
  return total;
}

double OscillatoryModel::error_bound(double x) const {
  double err = model_error_;
  // Phase-resolution allowance: each panel's phase mid*x carries relative
  // error ~1e-16 * |mid*x|.
  for (const Panel& p : panels_) {
    err += 2.0 * p.half * p.coef_mass * std::min(1.0, std::abs(p.mid * x) * 1.1e-16);
  }
  return err;
}

Complex ibp_tail_correction(Complex f_end, double t_end, double x) {
  if (x == 0.0 || std::abs(t_end * x) >= 1e14) return Complex(0.0, 0.0);
  return f_end * std::exp(Complex(0.0, -t_end * x)) / Complex(0.0, x);
}

double decay_scan(const std::function<double(double)>& abs_f, double t0,
                  double floor, double cap) {
  double t = std::max(t0, 1e-6);
  while (t < cap) {
    bool below = true;
    for (int i = 1; i <= 8; ++i) {
      if (abs_f(t * (1.0 + i / 8.0)) > floor) {
        below = false;
        break;
      }
    }
    if (below) return std::min(2.0 * t, cap);
    t *= 2.0;
  }
  return cap;
}

}  // namespace gstable::detail
