// SPDX-License-Identifier: Apache-2.0
#include "gstable/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "gstable/inversion.hpp"

namespace gstable {

namespace dist {

constexpr double kPi = 3.14159265358979323846;

double normal(SplitMix64& rng) {
  const double u1 = rng.uniform_open();
  const double u2 = rng.uniform_open();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

double exponential(SplitMix64& rng) { return -std::log(rng.uniform_open()); }

// Marsaglia-Tsang squeeze; shape < 1 boosted through Gamma(shape+1) * U^{1/shape}.
double gamma(SplitMix64& rng, double shape) {
  if (!(shape > 0.0)) throw InvalidInputError("gamma shape must be positive");
  if (shape < 1.0) {
    const double g = gamma(rng, shape + 1.0);
    return g * std::pow(rng.uniform_open(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double cv = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal(rng);
    double v = 1.0 + cv * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng.uniform_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

// Exact inversion: chop-down for small means, mode-centered two-sided walk
// for large ones (O(sqrt(mean)) expected).
std::uint64_t poisson(SplitMix64& rng, double mean) {
  if (!(mean >= 0.0)) throw InvalidInputError("poisson mean must be >= 0");
  if (mean == 0.0) return 0;
  if (mean < 30.0) {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double p = rng.uniform_open();
    while (p > limit) {
      ++k;
      p *= rng.uniform_open();
    }
    return k;
  }
  const double u = rng.uniform_open();
  const std::uint64_t mode = static_cast<std::uint64_t>(mean);
  const double log_pm = mode * std::log(mean) - mean - std::lgamma(mode + 1.0);
  double p_lo = std::exp(log_pm);
  double p_hi = p_lo;
  std::uint64_t k_lo = mode;
  std::uint64_t k_hi = mode;
  double cum = p_lo;
  if (u <= cum) return mode;
  const int max_steps = static_cast<int>(20.0 * std::sqrt(mean) + 200.0);
  for (int step = 0; step < max_steps; ++step) {
    ++k_hi;
    p_hi *= mean / static_cast<double>(k_hi);
    cum += p_hi;
    if (u <= cum) return k_hi;
    if (k_lo > 0) {
      p_lo *= static_cast<double>(k_lo) / mean;
      --k_lo;
      cum += p_lo;
      if (u <= cum) return k_lo;
    }
  }
  return k_hi;  // cumulative mass beyond this point is below 1e-12
}

double positive_stable(SplitMix64& rng, double g) {
  if (!(g > 0.0 && g < 1.0)) {
    throw InvalidInputError("positive stable requires gamma in (0,1)");
  }
  const double u = kPi * rng.uniform_open();
  const double e = exponential(rng);
  const double log_a = (g / (1.0 - g)) * std::log(std::sin(g * u)) +
                       std::log(std::sin((1.0 - g) * u)) -
                       (1.0 / (1.0 - g)) * std::log(std::sin(u));
  return std::exp(((1.0 - g) / g) * (log_a - std::log(e)));
}

}  // namespace dist

namespace {

constexpr std::size_t kChunk = 4096;

std::string describe(const FamilyParams& p) {
  std::ostringstream os;
  os << to_string(classify(p)) << "(gamma=" << p.gamma << ", a=" << p.a << ", c=" << p.c << ")";
  return os.str();
}

// Monotone cubic interpolant (Fritsch-Carlson) of x as a function of u.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> u, std::vector<double> x)
      : u_(std::move(u)), x_(std::move(x)), m_(u_.size(), 0.0) {
    const std::size_t n = u_.size();
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (x_[i + 1] - x_[i]) / (u_[i + 1] - u_[i]);
    m_[0] = d[0];
    m_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) m_[i] = 0.5 * (d[i - 1] + d[i]);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (d[i] == 0.0) {
        m_[i] = m_[i + 1] = 0.0;
        continue;
      }
      const double a = m_[i] / d[i];
      const double b = m_[i + 1] / d[i];
      const double s = a * a + b * b;
      if (s > 9.0) {
        const double tau = 3.0 / std::sqrt(s);
        m_[i] = tau * a * d[i];
        m_[i + 1] = tau * b * d[i];
      }
    }
  }

  double operator()(double u) const {
    auto it = std::upper_bound(u_.begin(), u_.end(), u);
    std::size_t i = it == u_.begin() ? 0 : static_cast<std::size_t>(it - u_.begin()) - 1;
    i = std::min(i, u_.size() - 2);
    const double h = u_[i + 1] - u_[i];
    const double t = (u - u_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * x_[i] + (t3 - 2 * t2 + t) * h * m_[i] +
           (-2 * t3 + 3 * t2) * x_[i + 1] + (t3 - t2) * h * m_[i + 1];
  }

  double u_front() const { return u_.front(); }
  double u_back() const { return u_.back(); }

 private:
  std::vector<double> u_;
  std::vector<double> x_;
  std::vector<double> m_;
};

// 2048-knot inverse-cdf table between quantiles 1e-5 and 1-1e-5.
class InverseCdfTable {
 public:
  explicit InverseCdfTable(const FamilyParams& params) : inv_(params) {
    const double x_lo = inv_.quantile(1e-5);
    const double x_hi = inv_.quantile(1.0 - 1e-5);
    std::vector<double> us;
    std::vector<double> xs;
    us.reserve(2048);
    xs.reserve(2048);
    for (int i = 0; i < 2048; ++i) {
      const double x = x_lo + (x_hi - x_lo) * static_cast<double>(i) / 2047.0;
      const double u = inv_.cdf(x);
      if (!us.empty() && u <= us.back()) continue;  // keep strictly increasing
      us.push_back(u);
      xs.push_back(x);
    }
    if (us.size() < 8) throw NumericError("inverse-cdf table collapsed");
    interp_.emplace(std::move(us), std::move(xs));
  }

  double draw(SplitMix64& rng) const {
    const double u = rng.uniform_open();
    if (u < interp_->u_front() || u > interp_->u_back()) {
      return inv_.quantile(std::min(1.0 - 1.001e-9, std::max(1.001e-9, u)));
    }
    return (*interp_)(u);
  }

 private:
  Inverter inv_;
  std::optional<MonotoneCubic> interp_;
};

double draw_case_a(SplitMix64& rng, double rate, double jump_shape, double scale) {
  const std::uint64_t n_jumps = dist::poisson(rng, rate);
  if (n_jumps == 0) return 0.0;
  return scale * dist::gamma(rng, jump_shape * static_cast<double>(n_jumps));
}

// One tilted-stable draw by rejection; mirrored for c < 0 by the caller.
double draw_tilted_stable(SplitMix64& rng, double g, double a, double c_abs,
                          RejectionStats* stats) {
  const double a_pow = std::pow(a, 1.0 / g);
  for (;;) {
    const double s = dist::positive_stable(rng, g);
    if (stats) ++stats->proposals;
    const double u = rng.uniform_open();
    if (std::log(u) < -a_pow * s) {
      if (stats) ++stats->accepted;
      return a_pow * c_abs * s;
    }
  }
}

template <typename PerIndex>
SampleBatch run_chunked(std::size_t n, std::uint64_t seed, PerIndex&& body) {
  SampleBatch batch;
  batch.seed = seed;
  batch.values.resize(n);
  for (std::size_t start = 0; start < n; start += kChunk) {
    SplitMix64 rng(SplitMix64::substream(seed, start / kChunk));
    const std::size_t stop = std::min(n, start + kChunk);
    for (std::size_t i = start; i < stop; ++i) batch.values[i] = body(rng);
  }
  return batch;
}

}  // namespace

SampleBatch sample(const FamilyParams& params, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw InvalidInputError("sample size must be >= 1");
  const CaseTag tag = classify(params);
  const ValidityReport report = validate(params);
  if (!report.is_valid_chf) {
    throw ValidityError("cannot sample an invalid member: " + report.implemented_condition);
  }

  SampleBatch batch;
  switch (tag) {
    case CaseTag::CompoundPoissonGamma: {
      const double rate = -params.a;
      const double shape = -params.gamma;
      const double scale = params.c;
      batch = run_chunked(n, seed, [&](SplitMix64& rng) {
        return draw_case_a(rng, rate, shape, scale);
      });
      batch.method = "compound-poisson-gamma";
      break;
    }
    case CaseTag::TiltedPositiveStable: {
      if (params.a <= 13.0) {
        RejectionStats stats;
        batch = sample_tilted_stable(params, n, seed, &stats);
        return batch;
      }
      // Rejection would accept ~exp(-A); fall back to the inverse-cdf table.
      const InverseCdfTable table(params);
      batch = run_chunked(n, seed, [&](SplitMix64& rng) { return table.draw(rng); });
      batch.method = "inverse-cdf";
      break;
    }
    case CaseTag::Degenerate: {
      batch.values.assign(n, params.a * params.c);
      batch.seed = seed;
      batch.method = "constant";
      break;
    }
    case CaseTag::TiltedExtremeStable: {
      const InverseCdfTable table(params);
      batch = run_chunked(n, seed, [&](SplitMix64& rng) { return table.draw(rng); });
      batch.method = "inverse-cdf";
      break;
    }
    case CaseTag::Gaussian: {
      const double mean = cumulant(params, 1);
      const double sd = std::sqrt(cumulant(params, 2));
      batch = run_chunked(n, seed, [&](SplitMix64& rng) {
        return mean + sd * dist::normal(rng);
      });
      batch.method = "gaussian";
      break;
    }
    case CaseTag::GeometricOnly:
      throw ValidityError("gamma > 2 members cannot be sampled directly");
  }
  batch.member = describe(params);
  return batch;
}

SampleBatch sample(const TiltedView& view, std::size_t n, std::uint64_t seed) {
  return sample(view.member(), n, seed);
}

SampleBatch sample_positive_stable(double gamma, std::size_t n, std::uint64_t seed) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw InvalidInputError("sample_positive_stable requires gamma in (0,1)");
  }
  if (n < 1) throw InvalidInputError("sample size must be >= 1");
  SampleBatch batch = run_chunked(n, seed, [&](SplitMix64& rng) {
    return dist::positive_stable(rng, gamma);
  });
  std::ostringstream os;
  os << "positive-stable(gamma=" << gamma << ")";
  batch.member = os.str();
  batch.method = "kanter";
  return batch;
}

SampleBatch sample_tilted_stable(const FamilyParams& params, std::size_t n,
                                 std::uint64_t seed, RejectionStats* stats) {
  if (classify(params) != CaseTag::TiltedPositiveStable) {
    throw RegimeError("sample_tilted_stable requires gamma in (0,1)");
  }
  if (!(params.a > 0.0)) {
    throw ValidityError("sample_tilted_stable requires A > 0");
  }
  if (std::exp(-params.a) < 1e-6) {
    throw EfficiencyError(
        "rejection acceptance rate exp(-A) below 1e-6; use inverse-cdf inversion instead");
  }
  if (n < 1) throw InvalidInputError("sample size must be >= 1");
  const double sign = params.c > 0.0 ? 1.0 : -1.0;
  const double c_abs = std::abs(params.c);
  RejectionStats local;
  SampleBatch batch = run_chunked(n, seed, [&](SplitMix64& rng) {
    return sign * draw_tilted_stable(rng, params.gamma, params.a, c_abs, &local);
  });
  if (stats) *stats = local;
  batch.member = describe(params);
  batch.method = "tilted-stable-rejection";
  return batch;
}

SampleBatch sample_geometric(const GeometricView& view, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw InvalidInputError("sample size must be >= 1");
  const FamilyParams member = view.base.member();
  const CaseTag tag = classify(member);
  if (tag == CaseTag::GeometricOnly) {
    throw ValidityError("no sampler for the geometric extension of gamma > 2 members");
  }
  const ValidityReport report = validate(member);
  if (!report.is_valid_chf) {
    throw ValidityError("geometric extension of an invalid member: " +
                        report.implemented_condition);
  }

  SampleBatch batch;
  if (tag == CaseTag::CompoundPoissonGamma && !view.exp_time_construction) {
    // Explicit geometric compound: N ~ Geometric(1-q) gamma-shaped jumps.
    const double q = view.q;
    const double shape = -member.gamma;
    const double scale = member.c;
    const double log_q = std::log(q);
    batch = run_chunked(n, seed, [&](SplitMix64& rng) {
      const double u = rng.uniform_open();
      const std::uint64_t count = static_cast<std::uint64_t>(std::log(u) / log_q);
      if (count == 0) return 0.0;
      return scale * dist::gamma(rng, shape * static_cast<double>(count));
    });
    batch.member = "geometric " + describe(member);
    batch.method = "geometric-compound";
    return batch;
  }

  switch (tag) {
    case CaseTag::CompoundPoissonGamma: {
      const double rate = -member.a;
      const double shape = -member.gamma;
      const double scale = member.c;
      batch = run_chunked(n, seed, [&](SplitMix64& rng) {
        const double t_exp = dist::exponential(rng);
        return draw_case_a(rng, rate * t_exp, shape, scale);
      });
      break;
    }
    case CaseTag::TiltedPositiveStable: {
      const double g = member.gamma;
      const double sign = member.c > 0.0 ? 1.0 : -1.0;
      const double c_abs = std::abs(member.c);
      batch = run_chunked(n, seed, [&](SplitMix64& rng) {
        const double a_scaled = member.a * dist::exponential(rng);
        if (a_scaled <= 5.0) {
          return sign * draw_tilted_stable(rng, g, a_scaled, c_abs, nullptr);
        }
        // Strongly damped draws are cheaper through the quantile than
        // through exp(-a_scaled) rejection.
        const Inverter inv(FamilyParams(g, a_scaled, member.c));
        const double u = std::min(1.0 - 2e-9, std::max(2e-9, rng.uniform_open()));
        return inv.quantile(u);
      });
      break;
    }
    case CaseTag::Degenerate: {
      const double mu = member.a * member.c;
      batch = run_chunked(n, seed, [&](SplitMix64& rng) {
        return mu * dist::exponential(rng);
      });
      break;
    }
    case CaseTag::TiltedExtremeStable: {
      batch = run_chunked(n, seed, [&](SplitMix64& rng) {
        const double a_scaled = member.a * dist::exponential(rng);
        const Inverter inv(FamilyParams(member.gamma, a_scaled, member.c));
        const double u = std::min(1.0 - 2e-9, std::max(2e-9, rng.uniform_open()));
        return inv.quantile(u);
      });
      break;
    }
    case CaseTag::Gaussian: {
      batch = run_chunked(n, seed, [&](SplitMix64& rng) {
        const double a_scaled = member.a * dist::exponential(rng);
        const double mean = 2.0 * a_scaled * member.c;
        const double sd = std::sqrt(-2.0 * a_scaled * member.c * member.c);
        return mean + sd * dist::normal(rng);
      });
      break;
    }
    case CaseTag::GeometricOnly:
      break;  // unreachable
  }
  batch.member = "geometric " + describe(member);
  batch.method = "exp-time";
  return batch;
}

std::vector<Complex> empirical_chf(const SampleBatch& batch, const GridSpec& grid) {
  if (batch.values.size() < 100) {
    throw InvalidInputError("empirical chf requires at least 100 samples");
  }
  std::vector<Complex> out(grid.n_points);
  const double inv_n = 1.0 / static_cast<double>(batch.values.size());
  for (int i = 0; i < grid.n_points; ++i) {
    const double t = grid.point(i);
    Complex acc(0.0, 0.0);
    for (const double x : batch.values) acc += std::exp(Complex(0.0, t * x));
    out[i] = acc * inv_n;
  }
  return out;
}

double ks_statistic(const SampleBatch& batch, const std::function<double(double)>& cdf,
                    const std::vector<AtomSpec>& atoms) {
  if (batch.values.empty()) throw InvalidInputError("ks_statistic needs a nonempty batch");
  std::vector<double> sorted = batch.values;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double x = sorted[i];
    const double f = cdf(x);
    double f_left = f;
    for (const AtomSpec& atom : atoms) {
      if (x == atom.location) f_left = f - atom.mass;
    }
    d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / n - f));
    d = std::max(d, std::abs(f_left - static_cast<double>(i) / n));
  }
  return d;
}

}  // namespace gstable
