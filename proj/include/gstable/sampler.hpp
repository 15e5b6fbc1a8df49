// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gstable/chf.hpp"
#include "gstable/family.hpp"
#include "gstable/rng.hpp"

namespace gstable {

/// Variates plus enough metadata to reproduce them: identical
/// (member, n, seed) always yields identical values.
struct SampleBatch {
  std::vector<double> values;
  std::string member;
  std::uint64_t seed = 0;
  std::string method;
};

struct RejectionStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
};

/// Draw n variates from a valid member.  Method per regime: compound
/// Poisson-gamma (case a), tilted-stable rejection or an inverse-cdf table
/// (case b), the constant A*c (case c), inverse-cdf table (case d),
/// Gaussian (case e).
SampleBatch sample(const FamilyParams& params, std::size_t n, std::uint64_t seed);
SampleBatch sample(const TiltedView& view, std::size_t n, std::uint64_t seed);

/// Standard one-sided stable with Laplace transform exp(-s^gamma), via the
/// Kanter representation.
SampleBatch sample_positive_stable(double gamma, std::size_t n, std::uint64_t seed);

/// Exponentially tilted positive stable: propose A^{1/gamma} c S, accept
/// with probability exp(-X/c); overall acceptance rate is exp(-A).
SampleBatch sample_tilted_stable(const FamilyParams& params, std::size_t n,
                                 std::uint64_t seed, RejectionStats* stats = nullptr);

/// Geometric extension via the exponential-time construction
/// (draw T ~ Exp(1), then sample the member with A scaled by T), or the
/// explicit geometric compound for case a when the view disables it.
SampleBatch sample_geometric(const GeometricView& view, std::size_t n, std::uint64_t seed);

/// (1/n) sum exp(i t x_j) on the grid.  Requires n >= 100.
std::vector<Complex> empirical_chf(const SampleBatch& batch, const GridSpec& grid);

struct AtomSpec {
  double location;
  double mass;
};

/// sup |empirical cdf - cdf|, comparing both one-sided limits at any listed
/// atom location.
double ks_statistic(const SampleBatch& batch, const std::function<double(double)>& cdf,
                    const std::vector<AtomSpec>& atoms = {});

/// Exact primitive draws used by the per-case samplers.
namespace dist {
double normal(SplitMix64& rng);
double exponential(SplitMix64& rng);
double gamma(SplitMix64& rng, double shape);
std::uint64_t poisson(SplitMix64& rng, double mean);
double positive_stable(SplitMix64& rng, double gamma);
}  // namespace dist

}  // namespace gstable
