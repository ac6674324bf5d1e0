#pragma once

#include <cstdint>
#include <random>

namespace rcmf {

using Rng = std::mt19937_64;

/// Stream for replica `index` of a run seeded with `seed`. The seed sequence
/// hashes both words, so replica k's stream does not depend on how many
/// replicas are requested.
Rng make_stream(std::uint64_t seed, std::uint64_t index);

/// Uniform double on [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

/// Uniform integer in [0, bound).
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

/// Exact Binomial(trials, p) variate. Sequential inversion below a mean of
/// 10, BTRD rejection above it; no normal approximation anywhere.
std::int64_t binomial(Rng& rng, std::int64_t trials, double p);

/// Same as `binomial` when the caller already holds log1p(-p), the common
/// case inside the exploration loop where p is fixed and trials vary.
std::int64_t binomial_small_mean(Rng& rng, std::int64_t trials, double p,
                                 double log_one_minus_p);

/// log Pr[Binomial(trials, p) = k]; -inf outside the support.
double binomial_log_pmf(std::int64_t trials, double p, std::int64_t k);

}  // namespace rcmf
