#include "rcmf/random.hpp"

#include <boost/random/binomial_distribution.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rcmf {

namespace {

constexpr double kInversionMeanLimit = 10.0;

// Sequential search from k = 0; `p` must be <= 1/2 and the mean small.
std::int64_t invert(Rng& rng, std::int64_t trials, double p, double log_q) {
  double u = uniform01(rng);
  double pk = std::exp(static_cast<double>(trials) * log_q);
  const double odds = p / (1.0 - p);
  std::int64_t k = 0;
  while (u >= pk) {
    u -= pk;
    if (k == trials) {
      // Rounding left a sliver of mass beyond the support.
      return trials;
    }
    ++k;
    pk *= odds * static_cast<double>(trials - k + 1) / static_cast<double>(k);
    if (pk <= 0.0) {
      return k;
    }
  }
  return k;
}

}  // namespace

Rng make_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32),
                    0x52434d46u};
  return Rng(seq);
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound == 0) {
    throw std::invalid_argument("uniform_below: empty range");
  }
  // Lemire's nearly-divisionless method.
  std::uint64_t x = rng();
  __uint128_t m = static_cast<__uint128_t>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = rng();
      m = static_cast<__uint128_t>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::int64_t binomial_small_mean(Rng& rng, std::int64_t trials, double p,
                                 double log_one_minus_p) {
  if (trials <= 0 || p <= 0.0) {
    return 0;
  }
  if (p <= 0.5 && static_cast<double>(trials) * p < kInversionMeanLimit) {
    return invert(rng, trials, p, log_one_minus_p);
  }
  return binomial(rng, trials, p);
}

std::int64_t binomial(Rng& rng, std::int64_t trials, double p) {
  if (trials < 0 || !(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("binomial: invalid parameters");
  }
  if (trials == 0 || p == 0.0) {
    return 0;
  }
  if (p == 1.0) {
    return trials;
  }
  if (p > 0.5) {
    return trials - binomial(rng, trials, 1.0 - p);
  }
  if (static_cast<double>(trials) * p < kInversionMeanLimit) {
    return invert(rng, trials, p, std::log1p(-p));
  }
  boost::random::binomial_distribution<std::int64_t, double> dist(trials, p);
  return dist(rng);
}

double binomial_log_pmf(std::int64_t trials, double p, std::int64_t k) {
  if (k < 0 || k > trials) {
    return -std::numeric_limits<double>::infinity();
  }
  if (p == 0.0) {
    return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  if (p == 1.0) {
    return k == trials ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  const auto t = static_cast<double>(trials);
  const auto kk = static_cast<double>(k);
  return std::lgamma(t + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(t - kk + 1.0) +
         kk * std::log(p) + (t - kk) * std::log1p(-p);
}

}  // namespace rcmf
