#pragma once

#include "rcmf/random.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace rcmf {

/// Lazy symmetric walk: X_i = +c_i or -c_i with probability r each, 0
/// otherwise. Requires r in (0, 1/2].
struct WalkSpec {
  std::vector<std::int64_t> steps;  // c_1..c_m
  std::int64_t A = 1;
  double r = 0.5;
  std::int64_t d = 0;
};

struct Proportion {
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 1.0;
};

/// Wilson score interval at normal quantile z.
Proportion wilson_interval(std::int64_t successes, std::int64_t trials, double z = 3.29);

struct RwMaxTail {
  Proportion max_tail;    // Pr[M_n >= y], M_n = max(S_1..S_n)
  Proportion sum_tail;    // Pr[S_n >= y + 8A + 1]
  /// Not refuted at interval slack: max_tail.upper >= 2 * sum_tail.lower.
  bool holds = false;
};

/// Monte Carlo estimates of Pr[M_n >= y] and Pr[S_n >= y + 8A + 1].
/// Requires A <= c_i <= 4A.
RwMaxTail rw_max_tail(const WalkSpec& spec, std::int64_t y, std::int64_t trials, Rng& rng);

struct RwCoupling {
  Proportion success;  // d <= X - Y <= d + 2A
  double bound = 0.0;  // 1 - delta (d + A) / (A sqrt m), delta = 10 / sqrt r
};

/// Two walks X, Y with the same steps. Pairs (X_k, Y_k) run independently
/// while the partial difference D_k is below d; afterwards Y copies X.
/// Success means d <= X - Y <= d + 2A. Requires A <= c_i <= 2A.
RwCoupling rw_difference_coupling(const WalkSpec& spec, std::int64_t trials, Rng& rng);

double rw_coupling_bound(const WalkSpec& spec);

/// One draw from the maximal coupling of X ~ Bin(m, r) and Y ~ Bin(m, r)
/// with respect to the event X - Y = y. Any integer y is accepted.
std::pair<std::int64_t, std::int64_t> binomial_shift_couple(Rng& rng, std::int64_t m, double r,
                                                            std::int64_t y);

/// Exact success probability 1 - TV(Bin(m, r), Bin(m, r) + y).
double binomial_shift_success(std::int64_t m, double r, std::int64_t y);

/// Empirical success frequency of binomial_shift_couple; 0 when y > m.
double binomial_shift_coupling(std::int64_t m, double r, std::int64_t y, std::int64_t trials,
                               Rng& rng);

struct LltInstance {
  std::vector<std::int64_t> sizes;
  double r = 0.5;
  double mu() const;
  double sigma() const;
};

struct LltReport {
  double mu = 0.0;
  double sigma = 0.0;
  double sup_error = 0.0;  // sup of sigma * |exact - gaussian| on [mu - sigma, mu + sigma]
  std::int64_t argmax = 0;
  double total_mass = 0.0;
};

inline constexpr std::int64_t kLltMaxCells = 100'000'000;

/// Exact law of sum X_i by sequential convolution of two-point laws.
LltReport llt_exact_check(const LltInstance& instance);

/// Component sizes of one critical G(n, 1/n) sample, keeping sizes at most
/// n^{2/3} / omega.
LltInstance llt_instance_from_critical_graph(std::int64_t n, double omega, double r, Rng& rng);

}  // namespace rcmf
