#include "rcmf/walks.hpp"

#include "rcmf/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rcmf {

namespace {

void check_walk(const WalkSpec& spec, std::int64_t max_factor) {
  if (spec.A <= 0) {
    throw std::invalid_argument("walk: A must be positive");
  }
  if (!(spec.r > 0.0 && spec.r <= 0.5)) {
    throw std::invalid_argument("walk: r must lie in (0, 1/2]");
  }
  if (spec.d < 0) {
    throw std::invalid_argument("walk: d must be non-negative");
  }
  for (const auto c : spec.steps) {
    if (c < spec.A || c > max_factor * spec.A) {
      throw std::invalid_argument("walk: step size outside [A, " + std::to_string(max_factor) + "A]");
    }
  }
}

// +c, -c or 0.
std::int64_t walk_step(Rng& rng, std::int64_t c, double r) {
  const double u = uniform01(rng);
  if (u < r) {
    return c;
  }
  if (u < 2 * r) {
    return -c;
  }
  return 0;
}

}  // namespace

Proportion wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
  if (trials <= 0 || successes < 0 || successes > trials) {
    throw std::invalid_argument("wilson_interval: invalid counts");
  }
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {p, std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

RwMaxTail rw_max_tail(const WalkSpec& spec, std::int64_t y, std::int64_t trials, Rng& rng) {
  check_walk(spec, 4);
  if (y < 0 || trials <= 0) {
    throw std::invalid_argument("rw_max_tail: need y >= 0 and trials > 0");
  }
  const std::int64_t far = y + 8 * spec.A + 1;
  std::int64_t hit_max = 0;
  std::int64_t hit_sum = 0;
  for (std::int64_t t = 0; t < trials; ++t) {
    std::int64_t s = 0;
    bool reached = false;
    for (const auto c : spec.steps) {
      s += walk_step(rng, c, spec.r);
      reached = reached || s >= y;
    }
    hit_max += reached ? 1 : 0;
    hit_sum += s >= far ? 1 : 0;
  }
  RwMaxTail out;
  out.max_tail = wilson_interval(hit_max, trials);
  out.sum_tail = wilson_interval(hit_sum, trials);
  out.holds = out.max_tail.upper >= 2 * out.sum_tail.lower;
  return out;
}

double rw_coupling_bound(const WalkSpec& spec) {
  const double delta = 10.0 / std::sqrt(spec.r);
  const double m = static_cast<double>(spec.steps.size());
  return 1.0 - delta * static_cast<double>(spec.d + spec.A) / (static_cast<double>(spec.A) * std::sqrt(m));
}

RwCoupling rw_difference_coupling(const WalkSpec& spec, std::int64_t trials, Rng& rng) {
  check_walk(spec, 2);
  if (trials <= 0) {
    throw std::invalid_argument("rw_difference_coupling: trials must be positive");
  }
  std::int64_t hits = 0;
  for (std::int64_t t = 0; t < trials; ++t) {
    std::int64_t diff = 0;  // D_k
    for (const auto c : spec.steps) {
      if (diff >= spec.d) {
        break;  // remaining pairs identical, D stays put
      }
      diff += walk_step(rng, c, spec.r) - walk_step(rng, c, spec.r);
    }
    hits += (diff >= spec.d && diff <= spec.d + 2 * spec.A) ? 1 : 0;
  }
  return {wilson_interval(hits, trials), rw_coupling_bound(spec)};
}

std::pair<std::int64_t, std::int64_t> binomial_shift_couple(Rng& rng, std::int64_t m, double r,
                                                            std::int64_t y) {
  // Maximal coupling of X ~ P and W = Y + y ~ P(. - y) on the event X = W.
  const std::int64_t x = binomial(rng, m, r);
  const double log_p = binomial_log_pmf(m, r, x);
  const double log_shift = binomial_log_pmf(m, r, x - y);
  if (y == 0 || std::log(uniform01(rng)) + log_p <= log_shift) {
    return {x, x - y};
  }
  // Residual of the shifted law: draw W, keep it where P(W) < P_y(W).
  for (;;) {
    const std::int64_t w = binomial(rng, m, r) + y;
    const double lp = binomial_log_pmf(m, r, w);
    const double ls = binomial_log_pmf(m, r, w - y);
    if (std::log(uniform01(rng)) + ls > lp) {
      return {x, w - y};
    }
  }
}

double binomial_shift_success(std::int64_t m, double r, std::int64_t y) {
  if (m < 0) {
    throw std::invalid_argument("binomial_shift_success: m must be >= 0");
  }
  const std::int64_t lo = std::max<std::int64_t>(0, y);
  const std::int64_t hi = std::min<std::int64_t>(m, m + y);
  double total = 0.0;
  for (std::int64_t k = lo; k <= hi; ++k) {
    total += std::exp(std::min(binomial_log_pmf(m, r, k), binomial_log_pmf(m, r, k - y)));
  }
  return std::min(1.0, total);
}

double binomial_shift_coupling(std::int64_t m, double r, std::int64_t y, std::int64_t trials,
                               Rng& rng) {
  if (y < 0 || trials <= 0) {
    throw std::invalid_argument("binomial_shift_coupling: need y >= 0 and trials > 0");
  }
  if (y > m) {
    return 0.0;
  }
  std::int64_t hits = 0;
  for (std::int64_t t = 0; t < trials; ++t) {
    const auto [a, b] = binomial_shift_couple(rng, m, r, y);
    hits += (a - b == y) ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

double LltInstance::mu() const {
  double total = 0.0;
  for (const auto c : sizes) {
    total += static_cast<double>(c);
  }
  return r * total;
}

double LltInstance::sigma() const {
  double squares = 0.0;
  for (const auto c : sizes) {
    squares += static_cast<double>(c) * static_cast<double>(c);
  }
  return std::sqrt(r * (1 - r) * squares);
}

LltReport llt_exact_check(const LltInstance& instance) {
  const double r = instance.r;
  if (!(r > 0.0 && r < 1.0)) {
    throw std::invalid_argument("llt_exact_check: r must lie in (0, 1)");
  }
  std::int64_t total = 0;
  for (const auto c : instance.sizes) {
    if (c < 0) {
      throw std::invalid_argument("llt_exact_check: negative size");
    }
    total += c;
  }
  if (total + 1 > kLltMaxCells) {
    throw std::length_error("llt_exact_check: table needs " + std::to_string(total + 1) +
                            " cells (" + std::to_string((total + 1) * 8 / (1 << 20)) +
                            " MiB), limit is " + std::to_string(kLltMaxCells));
  }
  std::vector<double> law(static_cast<std::size_t>(total + 1), 0.0);
  law[0] = 1.0;
  std::int64_t reach = 0;
  for (const auto c : instance.sizes) {
    if (c == 0) {
      continue;
    }
    reach += c;
    for (std::int64_t a = reach; a >= 0; --a) {
      const double stay = law[static_cast<std::size_t>(a)] * (1 - r);
      const double move = a >= c ? law[static_cast<std::size_t>(a - c)] * r : 0.0;
      law[static_cast<std::size_t>(a)] = stay + move;
    }
  }

  LltReport out;
  out.mu = instance.mu();
  out.sigma = instance.sigma();
  for (const double v : law) {
    out.total_mass += v;
  }
  if (out.sigma <= 0.0) {
    return out;
  }
  const auto lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(out.mu - out.sigma)));
  const auto hi = std::min<std::int64_t>(total, static_cast<std::int64_t>(std::floor(out.mu + out.sigma)));
  const double norm = 1.0 / (std::sqrt(2 * std::numbers::pi) * out.sigma);
  for (std::int64_t a = lo; a <= hi; ++a) {
    const double z = (static_cast<double>(a) - out.mu) / out.sigma;
    const double err = out.sigma * std::abs(law[static_cast<std::size_t>(a)] - norm * std::exp(-z * z / 2));
    if (err > out.sup_error) {
      out.sup_error = err;
      out.argmax = a;
    }
  }
  return out;
}

LltInstance llt_instance_from_critical_graph(std::int64_t n, double omega, double r, Rng& rng) {
  if (n < 1 || !(omega > 0.0)) {
    throw std::invalid_argument("llt_instance_from_critical_graph: need n >= 1 and omega > 0");
  }
  const double cap = std::pow(static_cast<double>(n), 2.0 / 3.0) / omega;
  auto outcome = sample_components(n, 1.0 / static_cast<double>(n), rng, false);
  LltInstance inst;
  inst.r = r;
  for (const auto s : outcome.sizes) {
    if (static_cast<double>(s) <= cap) {
      inst.sizes.push_back(s);
    }
  }
  std::sort(inst.sizes.begin(), inst.sizes.end());
  return inst;
}

}  // namespace rcmf
