#pragma once

#include <boost/math/distributions/chi_squared.hpp>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace rcmf::testing {

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

inline double upper_tail(double statistic, int dof) {
  if (dof < 1) {
    return 1.0;
  }
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

/// Goodness of fit of `observed` counts against `expected` probabilities.
/// Cells with expected count below `min_expected` are pooled into one.
template <class Key>
ChiSquare goodness_of_fit(const std::map<Key, std::int64_t>& observed,
                          const std::map<Key, double>& expected, std::int64_t total,
                          double min_expected = 5.0) {
  for (const auto& [k, c] : observed) {
    if (!expected.count(k) && c > 0) {
      // Outcome impossible under the reference law.
      return {1e300, 1, 0.0};
    }
  }
  ChiSquare out;
  double pooled_obs = 0.0;
  double pooled_exp = 0.0;
  int cells = 0;
  for (const auto& [k, prob] : expected) {
    const double e = prob * static_cast<double>(total);
    const auto it = observed.find(k);
    const double o = it == observed.end() ? 0.0 : static_cast<double>(it->second);
    if (e < min_expected) {
      pooled_obs += o;
      pooled_exp += e;
      continue;
    }
    out.statistic += (o - e) * (o - e) / e;
    ++cells;
  }
  if (pooled_exp > 0.0) {
    out.statistic += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
    ++cells;
  }
  out.dof = cells - 1;
  out.p_value = upper_tail(out.statistic, out.dof);
  return out;
}

/// Two-sample test for equal-size samples a and b; sparse cells pooled.
template <class Key>
ChiSquare two_sample(const std::map<Key, std::int64_t>& a, const std::map<Key, std::int64_t>& b,
                     std::int64_t min_cell = 10) {
  std::int64_t na = 0, nb = 0;
  for (const auto& [k, c] : a) na += c;
  for (const auto& [k, c] : b) nb += c;
  if (na != nb) {
    throw std::invalid_argument("two_sample: samples must have equal size");
  }
  std::map<Key, std::pair<std::int64_t, std::int64_t>> joint;
  for (const auto& [k, c] : a) joint[k].first += c;
  for (const auto& [k, c] : b) joint[k].second += c;
  ChiSquare out;
  std::int64_t pa = 0, pb = 0;
  int cells = 0;
  auto add = [&](double x, double y) {
    out.statistic += (x - y) * (x - y) / (x + y);
    ++cells;
  };
  for (const auto& [k, c] : joint) {
    if (c.first + c.second < min_cell) {
      pa += c.first;
      pb += c.second;
      continue;
    }
    add(static_cast<double>(c.first), static_cast<double>(c.second));
  }
  if (pa + pb > 0) {
    add(static_cast<double>(pa), static_cast<double>(pb));
  }
  out.dof = cells - 1;
  out.p_value = upper_tail(out.statistic, out.dof);
  return out;
}

}  // namespace rcmf::testing
