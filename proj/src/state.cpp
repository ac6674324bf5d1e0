#include "rcmf/state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rcmf {

ComponentState ComponentState::from_sizes(std::span<const std::int64_t> sizes) {
  if (sizes.empty()) {
    throw std::invalid_argument("from_sizes: no components");
  }
  ComponentState state;
  state.components_.reserve(sizes.size());
  for (const auto s : sizes) {
    if (s <= 0) {
      throw std::invalid_argument("from_sizes: component sizes must be positive");
    }
    state.components_.push_back({state.next_id_++, s, 0});
    state.n_ += s;
  }
  return state;
}

ComponentState ComponentState::full(std::int64_t n) {
  const std::int64_t one[] = {n};
  return from_sizes(one);
}

ComponentState ComponentState::empty(std::int64_t n) {
  return from_sizes(std::vector<std::int64_t>(static_cast<std::size_t>(n), 1));
}

std::int64_t ComponentState::open_edges() const {
  std::int64_t edges = 0;
  for (const auto& c : components_) {
    edges += c.size - 1 + c.surplus;
  }
  return edges;
}

std::vector<std::int64_t> ComponentState::sorted_sizes() const {
  std::vector<std::int64_t> sizes;
  sizes.reserve(components_.size());
  for (const auto& c : components_) {
    sizes.push_back(c.size);
  }
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  return sizes;
}

void ComponentState::retain(std::span<const char> keep) {
  if (keep.size() != components_.size()) {
    throw std::invalid_argument("retain: mask size mismatch");
  }
  std::size_t out = 0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (keep[i]) {
      components_[out++] = components_[i];
    } else {
      n_ -= components_[i].size;
    }
  }
  components_.resize(out);
}

ComponentId ComponentState::append(std::int64_t size, std::int64_t surplus) {
  const ComponentId id = next_id_++;
  components_.push_back({id, size, surplus});
  n_ += size;
  return id;
}

bool same_structure(const ComponentState& a, const ComponentState& b) {
  return a.n() == b.n() && a.count() == b.count() && a.sorted_sizes() == b.sorted_sizes();
}

IntervalSpec::IntervalSpec(double vartheta_, double g_value_) : vartheta(vartheta_), g_value(g_value_) {
  if (!(vartheta > 0.0)) {
    throw std::domain_error("IntervalSpec: vartheta must be positive");
  }
  if (!(g_value >= 2.0)) {
    throw std::domain_error("IntervalSpec: g must be >= 2 for disjoint intervals");
  }
}

double IntervalSpec::upper(std::int64_t n, int k) const {
  const double scale = vartheta * std::cbrt(static_cast<double>(n) * static_cast<double>(n));
  return scale / std::pow(g_value, std::ldexp(1.0, k));
}

double IntervalSpec::lower(std::int64_t n, int k) const { return 0.5 * upper(n, k); }

int IntervalSpec::k_max(std::int64_t n) const {
  int k = 0;
  while (k < 64 && lower(n, k + 1) >= 1.0) {
    ++k;
  }
  return k;
}

std::optional<int> IntervalSpec::interval_of(std::int64_t n, std::int64_t size) const {
  const auto s = static_cast<double>(size);
  const int kmax = k_max(n);
  for (int k = 1; k <= kmax; ++k) {
    if (s >= lower(n, k) && s <= upper(n, k)) {
      return k;
    }
  }
  return std::nullopt;
}

StatsReport stats(const ComponentState& state, const IntervalSpec& intervals,
                  std::int64_t small_threshold) {
  if (small_threshold < 1) {
    throw std::invalid_argument("stats: small-component threshold must be >= 1");
  }
  StatsReport r;
  r.n = state.n();
  r.components = static_cast<std::int64_t>(state.count());

  const int kmax = intervals.k_max(state.n());
  std::vector<double> lo(static_cast<std::size_t>(kmax) + 1);
  std::vector<double> hi(static_cast<std::size_t>(kmax) + 1);
  for (int k = 1; k <= kmax; ++k) {
    lo[k] = intervals.lower(state.n(), k);
    hi[k] = intervals.upper(state.n(), k);
    r.interval_counts[k] = 0;
  }

  for (const auto& c : state.components()) {
    const std::int64_t s = c.size;
    r.R1 += s * s;
    r.open_edges += s - 1 + c.surplus;
    if (s > r.L1) {
      r.L2 = r.L1;
      r.L1 = s;
    } else if (s > r.L2) {
      r.L2 = s;
    }
    if (s <= small_threshold) {
      r.R_tilde += s * s;
    }
    if (s == 1) {
      ++r.isolated;
    }
    const auto ds = static_cast<double>(s);
    // Intervals shrink with k; the first hit is the only one since g >= 2.
    for (int k = 1; k <= kmax; ++k) {
      if (ds > hi[k]) {
        break;
      }
      if (ds >= lo[k]) {
        ++r.interval_counts[k];
        break;
      }
    }
  }
  r.R2 = r.R1 - r.L1 * r.L1;
  return r;
}

OmegaDefault omega_default(std::int64_t n) {
  if (n < 2) {
    throw std::invalid_argument("omega_default: n must be >= 2");
  }
  double w = static_cast<double>(n);
  bool defined = true;
  for (int i = 0; i < 4; ++i) {
    if (!(w > 0.0)) {
      defined = false;
      break;
    }
    w = std::log(w);
  }
  OmegaDefault out;
  out.omega = (defined && std::isfinite(w)) ? std::max(2.0, w) : 2.0;
  out.b_omega = std::cbrt(static_cast<double>(n) * static_cast<double>(n)) / out.omega;
  return out;
}

}  // namespace rcmf
