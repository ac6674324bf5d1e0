#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace rcmf {

using ComponentId = std::uint64_t;

struct Component {
  ComponentId id = 0;
  std::int64_t size = 0;
  /// Open edges minus (size - 1); zero for trees.
  std::int64_t surplus = 0;
};

/// Mean-field configuration: the multiset of component sizes, each component
/// carrying a stable id. Components are kept in increasing id order; fresh
/// ids come from a per-state counter so allocation is a pure function of the
/// step history.
class ComponentState {
 public:
  ComponentState() = default;

  static ComponentState from_sizes(std::span<const std::int64_t> sizes);
  static ComponentState full(std::int64_t n);
  static ComponentState empty(std::int64_t n);

  std::int64_t n() const { return n_; }
  const std::vector<Component>& components() const { return components_; }
  std::size_t count() const { return components_.size(); }

  /// Open edge count |A| implied by sizes and surpluses.
  std::int64_t open_edges() const;

  std::vector<std::int64_t> sorted_sizes() const;

  /// Keeps components whose `keep` flag is set (same order, same ids).
  void retain(std::span<const char> keep);
  ComponentId append(std::int64_t size, std::int64_t surplus = 0);

  ComponentId next_id() const { return next_id_; }

 private:
  std::vector<Component> components_;
  std::int64_t n_ = 0;
  ComponentId next_id_ = 0;
};

bool same_structure(const ComponentState& a, const ComponentState& b);

/// Size intervals [vartheta n^{2/3} / (2 g^{2^k}), vartheta n^{2/3} / g^{2^k}].
struct IntervalSpec {
  double vartheta = 4.0;
  double g_value = 2.0;

  IntervalSpec() = default;
  IntervalSpec(double vartheta, double g_value);

  double lower(std::int64_t n, int k) const;
  double upper(std::int64_t n, int k) const;
  /// Largest k whose lower endpoint is still >= 1 (0 when none is).
  int k_max(std::int64_t n) const;
  /// Interval index holding `size`, if any.
  std::optional<int> interval_of(std::int64_t n, std::int64_t size) const;
};

struct StatsReport {
  std::int64_t n = 0;
  std::int64_t L1 = 0;
  std::int64_t L2 = 0;
  std::int64_t R1 = 0;
  std::int64_t R2 = 0;
  std::int64_t R_tilde = 0;
  std::int64_t isolated = 0;
  std::int64_t components = 0;
  std::int64_t open_edges = 0;
  std::map<int, std::int64_t> interval_counts;
  std::optional<std::map<std::int64_t, std::int64_t>> tree_counts;
};

StatsReport stats(const ComponentState& state, const IntervalSpec& intervals,
                  std::int64_t small_threshold);

struct OmegaDefault {
  double omega = 2.0;
  double b_omega = 0.0;
};

/// max(2, ln ln ln ln n) with the clamp applied whenever the iterated log is
/// undefined; B_omega = n^{2/3} / omega.
OmegaDefault omega_default(std::int64_t n);

}  // namespace rcmf
