#pragma once

#include "rcmf/model.hpp"
#include "rcmf/random.hpp"
#include "rcmf/state.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace rcmf {

inline constexpr std::int64_t kGlauberMaxVertices = 5000;

/// Explicit edge subset of the complete graph K_n. Slots follow the
/// lexicographic order of pairs (i, j), i < j.
class EdgeConfig {
 public:
  explicit EdgeConfig(int n);

  int n() const { return n_; }
  std::int64_t slot_count() const { return slots_; }
  std::int64_t slot(int i, int j) const;
  std::pair<int, int> endpoints(std::int64_t slot) const;

  bool is_open(std::int64_t slot) const { return open_[static_cast<std::size_t>(slot)] != 0; }
  void set(std::int64_t slot, bool open);
  std::int64_t open_count() const { return open_count_; }
  const std::vector<int>& neighbours(int v) const { return adjacency_[static_cast<std::size_t>(v)]; }

  /// Vertex -> component label, rebuilt on demand after any flip.
  const std::vector<int>& component_index() const;
  std::int64_t component_count() const;

  /// Mean-field view: component sizes with their edge surpluses.
  ComponentState to_component_state() const;
  ConfigSummary summary() const;

  bool operator==(const EdgeConfig& other) const { return n_ == other.n_ && open_ == other.open_; }

 private:
  friend bool is_cut_edge(const EdgeConfig& config, std::int64_t slot);

  int n_;
  std::int64_t slots_;
  std::vector<std::uint8_t> open_;
  std::vector<std::vector<int>> adjacency_;
  std::int64_t open_count_ = 0;

  mutable bool labels_valid_ = false;
  mutable std::vector<int> labels_;
  mutable std::int64_t label_count_ = 0;
  // BFS scratch.
  mutable std::vector<std::uint32_t> stamp_;
  mutable std::uint32_t epoch_ = 0;
  mutable std::vector<int> queue_;
};

/// True iff the endpoints of `slot` are disconnected once that edge is
/// removed. Breadth-first search from one endpoint, stopping at the other.
bool is_cut_edge(const EdgeConfig& config, std::int64_t slot);

/// Heat-bath opening probability for a cut edge: p / (p + q (1 - p)).
double cut_edge_open_probability(double p, double q);

/// One heat-bath update of a uniformly chosen edge, in place.
void glauber_update(EdgeConfig& config, double p, double q, Rng& rng);
EdgeConfig glauber_step(const EdgeConfig& config, const ModelParams& params, Rng& rng);

struct GlauberRow {
  std::int64_t step = 0;
  StatsReport stats;
  std::int64_t open_edges = 0;
};

struct GlauberTrajectory {
  std::vector<GlauberRow> rows;
  EdgeConfig final_config{1};
};

/// Runs `steps` updates, recording a row every `record_every` steps.
GlauberTrajectory glauber_trajectory(const EdgeConfig& start, const ModelParams& params,
                                     std::int64_t steps, std::int64_t record_every, Rng& rng,
                                     const IntervalSpec& intervals = {});

}  // namespace rcmf
