#pragma once

#include "rcmf/model.hpp"
#include "rcmf/random.hpp"
#include "rcmf/state.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rcmf {

struct CmOptions {
  /// Admit q = 1, where every component is activated and one step resamples
  /// G(n, p). Outside the chain's range; kept as an oracle.
  bool allow_unit_q = false;
  /// Draw surplus edges during percolation so |A| stays known.
  bool track_surplus = true;
};

struct StepTrace {
  std::vector<ComponentId> activated_ids;
  std::int64_t active_vertices = 0;
  /// The largest component (lowest id among ties) was activated.
  bool largest_activated = false;
  std::vector<ComponentId> new_component_ids;
};

/// One CM step applied in place. Components are activated in id order with
/// probability 1/q, removed, and replaced by a fresh G(A, p) sample. Only
/// the id lists of `trace` are optional work; the scalars are always set.
void cm_update(ComponentState& state, const ModelParams& params, Rng& rng,
               StepTrace& trace, const CmOptions& options = {}, bool record_ids = true);

std::pair<ComponentState, StepTrace> cm_step(const ComponentState& state, const ModelParams& params,
                                             Rng& rng, const CmOptions& options = {});

/// Swendsen-Wang on component sizes: uniform colours, every colour class
/// re-percolated independently. Requires integer q >= 1.
void sw_update(ComponentState& state, const ModelParams& params, Rng& rng,
               bool track_surplus = true);
ComponentState sw_step(const ComponentState& state, const ModelParams& params, Rng& rng);

/// (full, empty): one component of size n and n singletons.
std::pair<ComponentState, ComponentState> worst_starts(std::int64_t n);

/// S(X_t) and Q(X_t): a set of components seeded by the largest new
/// component of each step and emptied by activation.
class SQTracker {
 public:
  void update(const ComponentState& after, const StepTrace& trace);

  const std::vector<ComponentId>& s_ids() const { return s_ids_; }
  std::int64_t s_vertices() const { return s_vertices_; }
  std::int64_t s_square_sum() const { return s_squares_; }
  std::int64_t q_value() const { return q_value_; }

 private:
  std::vector<ComponentId> s_ids_;  // sorted
  std::int64_t s_vertices_ = 0;
  std::int64_t s_squares_ = 0;
  std::int64_t q_value_ = 0;
};

struct Observers {
  bool stats = true;
  bool sq_tracker = false;
  bool drift_residual = false;
  bool step_trace = false;

  /// Comma-separated names: stats, sq_tracker, drift_residual, step_trace.
  static Observers parse(const std::string& names);
};

enum class Dynamics { ChayesMachta, SwendsenWang };

struct TrajectoryConfig {
  Dynamics dynamics = Dynamics::ChayesMachta;
  CmOptions cm;
  IntervalSpec intervals;
  /// Threshold B for R_tilde; defaults to floor(B_omega).
  std::optional<std::int64_t> small_threshold;
};

struct TrajectoryRow {
  int step = 0;
  StatsReport stats;
  std::int64_t active_vertices = 0;
  bool largest_activated = false;
  std::optional<double> drift_residual;
  std::optional<std::int64_t> s_vertices;
  std::optional<std::int64_t> q_value;
};

struct Trajectory {
  std::vector<TrajectoryRow> rows;
  std::vector<StepTrace> traces;
  ComponentState final_state;
};

/// L1/n floor below which the drift residual is not recorded.
inline constexpr double kDriftResidualFloor = 0.01;

Trajectory run_trajectory(const ComponentState& start, const ModelParams& params, int steps,
                          const Observers& observers, Rng& rng, const TrajectoryConfig& config = {});

}  // namespace rcmf
