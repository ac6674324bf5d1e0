#pragma once

#include "rcmf/model.hpp"
#include "rcmf/random.hpp"
#include "rcmf/state.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace rcmf {

struct MatchedPair {
  ComponentId x_id = 0;
  ComponentId y_id = 0;
  std::int64_t size = 0;
  // Positions in the components() vectors the matching was built from.
  std::size_t x_index = 0;
  std::size_t y_index = 0;
};

/// Size-matched maximal matching between two configurations.
struct CouplingState {
  std::vector<MatchedPair> matching;
  std::vector<std::size_t> x_unmatched;
  std::vector<std::size_t> y_unmatched;
  /// Sum of squared sizes over unmatched components of both copies.
  std::int64_t z_value = 0;
  /// k -> number of matched pairs whose size lies in I_k.
  std::map<int, std::int64_t> matched_interval_counts;
  /// A(X) - A(Y) from the last activation.
  std::int64_t discrepancy = 0;
};

/// Greedy per size class in id order; the result is maximal.
CouplingState build_matching(const ComponentState& x, const ComponentState& y,
                             const IntervalSpec& intervals = {});

struct Activation {
  std::vector<char> x_active;  // parallel to x.components()
  std::vector<char> y_active;
  std::int64_t x_vertices = 0;
  std::int64_t y_vertices = 0;
  std::int64_t discrepancy() const { return x_vertices - y_vertices; }
};

/// One Bernoulli(r) per matched pair drives both members; unmatched
/// components draw independently. Draw order: matched pairs, X-unmatched,
/// Y-unmatched.
Activation matched_activation(const ComponentState& x, const ComponentState& y,
                              const CouplingState& coupling, double r, Rng& rng);

/// Same marginals as matched_activation, but matched pairs are spent to
/// cancel the discrepancy left by the unmatched components. Unmatched
/// components draw first; then each size class of matched pairs, largest
/// size first and singletons last, draws its two activation counts from a
/// maximal coupling of Binomial(N, r) with its shift by the size-scaled
/// correction (capped at `kappa` standard deviations, except for
/// singletons). Activated subsets are uniform and overlap maximally, so each
/// copy still activates every component independently with probability r.
Activation corrected_activation(const ComponentState& x, const ComponentState& y,
                                const CouplingState& coupling, double r, Rng& rng,
                                double kappa);

enum class CouplingPolicy { Matched, Corrected };

struct CouplingOptions {
  CouplingPolicy policy = CouplingPolicy::Corrected;
  double kappa = 0.5;
  bool allow_unit_q = false;
  bool track_surplus = false;
  IntervalSpec intervals;
};

struct CoupledStep {
  Activation activation;
  /// D = 0, so one percolation outcome was appended to both copies.
  bool shared = false;
};

/// Activation followed by the percolation sub-step, in place. On D = 0 a
/// single outcome is added to both copies; otherwise two independent ones.
/// `coupling` must describe (x, y) on entry and is rebuilt on exit.
CoupledStep coupled_percolation_step(ComponentState& x, ComponentState& y, CouplingState& coupling,
                                     const ModelParams& params, Rng& rng,
                                     const CouplingOptions& options = {});

struct CoalescenceReport {
  /// Step at which the size multisets first agreed; nullopt if never.
  std::vector<std::optional<int>> times;
  double success_fraction = 0.0;
  /// Median over all replicas, counting failures as +infinity.
  std::optional<double> median;
};

/// Runs the coupled chains from (full, empty) until the multisets agree.
CoalescenceReport coupling_time_experiment(std::int64_t n, double q, double lambda, int replicas,
                                           int max_steps, std::uint64_t seed,
                                           const CouplingOptions& options = {});

struct ZDecayReport {
  /// mean_z[t] averages Z_t over replicas whose steps 1..t all had D = 0.
  std::vector<double> mean_z;
  std::vector<int> alive;
};

struct ZDecayConfig {
  /// Independent CM steps for each copy (from full and empty) before coupling.
  int burn_in = 50;
  /// The coupled chain runs until Z first drops to this level; that step is
  /// t = 0. Non-positive means start right after burn-in.
  double start_threshold = 0.0;
  /// Cap on coupled steps spent waiting for the threshold.
  int max_wait = 500;
  int horizon = 10;
};

/// Mean Z_t along the D = 0 path. Replicas that never reach the threshold
/// contribute nothing.
ZDecayReport z_decay_experiment(std::int64_t n, double q, double lambda, int replicas,
                                const ZDecayConfig& config, std::uint64_t seed,
                                const CouplingOptions& options = {});

/// Least-squares slope of ln(values[t]) against t over [first, last].
double log_slope(const std::vector<double>& values, int first, int last);

}  // namespace rcmf
