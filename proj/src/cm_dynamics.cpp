#include "rcmf/cm_dynamics.hpp"

#include "rcmf/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rcmf {

namespace {

struct Scratch {
  std::vector<char> keep;
  std::vector<std::int64_t> sizes;
  std::vector<std::int64_t> surpluses;
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

void check_state(const ComponentState& state, const ModelParams& params) {
  if (state.n() != params.n()) {
    throw std::invalid_argument("state size does not match model n");
  }
}

}  // namespace

void cm_update(ComponentState& state, const ModelParams& params, Rng& rng, StepTrace& trace,
               const CmOptions& options, bool record_ids) {
  check_state(state, params);
  const bool unit_q = options.allow_unit_q && params.q() == 1.0;
  if (!unit_q) {
    params.require_cm_range();
  }
  trace.activated_ids.clear();
  trace.new_component_ids.clear();
  trace.active_vertices = 0;
  trace.largest_activated = false;

  const auto& comps = state.components();
  std::size_t largest = 0;
  for (std::size_t i = 1; i < comps.size(); ++i) {
    if (comps[i].size > comps[largest].size) {
      largest = i;
    }
  }

  auto& s = scratch();
  s.keep.assign(comps.size(), 1);
  const double r = 1.0 / params.q();
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const bool active = unit_q || bernoulli(rng, r);
    if (active) {
      s.keep[i] = 0;
      trace.active_vertices += comps[i].size;
      if (record_ids) {
        trace.activated_ids.push_back(comps[i].id);
      }
      if (i == largest) {
        trace.largest_activated = true;
      }
    }
  }
  state.retain(s.keep);
  sample_components_into(trace.active_vertices, params.p(), rng, options.track_surplus, s.sizes,
                         s.surpluses);
  for (std::size_t c = 0; c < s.sizes.size(); ++c) {
    const ComponentId id = state.append(s.sizes[c], s.surpluses[c]);
    if (record_ids) {
      trace.new_component_ids.push_back(id);
    }
  }
}

std::pair<ComponentState, StepTrace> cm_step(const ComponentState& state, const ModelParams& params,
                                             Rng& rng, const CmOptions& options) {
  std::pair<ComponentState, StepTrace> out{state, {}};
  cm_update(out.first, params, rng, out.second, options, true);
  return out;
}

void sw_update(ComponentState& state, const ModelParams& params, Rng& rng, bool track_surplus) {
  check_state(state, params);
  const double q = params.q();
  if (q < 1.0 || q != std::floor(q)) {
    throw std::domain_error("Swendsen-Wang requires integer q >= 1");
  }
  const auto colours = static_cast<std::uint64_t>(q);
  std::vector<std::int64_t> mass(colours, 0);
  for (const auto& c : state.components()) {
    mass[uniform_below(rng, colours)] += c.size;
  }
  auto& s = scratch();
  s.keep.assign(state.count(), 0);
  state.retain(s.keep);
  for (const auto m : mass) {
    sample_components_into(m, params.p(), rng, track_surplus, s.sizes, s.surpluses);
    for (std::size_t c = 0; c < s.sizes.size(); ++c) {
      state.append(s.sizes[c], s.surpluses[c]);
    }
  }
}

ComponentState sw_step(const ComponentState& state, const ModelParams& params, Rng& rng) {
  ComponentState out = state;
  sw_update(out, params, rng);
  return out;
}

std::pair<ComponentState, ComponentState> worst_starts(std::int64_t n) {
  if (n < 1) {
    throw std::invalid_argument("worst_starts: n must be positive");
  }
  return {ComponentState::full(n), ComponentState::empty(n)};
}

void SQTracker::update(const ComponentState& after, const StepTrace& trace) {
  if (!trace.activated_ids.empty()) {
    std::vector<ComponentId> kept;
    kept.reserve(s_ids_.size());
    std::set_difference(s_ids_.begin(), s_ids_.end(), trace.activated_ids.begin(),
                        trace.activated_ids.end(), std::back_inserter(kept));
    s_ids_ = std::move(kept);
  }

  const auto& comps = after.components();
  auto size_of = [&](ComponentId id) -> std::int64_t {
    auto it = std::lower_bound(comps.begin(), comps.end(), id,
                               [](const Component& c, ComponentId v) { return c.id < v; });
    if (it == comps.end() || it->id != id) {
      throw std::logic_error("SQTracker: id not present in configuration");
    }
    return it->size;
  };

  // Largest new component; new ids are increasing, so the first maximum is
  // the lowest id among ties.
  std::optional<ComponentId> best;
  std::int64_t best_size = 0;
  for (const auto id : trace.new_component_ids) {
    const auto sz = size_of(id);
    if (sz > best_size) {
      best_size = sz;
      best = id;
    }
  }
  if (best) {
    s_ids_.insert(std::upper_bound(s_ids_.begin(), s_ids_.end(), *best), *best);
  }

  s_vertices_ = 0;
  s_squares_ = 0;
  for (const auto id : s_ids_) {
    const auto sz = size_of(id);
    s_vertices_ += sz;
    s_squares_ += sz * sz;
  }
  std::int64_t r1 = 0;
  for (const auto& c : comps) {
    r1 += c.size * c.size;
  }
  q_value_ = r1 - s_squares_;
}

Observers Observers::parse(const std::string& names) {
  Observers o;
  o.stats = false;
  std::stringstream ss(names);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) {
      continue;
    }
    if (item == "stats") {
      o.stats = true;
    } else if (item == "sq_tracker") {
      o.sq_tracker = true;
    } else if (item == "drift_residual") {
      o.drift_residual = true;
    } else if (item == "step_trace") {
      o.step_trace = true;
    } else {
      throw std::invalid_argument("unknown observer: " + item);
    }
  }
  return o;
}

Trajectory run_trajectory(const ComponentState& start, const ModelParams& params, int steps,
                          const Observers& observers, Rng& rng, const TrajectoryConfig& config) {
  if (steps < 1) {
    throw std::invalid_argument("run_trajectory: steps must be >= 1");
  }
  const std::int64_t threshold =
      config.small_threshold.value_or(std::max<std::int64_t>(
          1, static_cast<std::int64_t>(std::floor(omega_default(std::max<std::int64_t>(2, params.n())).b_omega))));

  Trajectory out;
  out.final_state = start;
  out.rows.reserve(static_cast<std::size_t>(steps));
  auto& state = out.final_state;
  const bool need_ids = observers.sq_tracker || observers.step_trace;
  const auto n = static_cast<double>(params.n());

  SQTracker tracker;
  StepTrace trace;
  std::int64_t l1_before = 0;
  for (const auto& c : state.components()) {
    l1_before = std::max(l1_before, c.size);
  }

  for (int t = 1; t <= steps; ++t) {
    TrajectoryRow row;
    row.step = t;
    if (config.dynamics == Dynamics::ChayesMachta) {
      cm_update(state, params, rng, trace, config.cm, need_ids);
    } else {
      sw_update(state, params, rng, config.cm.track_surplus);
      trace = StepTrace{};
      trace.active_vertices = params.n();
      trace.largest_activated = true;
    }
    row.active_vertices = trace.active_vertices;
    row.largest_activated = trace.largest_activated;

    std::int64_t l1_after = 0;
    if (observers.stats) {
      row.stats = stats(state, config.intervals, threshold);
      l1_after = row.stats.L1;
    } else {
      for (const auto& c : state.components()) {
        l1_after = std::max(l1_after, c.size);
      }
      row.stats.n = params.n();
      row.stats.L1 = l1_after;
    }

    if (observers.drift_residual && config.dynamics == Dynamics::ChayesMachta &&
        trace.largest_activated) {
      const double theta = static_cast<double>(l1_before) / n;
      if (theta >= kDriftResidualFloor && params.q() > 1.0) {
        const auto eval = drift_evaluate(theta, params.lambda(), params.q());
        if (eval.phi_value) {
          row.drift_residual = static_cast<double>(l1_after) / n - *eval.phi_value;
        }
      }
    }
    if (observers.sq_tracker && config.dynamics == Dynamics::ChayesMachta) {
      tracker.update(state, trace);
      row.s_vertices = tracker.s_vertices();
      row.q_value = tracker.q_value();
    }
    if (observers.step_trace) {
      out.traces.push_back(trace);
    }
    out.rows.push_back(std::move(row));
    l1_before = l1_after;
  }
  return out;
}

}  // namespace rcmf
