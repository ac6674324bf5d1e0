#include "rcmf/coupling.hpp"

#include "rcmf/cm_dynamics.hpp"
#include "rcmf/parallel.hpp"
#include "rcmf/percolation.hpp"
#include "rcmf/walks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rcmf {

namespace {

struct Keyed {
  std::int64_t size;
  ComponentId id;
  std::size_t index;
  bool operator<(const Keyed& o) const { return size != o.size ? size < o.size : id < o.id; }
};

std::vector<Keyed> keyed(const ComponentState& s) {
  std::vector<Keyed> out;
  out.reserve(s.count());
  const auto& comps = s.components();
  for (std::size_t i = 0; i < comps.size(); ++i) {
    out.push_back({comps[i].size, comps[i].id, i});
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Fisher-Yates prefix: the first k entries become a uniform k-subset in
// uniform order.
void partial_shuffle(std::vector<std::size_t>& v, std::size_t k, Rng& rng) {
  k = std::min(k, v.size());
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + uniform_below(rng, v.size() - i);
    std::swap(v[i], v[j]);
  }
}

}  // namespace

CouplingState build_matching(const ComponentState& x, const ComponentState& y,
                             const IntervalSpec& intervals) {
  if (x.n() != y.n()) {
    throw std::invalid_argument("build_matching: copies have different n");
  }
  const auto kx = keyed(x);
  const auto ky = keyed(y);
  CouplingState out;
  std::size_t i = 0;
  std::size_t j = 0;
  auto unmatched = [&](const Keyed& k, std::vector<std::size_t>& list) {
    list.push_back(k.index);
    out.z_value += k.size * k.size;
  };
  while (i < kx.size() || j < ky.size()) {
    if (j == ky.size() || (i < kx.size() && kx[i].size < ky[j].size)) {
      unmatched(kx[i++], out.x_unmatched);
    } else if (i == kx.size() || ky[j].size < kx[i].size) {
      unmatched(ky[j++], out.y_unmatched);
    } else {
      out.matching.push_back({kx[i].id, ky[j].id, kx[i].size, kx[i].index, ky[j].index});
      if (const auto k = intervals.interval_of(x.n(), kx[i].size)) {
        ++out.matched_interval_counts[*k];
      }
      ++i;
      ++j;
    }
  }
  std::sort(out.x_unmatched.begin(), out.x_unmatched.end());
  std::sort(out.y_unmatched.begin(), out.y_unmatched.end());
  return out;
}

Activation matched_activation(const ComponentState& x, const ComponentState& y,
                              const CouplingState& coupling, double r, Rng& rng) {
  Activation a;
  a.x_active.assign(x.count(), 0);
  a.y_active.assign(y.count(), 0);
  const auto& cx = x.components();
  const auto& cy = y.components();
  for (const auto& m : coupling.matching) {
    if (bernoulli(rng, r)) {
      a.x_active[m.x_index] = 1;
      a.y_active[m.y_index] = 1;
      a.x_vertices += m.size;
      a.y_vertices += m.size;
    }
  }
  for (const auto i : coupling.x_unmatched) {
    if (bernoulli(rng, r)) {
      a.x_active[i] = 1;
      a.x_vertices += cx[i].size;
    }
  }
  for (const auto i : coupling.y_unmatched) {
    if (bernoulli(rng, r)) {
      a.y_active[i] = 1;
      a.y_vertices += cy[i].size;
    }
  }
  return a;
}

Activation corrected_activation(const ComponentState& x, const ComponentState& y,
                                const CouplingState& coupling, double r, Rng& rng,
                                double kappa) {
  Activation a;
  a.x_active.assign(x.count(), 0);
  a.y_active.assign(y.count(), 0);
  const auto& cx = x.components();
  const auto& cy = y.components();
  // Unmatched components are paired by size rank and share one draw, so
  // only the size difference within a pair feeds the discrepancy.
  auto by_size = [](const std::vector<Component>& comps, std::vector<std::size_t> idx) {
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t u, std::size_t v) { return comps[u].size > comps[v].size; });
    return idx;
  };
  const auto ux = by_size(cx, coupling.x_unmatched);
  const auto uy = by_size(cy, coupling.y_unmatched);
  for (std::size_t k = 0; k < std::max(ux.size(), uy.size()); ++k) {
    if (!bernoulli(rng, r)) {
      continue;
    }
    if (k < ux.size()) {
      a.x_active[ux[k]] = 1;
      a.x_vertices += cx[ux[k]].size;
    }
    if (k < uy.size()) {
      a.y_active[uy[k]] = 1;
      a.y_vertices += cy[uy[k]].size;
    }
  }
  std::int64_t d = a.x_vertices - a.y_vertices;

  // build_matching emits pairs sorted by (size, id); walk the classes from
  // the largest size down.
  const auto& pairs = coupling.matching;
  std::vector<std::size_t> slots;
  std::size_t end = pairs.size();
  while (end > 0) {
    const std::int64_t s = pairs[end - 1].size;
    std::size_t begin = end;
    while (begin > 0 && pairs[begin - 1].size == s) {
      --begin;
    }
    const auto count = static_cast<std::int64_t>(end - begin);
    std::int64_t target = 0;
    if (s == 1) {
      target = -d;
    } else {
      const double want = -static_cast<double>(d) / static_cast<double>(s);
      const double cap = std::floor(kappa * std::sqrt(static_cast<double>(count) * r * (1 - r)));
      target = static_cast<std::int64_t>(std::clamp(std::round(want), -cap, cap));
    }
    const auto [ax, ay] = binomial_shift_couple(rng, count, r, target);
    slots.resize(static_cast<std::size_t>(count));
    for (std::size_t k = 0; k < slots.size(); ++k) {
      slots[k] = begin + k;
    }
    partial_shuffle(slots, static_cast<std::size_t>(std::max(ax, ay)), rng);
    for (std::int64_t k = 0; k < ax; ++k) {
      a.x_active[pairs[slots[static_cast<std::size_t>(k)]].x_index] = 1;
    }
    for (std::int64_t k = 0; k < ay; ++k) {
      a.y_active[pairs[slots[static_cast<std::size_t>(k)]].y_index] = 1;
    }
    a.x_vertices += ax * s;
    a.y_vertices += ay * s;
    d += (ax - ay) * s;
    end = begin;
  }
  return a;
}

CoupledStep coupled_percolation_step(ComponentState& x, ComponentState& y, CouplingState& coupling,
                                     const ModelParams& params, Rng& rng,
                                     const CouplingOptions& options) {
  if (x.n() != params.n() || y.n() != params.n()) {
    throw std::invalid_argument("coupled_percolation_step: state size does not match n");
  }
  const bool unit_q = options.allow_unit_q && params.q() == 1.0;
  if (!unit_q) {
    params.require_cm_range();
  }
  const double r = 1.0 / params.q();
  CoupledStep step;
  step.activation = options.policy == CouplingPolicy::Corrected
                        ? corrected_activation(x, y, coupling, r, rng, options.kappa)
                        : matched_activation(x, y, coupling, r, rng);
  auto& act = step.activation;

  auto keep_inactive = [](std::vector<char>& active) {
    for (auto& f : active) {
      f = f ? 0 : 1;
    }
  };
  keep_inactive(act.x_active);
  keep_inactive(act.y_active);
  x.retain(act.x_active);
  y.retain(act.y_active);
  keep_inactive(act.x_active);
  keep_inactive(act.y_active);

  const double p = params.p();
  step.shared = act.x_vertices == act.y_vertices;
  if (step.shared) {
    const auto outcome = sample_components(act.x_vertices, p, rng, options.track_surplus);
    for (std::size_t c = 0; c < outcome.sizes.size(); ++c) {
      x.append(outcome.sizes[c], outcome.surpluses[c]);
      y.append(outcome.sizes[c], outcome.surpluses[c]);
    }
  } else {
    for (auto* state : {&x, &y}) {
      const auto m = state == &x ? act.x_vertices : act.y_vertices;
      const auto outcome = sample_components(m, p, rng, options.track_surplus);
      for (std::size_t c = 0; c < outcome.sizes.size(); ++c) {
        state->append(outcome.sizes[c], outcome.surpluses[c]);
      }
    }
  }
  coupling = build_matching(x, y, options.intervals);
  coupling.discrepancy = act.discrepancy();
  return step;
}

CoalescenceReport coupling_time_experiment(std::int64_t n, double q, double lambda, int replicas,
                                           int max_steps, std::uint64_t seed,
                                           const CouplingOptions& options) {
  if (replicas < 1 || max_steps < 1) {
    throw std::invalid_argument("coupling_time_experiment: replicas and max_steps must be >= 1");
  }
  const ModelParams params(n, q, lambda);
  auto times = run_replicas<std::optional<int>>(
      static_cast<std::size_t>(replicas), seed, [&](Rng& rng, std::size_t) -> std::optional<int> {
        auto [x, y] = worst_starts(n);
        auto coupling = build_matching(x, y, options.intervals);
        for (int t = 1; t <= max_steps; ++t) {
          coupled_percolation_step(x, y, coupling, params, rng, options);
          if (coupling.z_value == 0) {
            return t;
          }
        }
        return std::nullopt;
      });

  CoalescenceReport out;
  out.times = std::move(times);
  std::vector<double> sorted;
  for (const auto& t : out.times) {
    sorted.push_back(t ? static_cast<double>(*t) : std::numeric_limits<double>::infinity());
  }
  std::sort(sorted.begin(), sorted.end());
  const auto hits = std::count_if(out.times.begin(), out.times.end(), [](const auto& t) { return t.has_value(); });
  out.success_fraction = static_cast<double>(hits) / static_cast<double>(replicas);
  const auto mid = sorted.size() / 2;
  const double median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  if (std::isfinite(median)) {
    out.median = median;
  }
  return out;
}

ZDecayReport z_decay_experiment(std::int64_t n, double q, double lambda, int replicas,
                                const ZDecayConfig& config, std::uint64_t seed,
                                const CouplingOptions& options) {
  if (replicas < 1 || config.burn_in < 0 || config.horizon < 1 || config.max_wait < 0) {
    throw std::invalid_argument("z_decay_experiment: invalid sizes");
  }
  const ModelParams params(n, q, lambda);
  const int horizon = config.horizon;
  // Z_t per replica, -1 once the path has left D = 0.
  auto paths = run_replicas<std::vector<std::int64_t>>(
      static_cast<std::size_t>(replicas), seed, [&](Rng& rng, std::size_t) {
        std::vector<std::int64_t> z(static_cast<std::size_t>(horizon + 1), -1);
        auto [x, y] = worst_starts(n);
        StepTrace trace;
        CmOptions cm;
        cm.track_surplus = options.track_surplus;
        for (int t = 0; t < config.burn_in; ++t) {
          cm_update(x, params, rng, trace, cm, false);
          cm_update(y, params, rng, trace, cm, false);
        }
        auto coupling = build_matching(x, y, options.intervals);
        if (config.start_threshold > 0.0) {
          int waited = 0;
          while (static_cast<double>(coupling.z_value) > config.start_threshold) {
            if (waited++ == config.max_wait) {
              return z;
            }
            coupled_percolation_step(x, y, coupling, params, rng, options);
          }
        }
        z[0] = coupling.z_value;
        for (int t = 1; t <= horizon; ++t) {
          const auto step = coupled_percolation_step(x, y, coupling, params, rng, options);
          if (!step.shared) {
            break;
          }
          z[static_cast<std::size_t>(t)] = coupling.z_value;
        }
        return z;
      });

  ZDecayReport out;
  out.mean_z.assign(static_cast<std::size_t>(horizon + 1), 0.0);
  out.alive.assign(static_cast<std::size_t>(horizon + 1), 0);
  for (const auto& z : paths) {
    for (std::size_t t = 0; t < z.size(); ++t) {
      if (z[t] < 0) {
        break;
      }
      out.mean_z[t] += static_cast<double>(z[t]);
      ++out.alive[t];
    }
  }
  for (std::size_t t = 0; t < out.mean_z.size(); ++t) {
    if (out.alive[t] > 0) {
      out.mean_z[t] /= out.alive[t];
    }
  }
  return out;
}

double log_slope(const std::vector<double>& values, int first, int last) {
  if (first < 0 || last >= static_cast<int>(values.size()) || last - first < 1) {
    throw std::invalid_argument("log_slope: invalid window");
  }
  double st = 0, sy = 0, stt = 0, sty = 0;
  const double k = last - first + 1;
  for (int t = first; t <= last; ++t) {
    const double v = values[static_cast<std::size_t>(t)];
    if (!(v > 0.0)) {
      throw std::domain_error("log_slope: non-positive value in window");
    }
    const double ly = std::log(v);
    st += t;
    sy += ly;
    stt += static_cast<double>(t) * t;
    sty += t * ly;
  }
  return (k * sty - st * sy) / (k * stt - st * st);
}

}  // namespace rcmf
