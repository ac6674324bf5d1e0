#include "rcmf/glauber.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rcmf {

EdgeConfig::EdgeConfig(int n) : n_(n) {
  if (n < 1 || n > kGlauberMaxVertices) {
    throw std::domain_error("EdgeConfig: n must lie in [1, 5000]");
  }
  slots_ = static_cast<std::int64_t>(n) * (n - 1) / 2;
  open_.assign(static_cast<std::size_t>(slots_), 0);
  adjacency_.resize(static_cast<std::size_t>(n));
  stamp_.assign(static_cast<std::size_t>(n), 0);
}

std::int64_t EdgeConfig::slot(int i, int j) const {
  if (i > j) {
    std::swap(i, j);
  }
  if (i < 0 || j >= n_ || i == j) {
    throw std::out_of_range("EdgeConfig: invalid pair");
  }
  const std::int64_t ii = i;
  return ii * (2 * static_cast<std::int64_t>(n_) - ii - 1) / 2 + (j - i - 1);
}

std::pair<int, int> EdgeConfig::endpoints(std::int64_t s) const {
  if (s < 0 || s >= slots_) {
    throw std::out_of_range("EdgeConfig: slot out of range");
  }
  // Row i starts at i (2n - i - 1) / 2; invert the quadratic and fix rounding.
  const double nn = n_;
  auto i = static_cast<std::int64_t>(
      std::floor((2 * nn - 1 - std::sqrt((2 * nn - 1) * (2 * nn - 1) - 8.0 * static_cast<double>(s))) / 2));
  auto row_start = [&](std::int64_t r) { return r * (2 * static_cast<std::int64_t>(n_) - r - 1) / 2; };
  i = std::clamp<std::int64_t>(i, 0, n_ - 2);
  while (i > 0 && row_start(i) > s) {
    --i;
  }
  while (i + 1 <= n_ - 2 && row_start(i + 1) <= s) {
    ++i;
  }
  const auto j = s - row_start(i) + i + 1;
  return {static_cast<int>(i), static_cast<int>(j)};
}

void EdgeConfig::set(std::int64_t s, bool open) {
  auto& cell = open_[static_cast<std::size_t>(s)];
  if ((cell != 0) == open) {
    return;
  }
  const auto [i, j] = endpoints(s);
  auto& ai = adjacency_[static_cast<std::size_t>(i)];
  auto& aj = adjacency_[static_cast<std::size_t>(j)];
  if (open) {
    ai.push_back(j);
    aj.push_back(i);
    ++open_count_;
  } else {
    auto drop = [](std::vector<int>& list, int v) {
      auto it = std::find(list.begin(), list.end(), v);
      *it = list.back();
      list.pop_back();
    };
    drop(ai, j);
    drop(aj, i);
    --open_count_;
  }
  cell = open ? 1 : 0;
  labels_valid_ = false;
}

const std::vector<int>& EdgeConfig::component_index() const {
  if (labels_valid_) {
    return labels_;
  }
  labels_.assign(static_cast<std::size_t>(n_), -1);
  label_count_ = 0;
  for (int root = 0; root < n_; ++root) {
    if (labels_[root] >= 0) {
      continue;
    }
    const int label = static_cast<int>(label_count_++);
    queue_.clear();
    queue_.push_back(root);
    labels_[root] = label;
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      for (const int w : adjacency_[static_cast<std::size_t>(queue_[head])]) {
        if (labels_[w] < 0) {
          labels_[w] = label;
          queue_.push_back(w);
        }
      }
    }
  }
  labels_valid_ = true;
  return labels_;
}

std::int64_t EdgeConfig::component_count() const {
  component_index();
  return label_count_;
}

ComponentState EdgeConfig::to_component_state() const {
  const auto& labels = component_index();
  std::vector<std::int64_t> sizes(static_cast<std::size_t>(label_count_), 0);
  std::vector<std::int64_t> degree_sum(static_cast<std::size_t>(label_count_), 0);
  for (int v = 0; v < n_; ++v) {
    ++sizes[labels[v]];
    degree_sum[labels[v]] += static_cast<std::int64_t>(adjacency_[v].size());
  }
  ComponentState state;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    state.append(sizes[c], degree_sum[c] / 2 - sizes[c] + 1);
  }
  return state;
}

ConfigSummary EdgeConfig::summary() const {
  return {open_count_, slots_, component_count()};
}

bool is_cut_edge(const EdgeConfig& config, std::int64_t slot) {
  const auto [u, v] = config.endpoints(slot);
  const bool open = config.is_open(slot);
  if (++config.epoch_ == 0) {
    std::fill(config.stamp_.begin(), config.stamp_.end(), 0);
    config.epoch_ = 1;
  }
  const auto epoch = config.epoch_;
  auto& queue = config.queue_;
  queue.clear();
  queue.push_back(u);
  config.stamp_[u] = epoch;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int x = queue[head];
    for (const int w : config.adjacency_[static_cast<std::size_t>(x)]) {
      if (open && ((x == u && w == v) || (x == v && w == u))) {
        continue;
      }
      if (w == v) {
        return false;
      }
      if (config.stamp_[w] != epoch) {
        config.stamp_[w] = epoch;
        queue.push_back(w);
      }
    }
  }
  return true;
}

double cut_edge_open_probability(double p, double q) {
  if (!(p > 0.0 && p < 1.0) || !(q >= 1.0)) {
    throw std::domain_error("heat-bath probabilities need p in (0,1) and q >= 1");
  }
  return p / (p + q * (1.0 - p));
}

void glauber_update(EdgeConfig& config, double p, double q, Rng& rng) {
  if (config.slot_count() == 0) {
    return;  // n = 1 has no edges
  }
  const auto slot = static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(config.slot_count())));
  const double prob = is_cut_edge(config, slot) ? cut_edge_open_probability(p, q) : p;
  config.set(slot, bernoulli(rng, prob));
}

EdgeConfig glauber_step(const EdgeConfig& config, const ModelParams& params, Rng& rng) {
  if (params.q() < 1.0) {
    throw std::domain_error("Glauber dynamics requires q >= 1");
  }
  EdgeConfig out = config;
  glauber_update(out, params.p(), params.q(), rng);
  return out;
}

GlauberTrajectory glauber_trajectory(const EdgeConfig& start, const ModelParams& params,
                                     std::int64_t steps, std::int64_t record_every, Rng& rng,
                                     const IntervalSpec& intervals) {
  if (params.q() < 1.0) {
    throw std::domain_error("Glauber dynamics requires q >= 1");
  }
  if (start.n() != params.n()) {
    throw std::invalid_argument("glauber_trajectory: configuration size does not match n");
  }
  if (steps < 0 || record_every < 1) {
    throw std::invalid_argument("glauber_trajectory: invalid step counts");
  }
  // Heat-bath sanity: a cut edge never opens more readily than a free one.
  if (cut_edge_open_probability(params.p(), params.q()) > params.p() + 1e-15) {
    throw std::logic_error("heat-bath probability exceeds p");
  }
  const auto threshold = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::floor(omega_default(std::max<std::int64_t>(2, params.n())).b_omega)));
  GlauberTrajectory out{{}, start};
  for (std::int64_t t = 1; t <= steps; ++t) {
    glauber_update(out.final_config, params.p(), params.q(), rng);
    if (t % record_every == 0) {
      GlauberRow row;
      row.step = t;
      row.stats = stats(out.final_config.to_component_state(), intervals, threshold);
      row.open_edges = out.final_config.open_count();
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

}  // namespace rcmf
