#include "rcmf/percolation.hpp"

#include "rcmf/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rcmf {

namespace {

int find_root(std::vector<int>& parent, int v) {
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

}  // namespace

void sample_components_into(std::int64_t m, double p, Rng& rng, bool track_surplus,
                            std::vector<std::int64_t>& sizes,
                            std::vector<std::int64_t>& surpluses) {
  if (m < 0) {
    throw std::invalid_argument("sample_components: negative vertex count");
  }
  if (!(p >= 0.0) || p >= 1.0) {
    throw std::domain_error("sample_components: p must lie in [0,1)");
  }
  sizes.clear();
  surpluses.clear();
  if (p == 0.0) {
    sizes.assign(static_cast<std::size_t>(m), 1);
    surpluses.assign(static_cast<std::size_t>(m), 0);
    return;
  }
  const double log_q = std::log1p(-p);
  std::int64_t unvisited = m;
  while (unvisited > 0) {
    --unvisited;
    std::int64_t queued = 1;
    std::int64_t size = 1;
    std::int64_t surplus = 0;
    while (queued > 0) {
      --queued;
      if (track_surplus && queued > 0) {
        surplus += binomial_small_mean(rng, queued, p, log_q);
      }
      const std::int64_t fresh = binomial_small_mean(rng, unvisited, p, log_q);
      unvisited -= fresh;
      queued += fresh;
      size += fresh;
    }
    sizes.push_back(size);
    surpluses.push_back(surplus);
  }
}

PercolationOutcome sample_components(std::int64_t m, double p, Rng& rng, bool track_surplus) {
  PercolationOutcome out;
  out.m = m;
  out.p = p;
  sample_components_into(m, p, rng, track_surplus, out.sizes, out.surpluses);
  return out;
}

SizeMultiset canonical_multiset(std::span<const std::int64_t> sizes) {
  SizeMultiset out(sizes.begin(), sizes.end());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::map<SizeMultiset, double> exact_gnp_small(int m, double p) {
  if (m < 0 || m > 6) {
    throw std::invalid_argument("exact_gnp_small: enumeration limited to m <= 6");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("exact_gnp_small: p must lie in [0,1]");
  }
  std::map<SizeMultiset, double> law;
  if (m == 0) {
    law[{}] = 1.0;
    return law;
  }
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      pairs.emplace_back(i, j);
    }
  }
  const int e = static_cast<int>(pairs.size());
  std::vector<int> parent(static_cast<std::size_t>(m));
  for (std::uint32_t mask = 0; mask < (1u << e); ++mask) {
    std::iota(parent.begin(), parent.end(), 0);
    const int open = std::popcount(mask);
    for (int b = 0; b < e; ++b) {
      if (mask & (1u << b)) {
        const int a = find_root(parent, pairs[b].first);
        const int c = find_root(parent, pairs[b].second);
        if (a != c) {
          parent[a] = c;
        }
      }
    }
    std::vector<std::int64_t> count(static_cast<std::size_t>(m), 0);
    for (int v = 0; v < m; ++v) {
      ++count[find_root(parent, v)];
    }
    std::vector<std::int64_t> sizes;
    for (auto c : count) {
      if (c > 0) {
        sizes.push_back(c);
      }
    }
    const double weight = std::pow(p, open) * std::pow(1.0 - p, e - open);
    if (weight == 0.0) {
      continue;
    }
    law[canonical_multiset(sizes)] += weight;
  }
  return law;
}

PercolationOutcome sample_components_bruteforce(std::int64_t m, double p, Rng& rng) {
  PercolationOutcome out;
  out.m = m;
  out.p = p;
  std::vector<int> parent(static_cast<std::size_t>(m));
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<std::int64_t> edges(static_cast<std::size_t>(m), 0);
  std::vector<std::pair<int, int>> open;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (bernoulli(rng, p)) {
        open.emplace_back(i, j);
        const int a = find_root(parent, i);
        const int b = find_root(parent, j);
        if (a != b) {
          parent[a] = b;
        }
      }
    }
  }
  std::vector<std::int64_t> size(static_cast<std::size_t>(m), 0);
  for (int v = 0; v < m; ++v) {
    ++size[find_root(parent, v)];
  }
  for (const auto& [i, j] : open) {
    ++edges[find_root(parent, i)];
  }
  for (int v = 0; v < m; ++v) {
    if (size[v] > 0) {
      out.sizes.push_back(size[v]);
      out.surpluses.push_back(edges[v] - size[v] + 1);
    }
  }
  return out;
}

std::map<std::int64_t, TreeCountMoments> tree_count_statistics(std::int64_t n, double p,
                                                               std::span<const std::int64_t> k_list,
                                                               int replicas, std::uint64_t seed) {
  if (replicas < 1) {
    throw std::invalid_argument("tree_count_statistics: need at least one replica");
  }
  const std::vector<std::int64_t> ks(k_list.begin(), k_list.end());
  auto counts = run_replicas<std::vector<double>>(
      static_cast<std::size_t>(replicas), seed,
      [&](Rng& rng, std::size_t) {
        std::vector<std::int64_t> sizes;
        std::vector<std::int64_t> surpluses;
        sample_components_into(n, p, rng, true, sizes, surpluses);
        std::vector<double> t(ks.size(), 0.0);
        for (std::size_t c = 0; c < sizes.size(); ++c) {
          if (surpluses[c] != 0) {
            continue;
          }
          for (std::size_t j = 0; j < ks.size(); ++j) {
            if (sizes[c] == ks[j]) {
              t[j] += 1.0;
            }
          }
        }
        return t;
      });

  std::map<std::int64_t, TreeCountMoments> out;
  for (std::size_t j = 0; j < ks.size(); ++j) {
    double sum = 0.0;
    for (const auto& row : counts) {
      sum += row[j];
    }
    const double mean = sum / replicas;
    double ss = 0.0;
    for (const auto& row : counts) {
      ss += (row[j] - mean) * (row[j] - mean);
    }
    out[ks[j]] = {mean, replicas > 1 ? ss / (replicas - 1) : 0.0};
  }
  return out;
}

}  // namespace rcmf
