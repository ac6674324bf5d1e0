#pragma once

#include "rcmf/random.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace rcmf {

struct PercolationOutcome {
  std::vector<std::int64_t> sizes;
  /// Parallel to `sizes`; edges - size + 1 per component.
  std::vector<std::int64_t> surpluses;
  std::int64_t m = 0;
  double p = 0.0;
};

/// Component sizes of G(m, p) via the breadth-first exploration process.
/// Each processed vertex draws Binomial(unvisited, p) new members and
/// Binomial(queued, p) surplus edges, so every pair is queried exactly once.
/// With `track_surplus` off the second draw is skipped; sizes keep the same
/// law.
PercolationOutcome sample_components(std::int64_t m, double p, Rng& rng, bool track_surplus = true);

/// Same sampler writing into caller-owned buffers (cleared first).
void sample_components_into(std::int64_t m, double p, Rng& rng, bool track_surplus,
                            std::vector<std::int64_t>& sizes,
                            std::vector<std::int64_t>& surpluses);

using SizeMultiset = std::vector<std::int64_t>;  // sorted descending

SizeMultiset canonical_multiset(std::span<const std::int64_t> sizes);

/// Exact law of the G(m, p) size multiset by enumerating all 2^{C(m,2)}
/// graphs. Refuses m > 6.
std::map<SizeMultiset, double> exact_gnp_small(int m, double p);

/// Reference sampler flipping every one of the C(m,2) pairs; used to
/// cross-check the exploration sampler at moderate m.
PercolationOutcome sample_components_bruteforce(std::int64_t m, double p, Rng& rng);

struct TreeCountMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Monte Carlo mean and variance of t_k, the number of tree components of
/// size k in G(n, p), over independent replicas.
std::map<std::int64_t, TreeCountMoments> tree_count_statistics(std::int64_t n, double p,
                                                               std::span<const std::int64_t> k_list,
                                                               int replicas, std::uint64_t seed);

}  // namespace rcmf
