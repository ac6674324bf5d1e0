#include "rcmf/exact_chain.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rcmf {

ExactSpace::ExactSpace(int n_) : n(n_) {
  if (n < 1 || n > kExactMaxVertices) {
    throw std::domain_error("exact chains need 1 <= n <= 4");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      slots.emplace_back(i, j);
    }
  }
  edges = static_cast<int>(slots.size());
}

std::vector<int> ExactSpace::labels(std::uint32_t mask) const {
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) {
      v = parent[v] = parent[parent[v]];
    }
    return v;
  };
  for (int e = 0; e < edges; ++e) {
    if (mask >> e & 1u) {
      parent[find(slots[e].first)] = find(slots[e].second);
    }
  }
  for (int v = 0; v < n; ++v) {
    parent[v] = find(v);
  }
  return parent;
}

int ExactSpace::components(std::uint32_t mask) const {
  const auto l = labels(mask);
  int c = 0;
  for (int v = 0; v < n; ++v) {
    c += l[v] == v ? 1 : 0;
  }
  return c;
}

namespace {

void check_pq(double p, double q) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("exact chains need p in (0, 1)");
  }
  if (!(q > 0.0)) {
    throw std::domain_error("exact chains need q > 0");
  }
}

// Adds to `row` the law of independently opening each edge of `allowed`
// with probability p, on top of the fixed edges `base`, times `weight`.
void add_percolation(Eigen::RowVectorXd& row, std::uint32_t base, std::uint32_t allowed,
                     double p, double weight) {
  const int k = std::popcount(allowed);
  // Enumerate submasks of `allowed`.
  std::uint32_t sub = allowed;
  for (;;) {
    const int open = std::popcount(sub);
    row(base | sub) += weight * std::pow(p, open) * std::pow(1 - p, k - open);
    if (sub == 0) {
      break;
    }
    sub = (sub - 1) & allowed;
  }
}

template <class RowFn>
Eigen::MatrixXd build_rows(const ExactSpace& space, RowFn&& fill, Execution exec) {
  const auto states = static_cast<std::int64_t>(space.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(states, states);
  if (exec == Execution::Serial) {
    Eigen::RowVectorXd row(states);
    for (std::int64_t x = 0; x < states; ++x) {
      row.setZero();
      fill(static_cast<std::uint32_t>(x), row);
      m.row(x) = row;
    }
    return m;
  }
  const int threads = thread_count();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t x = 0; x < states; ++x) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(states);
    fill(static_cast<std::uint32_t>(x), row);
    m.row(x) = row;
  }
  return m;
}

// Edges with both endpoints in the vertex set `vs`.
std::uint32_t edges_within(const ExactSpace& space, std::uint32_t vs) {
  std::uint32_t out = 0;
  for (int e = 0; e < space.edges; ++e) {
    if ((vs >> space.slots[e].first & 1u) && (vs >> space.slots[e].second & 1u)) {
      out |= 1u << e;
    }
  }
  return out;
}

}  // namespace

Eigen::VectorXd gibbs_exact(int n, double p, double q) {
  check_pq(p, q);
  const ExactSpace space(n);
  Eigen::VectorXd pi(static_cast<Eigen::Index>(space.size()));
  for (std::uint32_t x = 0; x < space.size(); ++x) {
    const ConfigSummary s{std::popcount(x), space.edges, space.components(x)};
    pi(x) = std::exp(gibbs_log_weight(s, p, q));
  }
  return pi / pi.sum();
}

Eigen::VectorXd gibbs_exact(int n, const ModelParams& params) {
  if (params.n() != n) {
    throw std::invalid_argument("gibbs_exact: params.n() differs from n");
  }
  return gibbs_exact(n, params.p(), params.q());
}

ChainMatrix cm_matrix_exact(int n, double p, double q, bool unit_q, Execution exec) {
  check_pq(p, q);
  if (!(q > 1.0) && !(unit_q && q == 1.0)) {
    throw std::domain_error("CM chain requires q > 1 (or the q = 1 flag)");
  }
  const ExactSpace space(n);
  const double r = 1.0 / q;
  auto fill = [&](std::uint32_t x, Eigen::RowVectorXd& row) {
    const auto labels = space.labels(x);
    std::vector<std::uint32_t> comp_vertices;
    for (int v = 0; v < n; ++v) {
      if (labels[v] == v) {
        std::uint32_t vs = 0;
        for (int w = 0; w < n; ++w) {
          vs |= labels[w] == v ? 1u << w : 0u;
        }
        comp_vertices.push_back(vs);
      }
    }
    const int k = static_cast<int>(comp_vertices.size());
    for (std::uint32_t subset = 0; subset < (1u << k); ++subset) {
      const int active = std::popcount(subset);
      const double weight = std::pow(r, active) * std::pow(1 - r, k - active);
      if (weight == 0.0) {
        continue;
      }
      std::uint32_t vs = 0;
      for (int c = 0; c < k; ++c) {
        vs |= subset >> c & 1u ? comp_vertices[c] : 0u;
      }
      const std::uint32_t active_edges = edges_within(space, vs);
      const std::uint32_t inactive_edges = edges_within(space, ~vs & ((1u << n) - 1));
      const std::uint32_t crossing = ~(active_edges | inactive_edges) & ((1u << space.edges) - 1);
      if (x & crossing) {
        throw std::logic_error("cm_matrix_exact: open edge with one active endpoint");
      }
      add_percolation(row, x & inactive_edges, active_edges, p, weight);
    }
  };
  return {n, build_rows(space, fill, exec), gibbs_exact(n, p, q)};
}

ChainMatrix sw_matrix_exact(int n, double p, double q, Execution exec) {
  check_pq(p, q);
  if (q < 1.0 || q != std::floor(q)) {
    throw std::domain_error("Swendsen-Wang requires integer q >= 1");
  }
  const ExactSpace space(n);
  const int colours = static_cast<int>(q);
  auto fill = [&](std::uint32_t x, Eigen::RowVectorXd& row) {
    const auto labels = space.labels(x);
    std::vector<int> roots;
    for (int v = 0; v < n; ++v) {
      if (labels[v] == v) {
        roots.push_back(v);
      }
    }
    const int k = static_cast<int>(roots.size());
    int assignments = 1;
    for (int c = 0; c < k; ++c) {
      assignments *= colours;
    }
    const double weight = 1.0 / assignments;
    std::vector<int> colour_of(static_cast<std::size_t>(n));
    for (int a = 0; a < assignments; ++a) {
      int code = a;
      for (int c = 0; c < k; ++c) {
        const int col = code % colours;
        code /= colours;
        for (int v = 0; v < n; ++v) {
          if (labels[v] == roots[c]) {
            colour_of[v] = col;
          }
        }
      }
      std::uint32_t allowed = 0;
      for (int e = 0; e < space.edges; ++e) {
        if (colour_of[space.slots[e].first] == colour_of[space.slots[e].second]) {
          allowed |= 1u << e;
        }
      }
      add_percolation(row, 0, allowed, p, weight);
    }
  };
  return {n, build_rows(space, fill, exec), gibbs_exact(n, p, q)};
}

ChainMatrix glauber_matrix_exact(int n, double p, double q, Execution exec) {
  check_pq(p, q);
  const ExactSpace space(n);
  if (space.edges == 0) {
    return {n, Eigen::MatrixXd::Identity(1, 1), gibbs_exact(n, p, q)};
  }
  const double cut_open = p / (p + q * (1 - p));
  auto fill = [&](std::uint32_t x, Eigen::RowVectorXd& row) {
    const double pick = 1.0 / space.edges;
    for (int e = 0; e < space.edges; ++e) {
      const std::uint32_t closed = x & ~(1u << e);
      const auto labels = space.labels(closed);
      const bool cut = labels[space.slots[e].first] != labels[space.slots[e].second];
      const double open = cut ? cut_open : p;
      row(closed | (1u << e)) += pick * open;
      row(closed) += pick * (1 - open);
    }
  };
  return {n, build_rows(space, fill, exec), gibbs_exact(n, p, q)};
}

double stationarity_residual(const ChainMatrix& chain) {
  return ((chain.pi.transpose() * chain.matrix) - chain.pi.transpose()).cwiseAbs().maxCoeff();
}

double detailed_balance_residual(const ChainMatrix& chain) {
  const Eigen::MatrixXd flow = chain.pi.asDiagonal() * chain.matrix;
  return (flow - flow.transpose()).cwiseAbs().maxCoeff();
}

double row_sum_residual(const ChainMatrix& chain) {
  return (chain.matrix.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

double spectral_gap(const ChainMatrix& chain) {
  if (chain.matrix.rows() != chain.pi.size() || chain.matrix.cols() != chain.pi.size()) {
    throw std::invalid_argument("spectral_gap: shape mismatch");
  }
  if ((chain.pi.array() <= 0.0).any()) {
    throw std::domain_error("spectral_gap: pi must be strictly positive");
  }
  if (detailed_balance_residual(chain) > kReversibilityTolerance) {
    throw std::domain_error("spectral_gap: chain is not reversible with respect to pi");
  }
  if (chain.pi.size() == 1) {
    return 1.0;
  }
  const Eigen::VectorXd root = chain.pi.array().sqrt();
  const Eigen::VectorXd inv_root = root.cwiseInverse();
  Eigen::MatrixXd sym = root.asDiagonal() * chain.matrix * inv_root.asDiagonal();
  sym = 0.5 * (sym + sym.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = solver.eigenvalues();  // ascending; top one is 1
  double slem = 0.0;
  for (Eigen::Index i = 0; i + 1 < ev.size(); ++i) {
    slem = std::max(slem, std::abs(ev(i)));
  }
  return 1.0 - slem;
}

int mixing_time_exact(const ChainMatrix& chain, double eps, int max_steps) {
  auto worst_tv = [&](const Eigen::MatrixXd& m) {
    double worst = 0.0;
    for (Eigen::Index x = 0; x < m.rows(); ++x) {
      worst = std::max(worst, 0.5 * (m.row(x) - chain.pi.transpose()).cwiseAbs().sum());
    }
    return worst;
  };
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(chain.matrix.rows(), chain.matrix.cols());
  for (int t = 0; t <= max_steps; ++t) {
    if (worst_tv(power) <= eps) {
      return t;
    }
    power = power * chain.matrix;
  }
  throw std::runtime_error("mixing_time_exact: not mixed within max_steps");
}

}  // namespace rcmf
