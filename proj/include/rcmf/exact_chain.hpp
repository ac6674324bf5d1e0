#pragma once

#include "rcmf/model.hpp"
#include "rcmf/parallel.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace rcmf {

inline constexpr int kExactMaxVertices = 4;

/// Edge configurations of K_n as bitmasks over the lexicographic pair slots;
/// state index == mask.
struct ExactSpace {
  int n = 0;
  int edges = 0;
  std::vector<std::pair<int, int>> slots;
  explicit ExactSpace(int n);
  std::size_t size() const { return std::size_t{1} << edges; }
  int components(std::uint32_t mask) const;
  /// Component label per vertex.
  std::vector<int> labels(std::uint32_t mask) const;
};

struct ChainMatrix {
  int n = 0;
  Eigen::MatrixXd matrix;  // row-stochastic
  Eigen::VectorXd pi;      // exact Gibbs vector
};

Eigen::VectorXd gibbs_exact(int n, double p, double q);
Eigen::VectorXd gibbs_exact(int n, const ModelParams& params);

/// CM one-step law. `unit_q` admits q = 1 (every component active).
ChainMatrix cm_matrix_exact(int n, double p, double q, bool unit_q = false,
                            Execution exec = Execution::Parallel);
/// Swendsen-Wang; q must be a positive integer.
ChainMatrix sw_matrix_exact(int n, double p, double q, Execution exec = Execution::Parallel);
/// Heat-bath edge dynamics with a uniformly chosen edge.
ChainMatrix glauber_matrix_exact(int n, double p, double q, Execution exec = Execution::Parallel);

/// max_y |(pi P)(y) - pi(y)|.
double stationarity_residual(const ChainMatrix& chain);
/// max_{x,y} |pi(x) P(x,y) - pi(y) P(y,x)|.
double detailed_balance_residual(const ChainMatrix& chain);
double row_sum_residual(const ChainMatrix& chain);

inline constexpr double kReversibilityTolerance = 1e-9;

/// 1 - second largest eigenvalue modulus of D^{1/2} P D^{-1/2}. Throws if
/// the chain is not reversible with respect to `chain.pi`.
double spectral_gap(const ChainMatrix& chain);

/// Smallest t with max_x TV(P^t(x, .), pi) <= eps.
int mixing_time_exact(const ChainMatrix& chain, double eps = 0.25, int max_steps = 100000);

}  // namespace rcmf
