#pragma once

#include <cstdint>
#include <optional>

namespace rcmf {

/// Mean-field model scalars. The edge probability is always derived as
/// lambda / n and never stored on its own.
class ModelParams {
 public:
  ModelParams(std::int64_t n, double q, double lambda);

  std::int64_t n() const { return n_; }
  double q() const { return q_; }
  double lambda() const { return lambda_; }
  double p() const { return lambda_ / static_cast<double>(n_); }

  /// Throws std::domain_error unless q > 1 (the CM chain's range).
  void require_cm_range() const;

 private:
  std::int64_t n_;
  double q_;
  double lambda_;
};

struct ConfigSummary {
  std::int64_t open_edges = 0;
  std::int64_t total_edges = 0;
  std::int64_t components = 0;
};

/// Unnormalised log Gibbs weight |A| ln p + (|E|-|A|) ln(1-p) + c(A) ln q.
double gibbs_log_weight(const ConfigSummary& summary, double p, double q);
double gibbs_log_weight(const ConfigSummary& summary, const ModelParams& params);

/// Critical mean degree: q for q <= 2, 2 (q-1)/(q-2) ln(q-1) above.
double critical_lambda(double q);

/// Positive root of exp(-d x) = 1 - x, defined for d > 1. This is the giant
/// component fraction of a supercritical G(n, d/n).
double beta_root(double d);

struct DriftEvaluation {
  double theta = 0.0;
  std::optional<double> phi_value;
  std::optional<double> drift_value;
  double k_value = 0.0;
  double theta_min = 0.0;
};

/// k(theta) = (1 + (q-1) theta) / q; phi = beta(lambda k) k when lambda k > 1;
/// drift f = theta - phi.
DriftEvaluation drift_evaluate(double theta, double lambda, double q);

inline constexpr double kDefaultDriftGrid = 0.001;

/// True iff the drift function has a root in (theta_min, 1]. A coarse grid
/// scan looks for sign changes; grid-local minima are refined by golden
/// section so tangential roots are not missed.
bool has_positive_drift_root(double lambda, double q, double grid_step = kDefaultDriftGrid);

/// Onset of a drift root, used as the operational lower end of the
/// metastability window. Requires q > 2; bisection on lambda to 1e-8.
double find_lambda_s(double q);

}  // namespace rcmf
