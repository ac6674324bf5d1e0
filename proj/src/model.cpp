#include "rcmf/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace rcmf {

namespace {

constexpr double kRootTolerance = 1e-12;
constexpr int kMaxBisection = 200;
constexpr double kDriftZeroTolerance = 1e-12;
constexpr double kLambdaTolerance = 1e-8;

// exp(-d x) - (1 - x), written with expm1 so the sign stays reliable for
// x near zero.
double beta_residual(double d, double x) { return std::expm1(-d * x) + x; }

}  // namespace

ModelParams::ModelParams(std::int64_t n, double q, double lambda) : n_(n), q_(q), lambda_(lambda) {
  if (n < 1) {
    throw std::domain_error("n must be positive");
  }
  if (!(q > 0.0) || !std::isfinite(q)) {
    throw std::domain_error("q must be positive");
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::domain_error("lambda must be positive");
  }
  const double pp = p();
  if (!(pp > 0.0 && pp < 1.0)) {
    throw std::domain_error("p = lambda/n must lie in (0,1)");
  }
}

void ModelParams::require_cm_range() const {
  if (!(q_ > 1.0)) {
    throw std::domain_error("CM dynamics requires q > 1");
  }
}

double gibbs_log_weight(const ConfigSummary& s, double p, double q) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("gibbs_log_weight: p must lie in (0,1)");
  }
  if (!(q > 0.0)) {
    throw std::domain_error("gibbs_log_weight: q must be positive");
  }
  if (s.open_edges < 0 || s.open_edges > s.total_edges || s.components < 1) {
    throw std::invalid_argument("gibbs_log_weight: summary out of range");
  }
  return static_cast<double>(s.open_edges) * std::log(p) +
         static_cast<double>(s.total_edges - s.open_edges) * std::log1p(-p) +
         static_cast<double>(s.components) * std::log(q);
}

double gibbs_log_weight(const ConfigSummary& summary, const ModelParams& params) {
  return gibbs_log_weight(summary, params.p(), params.q());
}

double critical_lambda(double q) {
  if (!(q > 0.0)) {
    throw std::domain_error("critical_lambda: q must be positive");
  }
  if (q <= 2.0) {
    return q;
  }
  // log1p keeps the q -> 2+ limit accurate: (q-1)/(q-2) ln(q-1) -> 1.
  const double e = q - 2.0;
  return 2.0 * ((q - 1.0) / e) * std::log1p(q - 2.0);
}

double beta_root(double d) {
  if (!(d > 1.0) || !std::isfinite(d)) {
    throw std::domain_error("beta_root: no positive root for d <= 1");
  }
  double lo = kRootTolerance;
  double hi = 1.0 - kRootTolerance;
  if (beta_residual(d, hi) <= 0.0) {
    // Root within 1e-12 of one: the fixed point x = 1 - exp(-d x) contracts
    // there with rate d exp(-d) << 1.
    double x = 1.0;
    for (int i = 0; i < 50; ++i) {
      x = -std::expm1(-d * x);
    }
    return x;
  }
  for (int i = 0; i < kMaxBisection && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (beta_residual(d, mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

DriftEvaluation drift_evaluate(double theta, double lambda, double q) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw std::domain_error("drift_evaluate: theta must lie in (0,1]");
  }
  if (!(q > 1.0)) {
    throw std::domain_error("drift_evaluate: q must exceed 1");
  }
  if (!(lambda > 0.0)) {
    throw std::domain_error("drift_evaluate: lambda must be positive");
  }
  DriftEvaluation out;
  out.theta = theta;
  out.k_value = (1.0 + (q - 1.0) * theta) / q;
  out.theta_min = (q - lambda) / (lambda * (q - 1.0));
  const double d = lambda * out.k_value;
  if (d > 1.0) {
    const double phi = beta_root(d) * out.k_value;
    out.phi_value = phi;
    out.drift_value = theta - phi;
  }
  return out;
}

bool has_positive_drift_root(double lambda, double q, double grid_step) {
  if (!(q > 1.0)) {
    throw std::domain_error("has_positive_drift_root: q must exceed 1");
  }
  if (!(grid_step > 0.0 && grid_step <= 0.1)) {
    throw std::domain_error("has_positive_drift_root: grid_step must lie in (0, 0.1]");
  }
  const double theta_min = (q - lambda) / (lambda * (q - 1.0));
  if (theta_min >= 1.0) {
    return false;
  }
  auto f = [&](double theta) -> std::optional<double> {
    return drift_evaluate(theta, lambda, q).drift_value;
  };

  const double start = std::max(theta_min, grid_step);
  std::vector<double> thetas;
  std::vector<double> values;
  for (int i = 0;; ++i) {
    double theta = start + grid_step * i;
    const bool last = theta >= 1.0;
    if (last) {
      theta = 1.0;
    }
    if (auto v = f(theta)) {
      thetas.push_back(theta);
      values.push_back(*v);
    }
    if (last) {
      break;
    }
  }

  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::abs(values[i]) < kDriftZeroTolerance) {
      return true;
    }
    if (i + 1 < values.size() && values[i] * values[i + 1] < 0.0) {
      // Confirm the crossing by bisection; f is continuous on the bracket.
      double lo = thetas[i];
      double hi = thetas[i + 1];
      const bool lo_negative = values[i] < 0.0;
      for (int it = 0; it < kMaxBisection && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        const auto fm = f(mid);
        if (!fm) {
          lo = mid;
          continue;
        }
        if ((*fm < 0.0) == lo_negative) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const auto at = f(0.5 * (lo + hi));
      if (at && std::abs(*at) < 1e-9) {
        return true;
      }
    }
  }

  // Tangential contact: refine every interior grid minimum.
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] <= values[i - 1] && values[i] <= values[i + 1]) {
      double a = thetas[i - 1];
      double b = thetas[i + 1];
      const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
      double c = b - invphi * (b - a);
      double d = a + invphi * (b - a);
      double fc = f(c).value_or(values[i - 1]);
      double fd = f(d).value_or(values[i + 1]);
      for (int it = 0; it < 100 && b - a > 1e-13; ++it) {
        if (fc < fd) {
          b = d;
          d = c;
          fd = fc;
          c = b - invphi * (b - a);
          fc = f(c).value_or(fd);
        } else {
          a = c;
          c = d;
          fc = fd;
          d = a + invphi * (b - a);
          fd = f(d).value_or(fc);
        }
      }
      if (std::min(fc, fd) < kDriftZeroTolerance) {
        return true;
      }
    }
  }
  return false;
}

double find_lambda_s(double q) {
  if (!(q > 2.0)) {
    throw std::domain_error("find_lambda_s: no metastability window for q <= 2");
  }
  double lo = 1.0;
  double hi = q;
  if (!has_positive_drift_root(hi, q)) {
    throw std::domain_error("find_lambda_s: no drift root at lambda = q");
  }
  while (hi - lo > kLambdaTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (has_positive_drift_root(mid, q)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  if (q - hi < kLambdaTolerance) {
    throw std::domain_error("find_lambda_s: metastability window collapsed below tolerance");
  }
  return hi;
}

}  // namespace rcmf
