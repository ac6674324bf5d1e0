// rcmf: experiment runner for the mean-field random-cluster toolkit.
//
// Exit codes: 0 ok, 1 internal failure, 2 usage, 3 invalid parameters,
// 4 output not writable.

#include "rcmf/cm_dynamics.hpp"
#include "rcmf/coupling.hpp"
#include "rcmf/exact_chain.hpp"
#include "rcmf/glauber.hpp"
#include "rcmf/model.hpp"
#include "rcmf/parallel.hpp"
#include "rcmf/percolation.hpp"
#include "rcmf/report.hpp"
#include "rcmf/walks.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::json;
namespace fs = std::filesystem;
using namespace rcmf;

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitIo = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Settings {
  // Shared.
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string out = "rcmf_out";
  std::string format = "csv";
  std::string config;

  // Model.
  std::int64_t n = 1000;
  double q = 1.5;
  double lambda = 1.5;
  std::optional<double> p;

  // Schedules.
  int steps = 100;
  int replicas = 1;
  int max_steps = 1000;
  std::int64_t record_every = 1;
  std::string observers = "stats";
  std::string start = "full";
  std::string dynamics = "cm";

  // Interval and threshold overrides.
  std::optional<double> omega;
  std::optional<double> vartheta;
  std::optional<double> g_value;

  // Subcommand specific.
  double grid = 0.01;
  std::string policy = "corrected";
  double kappa = 0.5;
  double eps = 0.25;
  std::optional<double> r;
  std::int64_t A = 1;
  std::int64_t m = 100;
  std::int64_t d = 0;
  std::int64_t trials = 10000;
  std::string mode = "coupling";
  double step_factor = 2.0;
  std::vector<std::int64_t> k_list{16, 32, 64};
};

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

// Flat `key = value` lines; '#' starts a comment.
std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw UsageError("cannot read config file " + path);
  }
  std::map<std::string, std::string> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

// Splices config entries into argv as flags, skipping any key the command
// line already sets, so flags always win.
std::vector<std::string> merge_config(const std::vector<std::string>& args, const std::set<std::string>& subcommands) {
  std::optional<std::string> path;
  std::set<std::string> given;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& a = args[i];
    if (a.rfind("--", 0) != 0) {
      continue;
    }
    auto key = a.substr(2);
    std::optional<std::string> inline_value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      inline_value = key.substr(eq + 1);
      key = key.substr(0, eq);
    }
    given.insert(key);
    if (key == "config") {
      if (inline_value) {
        path = *inline_value;
      } else if (i + 1 < args.size()) {
        path = args[i + 1];
      }
    }
  }
  if (!path) {
    return args;
  }
  auto config = read_config(*path);
  std::vector<std::string> out;
  std::size_t pos = 1;
  out.push_back(args.front());
  // Find the subcommand; the config may name it when the command line does not.
  std::size_t sub_at = args.size();
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (subcommands.count(args[i])) {
      sub_at = i;
      break;
    }
  }
  if (sub_at == args.size()) {
    const auto it = config.find("subcommand");
    if (it == config.end()) {
      return args;  // CLI11 reports the missing subcommand
    }
    // Parent options are accepted after the subcommand, so all of argv can follow it.
    out.push_back(it->second);
  } else {
    for (; pos <= sub_at; ++pos) {
      out.push_back(args[pos]);
    }
  }
  config.erase("subcommand");
  for (const auto& [key, value] : config) {
    if (given.count(key)) {
      continue;
    }
    out.push_back("--" + key);
    out.push_back(value);
  }
  for (; pos < args.size(); ++pos) {
    out.push_back(args[pos]);
  }
  return out;
}

std::uint64_t require_seed(const Settings& s) {
  if (!s.seed) {
    throw UsageError("this subcommand is stochastic: pass --seed or set RCMF_SEED");
  }
  return *s.seed;
}

void pin_threads(const Settings& s, std::int64_t replicas) {
  if (s.threads > 0) {
    set_thread_count(s.threads);
    return;
  }
#ifdef _OPENMP
  set_thread_count(static_cast<int>(std::max<std::int64_t>(1, std::min<std::int64_t>(omp_get_max_threads(), replicas))));
#else
  (void)replicas;
#endif
}

IntervalSpec interval_spec(const Settings& s) {
  const IntervalSpec base;
  return IntervalSpec(s.vartheta.value_or(base.vartheta), s.g_value.value_or(base.g_value));
}

std::int64_t small_threshold(const Settings& s) {
  const double w = s.omega ? *s.omega : omega_default(s.n).omega;
  if (!(w > 0.0)) {
    throw std::domain_error("omega must be positive");
  }
  const double b = std::cbrt(static_cast<double>(s.n) * static_cast<double>(s.n)) / w;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(b)));
}

json scenario_json(const std::string& sub, const Settings& s) {
  json j{{"subcommand", sub}, {"n", s.n},   {"q", s.q},        {"lambda", s.lambda}, {"steps", s.steps},
         {"replicas", s.replicas}, {"max_steps", s.max_steps}, {"record_every", s.record_every},
         {"observers", s.observers}, {"start", s.start}, {"dynamics", s.dynamics},
         {"format", s.format}, {"output_path", s.out}, {"threads", s.threads}, {"grid", s.grid},
         {"policy", s.policy}, {"kappa", s.kappa}, {"eps", s.eps}, {"A", s.A}, {"m", s.m}, {"d", s.d},
         {"trials", s.trials}, {"mode", s.mode}, {"step_factor", s.step_factor}, {"k_list", s.k_list}};
  j["seed"] = s.seed ? json(*s.seed) : json(nullptr);
  j["p"] = s.p ? json(*s.p) : json(nullptr);
  j["r"] = s.r ? json(*s.r) : json(nullptr);
  j["omega_override"] = s.omega ? json(*s.omega) : json(nullptr);
  j["vartheta"] = s.vartheta ? json(*s.vartheta) : json(nullptr);
  j["g_value"] = s.g_value ? json(*s.g_value) : json(nullptr);
  j["config"] = s.config;
  return j;
}

// Simple table emitted as CSV (with the schema line) or a JSON array.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;  // empty string = missing

  std::string render(const std::string& format) const {
    if (format == "json") {
      json arr = json::array();
      for (const auto& row : rows) {
        json o = json::object();
        for (std::size_t c = 0; c < columns.size(); ++c) {
          if (row[c].empty()) {
            o[columns[c]] = nullptr;
          } else {
            o[columns[c]] = json::parse(row[c]);
          }
        }
        arr.push_back(o);
      }
      return arr.dump(1) + "\n";
    }
    std::ostringstream out;
    out << "# schema=" << kCsvSchema << '\n';
    for (std::size_t c = 0; c < columns.size(); ++c) {
      out << (c ? "," : "") << columns[c];
    }
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        out << (c ? "," : "") << row[c];
      }
      out << '\n';
    }
    return out.str();
  }
};

std::string ext(const Settings& s) { return s.format == "json" ? ".json" : ".csv"; }

// ----------------------------------------------------------------- commands

json cmd_drift(const Settings& s) {
  if (!(s.grid > 0.0 && s.grid <= 1.0)) {
    throw std::domain_error("grid must lie in (0, 1]");
  }
  Table t{{"theta", "phi", "f"}, {}};
  const int points = static_cast<int>(std::floor(1.0 / s.grid + 1e-9));
  for (int i = 1; i <= points; ++i) {
    const double theta = std::min(1.0, i * s.grid);
    const auto e = drift_evaluate(theta, s.lambda, s.q);
    t.rows.push_back({num(theta), e.phi_value ? num(*e.phi_value) : "", e.drift_value ? num(*e.drift_value) : ""});
  }
  write_file(fs::path(s.out) / ("drift" + ext(s)), t.render(s.format));
  json r{{"lambda_c", critical_lambda(s.q)},
         {"theta_min", drift_evaluate(0.5, s.lambda, s.q).theta_min},
         {"has_positive_root", has_positive_drift_root(s.lambda, s.q)}};
  if (s.q > 2.0) {
    r["lambda_s"] = find_lambda_s(s.q);
  }
  return r;
}

json trajectory_rows_json(const Trajectory& traj) {
  json arr = json::array();
  for (const auto& row : traj.rows) {
    json o{{"step", row.step}, {"stats", to_json(row.stats)}, {"A", row.active_vertices},
           {"lambda_event", row.largest_activated}};
    o["drift_residual"] = row.drift_residual ? json(*row.drift_residual) : json(nullptr);
    if (row.s_vertices) {
      o["s_vertices"] = *row.s_vertices;
    }
    if (row.q_value) {
      o["q_value"] = *row.q_value;
    }
    arr.push_back(o);
  }
  return arr;
}

json cmd_simulate(const Settings& s) {
  const auto seed = require_seed(s);
  const ModelParams params(s.n, s.q, s.lambda);
  const auto observers = Observers::parse(s.observers);
  TrajectoryConfig config;
  if (s.dynamics == "sw") {
    config.dynamics = Dynamics::SwendsenWang;
  } else if (s.dynamics != "cm") {
    throw UsageError("--dynamics must be cm or sw");
  }
  if (s.start != "full" && s.start != "empty") {
    throw UsageError("--start must be full or empty");
  }
  config.intervals = interval_spec(s);
  config.small_threshold = small_threshold(s);
  if (s.replicas < 1 || s.steps < 0) {
    throw std::invalid_argument("replicas must be >= 1 and steps >= 0");
  }
  pin_threads(s, s.replicas);
  const auto start = s.start == "full" ? ComponentState::full(s.n) : ComponentState::empty(s.n);
  auto trajectories = run_replicas<Trajectory>(static_cast<std::size_t>(s.replicas), seed, [&](Rng& rng, std::size_t) {
    return run_trajectory(start, params, s.steps, observers, rng, config);
  });
  json finals = json::array();
  for (std::size_t k = 0; k < trajectories.size(); ++k) {
    const auto name = "replica_" + std::to_string(k) + ext(s);
    std::string body;
    if (s.format == "json") {
      body = trajectory_rows_json(trajectories[k]).dump(1) + "\n";
    } else {
      std::ostringstream out;
      write_trajectory_csv(out, trajectories[k], observers.sq_tracker);
      body = out.str();
    }
    write_file(fs::path(s.out) / name, body);
    const auto& last = trajectories[k].final_state;
    finals.push_back({{"file", name}, {"final", to_json(stats(last, config.intervals, *config.small_threshold))}});
  }
  return {{"replicas", finals}, {"small_threshold", *config.small_threshold}};
}

json cmd_glauber(const Settings& s) {
  const auto seed = require_seed(s);
  const ModelParams params(s.n, s.q, s.lambda);
  if (s.n > kGlauberMaxVertices) {
    throw std::domain_error("glauber: n exceeds " + std::to_string(kGlauberMaxVertices));
  }
  if (s.replicas < 1) {
    throw std::invalid_argument("replicas must be >= 1");
  }
  pin_threads(s, s.replicas);
  const auto intervals = interval_spec(s);
  auto runs = run_replicas<GlauberTrajectory>(static_cast<std::size_t>(s.replicas), seed, [&](Rng& rng, std::size_t) {
    EdgeConfig start(static_cast<int>(s.n));
    if (s.start == "full") {
      for (std::int64_t e = 0; e < start.slot_count(); ++e) {
        start.set(e, true);
      }
    }
    return glauber_trajectory(start, params, s.steps, s.record_every, rng, intervals);
  });
  json finals = json::array();
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto name = "glauber_" + std::to_string(k) + ext(s);
    std::string body;
    if (s.format == "json") {
      json arr = json::array();
      for (const auto& row : runs[k].rows) {
        arr.push_back({{"step", row.step}, {"stats", to_json(row.stats)}, {"open_edges", row.open_edges}});
      }
      body = arr.dump(1) + "\n";
    } else {
      std::ostringstream out;
      write_glauber_csv(out, runs[k]);
      body = out.str();
    }
    write_file(fs::path(s.out) / name, body);
    finals.push_back({{"file", name}, {"open_edges", runs[k].final_config.open_count()},
                      {"components", runs[k].final_config.component_count()}});
  }
  return {{"replicas", finals}};
}

CouplingOptions coupling_options(const Settings& s) {
  CouplingOptions o;
  if (s.policy == "matched") {
    o.policy = CouplingPolicy::Matched;
  } else if (s.policy != "corrected") {
    throw UsageError("--policy must be matched or corrected");
  }
  o.kappa = s.kappa;
  o.intervals = interval_spec(s);
  return o;
}

json cmd_couple(const Settings& s) {
  const auto seed = require_seed(s);
  pin_threads(s, s.replicas);
  const auto report = coupling_time_experiment(s.n, s.q, s.lambda, s.replicas, s.max_steps, seed, coupling_options(s));
  Table t{{"replica", "coalescence_time"}, {}};
  for (std::size_t k = 0; k < report.times.size(); ++k) {
    t.rows.push_back({std::to_string(k), report.times[k] ? std::to_string(*report.times[k]) : ""});
  }
  write_file(fs::path(s.out) / ("couple" + ext(s)), t.render(s.format));
  json r{{"success_fraction", report.success_fraction}};
  r["median"] = report.median ? json(*report.median) : json(nullptr);
  return r;
}

json cmd_exact(const Settings& s) {
  if (s.n > kExactMaxVertices || s.n < 1) {
    throw std::domain_error("exact: n must lie in [1, 4]");
  }
  const double p = s.p ? *s.p : s.lambda / static_cast<double>(s.n);
  const int n = static_cast<int>(s.n);
  const auto cm = cm_matrix_exact(n, p, s.q);
  const auto gd = glauber_matrix_exact(n, p, s.q);
  json r{{"params", {{"n", n}, {"p", p}, {"q", s.q}}},
         {"gap_cm", spectral_gap(cm)},
         {"gap_gd", spectral_gap(gd)},
         {"tmix_cm", mixing_time_exact(cm, s.eps)},
         {"tmix_gd", mixing_time_exact(gd, s.eps)},
         {"stationarity_residual", std::max(stationarity_residual(cm), stationarity_residual(gd))},
         {"reversibility_residual", std::max(detailed_balance_residual(cm), detailed_balance_residual(gd))},
         {"pi_min", gd.pi.minCoeff()}};
  if (s.q >= 1.0 && s.q == std::floor(s.q)) {
    const auto sw = sw_matrix_exact(n, p, s.q);
    r["gap_sw"] = spectral_gap(sw);
    r["tmix_sw"] = mixing_time_exact(sw, s.eps);
  }
  write_file(fs::path(s.out) / "exact.json", r.dump(2) + "\n");
  return r;
}

json cmd_llt(const Settings& s) {
  const auto seed = require_seed(s);
  Rng rng = make_stream(seed, 0);
  const double omega = s.omega.value_or(omega_default(s.n).omega);
  const double r = s.r.value_or(1.0 / s.q);
  const auto inst = llt_instance_from_critical_graph(s.n, omega, r, rng);
  const auto report = llt_exact_check(inst);
  Table t{{"components", "r", "mu", "sigma", "sup_error", "argmax", "total_mass"},
          {{std::to_string(inst.sizes.size()), num(r), num(report.mu), num(report.sigma), num(report.sup_error),
            std::to_string(report.argmax), num(report.total_mass)}}};
  write_file(fs::path(s.out) / ("llt" + ext(s)), t.render(s.format));
  // ell: smallest interval index whose lower endpoint falls below n^{1/4}.
  // Reported with the interval counts of the instance, not used as a gate.
  const auto spec = interval_spec(s);
  const double quarter = std::pow(static_cast<double>(s.n), 0.25);
  int ell = 0;
  while (ell < 64 && spec.lower(s.n, ell) >= quarter) {
    ++ell;
  }
  json counts = json::object();
  for (int k = 0; k <= ell; ++k) {
    std::int64_t c = 0;
    for (const auto size : inst.sizes) {
      const auto d = static_cast<double>(size);
      c += d >= spec.lower(s.n, k) && d <= spec.upper(s.n, k) ? 1 : 0;
    }
    counts[std::to_string(k)] = c;
  }
  return {{"omega", omega}, {"sup_error", report.sup_error}, {"sigma", report.sigma}, {"ell", ell},
          {"interval_counts", counts}};
}

json cmd_rw(const Settings& s) {
  const auto seed = require_seed(s);
  Rng rng = make_stream(seed, 0);
  const auto factor = static_cast<std::int64_t>(s.step_factor);
  if (factor < 1 || static_cast<double>(factor) != s.step_factor) {
    throw std::invalid_argument("--step-factor must be a positive integer");
  }
  WalkSpec spec;
  spec.A = s.A;
  spec.r = s.r.value_or(0.5);
  spec.d = s.d;
  if (s.m < 1) {
    throw std::invalid_argument("--m must be >= 1");
  }
  std::uniform_int_distribution<std::int64_t> pick(s.A, factor * s.A);
  for (std::int64_t i = 0; i < s.m; ++i) {
    spec.steps.push_back(pick(rng));
  }
  Table t;
  json r;
  if (s.mode == "coupling") {
    const auto out = rw_difference_coupling(spec, s.trials, rng);
    t.columns = {"A", "m", "d", "r", "success", "lower", "upper", "bound"};
    t.rows.push_back({std::to_string(s.A), std::to_string(s.m), std::to_string(s.d), num(spec.r),
                      num(out.success.estimate), num(out.success.lower), num(out.success.upper), num(out.bound)});
    r = {{"success", out.success.estimate}, {"bound", out.bound}, {"holds", out.success.upper >= out.bound}};
  } else if (s.mode == "reflection") {
    const auto out = rw_max_tail(spec, s.d, s.trials, rng);
    t.columns = {"A", "m", "y", "r", "max_tail", "max_upper", "sum_tail", "sum_lower", "holds"};
    t.rows.push_back({std::to_string(s.A), std::to_string(s.m), std::to_string(s.d), num(spec.r),
                      num(out.max_tail.estimate), num(out.max_tail.upper), num(out.sum_tail.estimate),
                      num(out.sum_tail.lower), out.holds ? "1" : "0"});
    r = {{"max_tail", out.max_tail.estimate}, {"sum_tail", out.sum_tail.estimate}, {"holds", out.holds}};
  } else {
    throw UsageError("--mode must be coupling or reflection");
  }
  write_file(fs::path(s.out) / ("rw" + ext(s)), t.render(s.format));
  return r;
}

json cmd_stats(const Settings& s) {
  const auto seed = require_seed(s);
  if (s.replicas < 1) {
    throw std::invalid_argument("replicas must be >= 1");
  }
  pin_threads(s, s.replicas);
  const double p = s.lambda / static_cast<double>(s.n);
  const auto intervals = interval_spec(s);
  const auto threshold = small_threshold(s);
  auto reports = run_replicas<StatsReport>(static_cast<std::size_t>(s.replicas), seed, [&](Rng& rng, std::size_t) {
    const auto g = sample_components(s.n, p, rng, false);
    return stats(ComponentState::from_sizes(g.sizes), intervals, threshold);
  });
  Table t{{"replica", "n", "L1", "L2", "R1", "R2", "R_tilde", "isolated", "components"}, {}};
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const auto& r = reports[k];
    t.rows.push_back({std::to_string(k), std::to_string(r.n), std::to_string(r.L1), std::to_string(r.L2),
                      std::to_string(r.R1), std::to_string(r.R2), std::to_string(r.R_tilde),
                      std::to_string(r.isolated), std::to_string(r.components)});
  }
  write_file(fs::path(s.out) / ("graphs" + ext(s)), t.render(s.format));

  const auto trees = tree_count_statistics(s.n, p, s.k_list, s.replicas, seed + 1);
  Table tt{{"k", "mean", "variance", "ratio"}, {}};
  for (const auto& [k, mom] : trees) {
    const double ratio = mom.mean * std::pow(static_cast<double>(k), 2.5) / static_cast<double>(s.n);
    tt.rows.push_back({std::to_string(k), num(mom.mean), num(mom.variance), num(ratio)});
  }
  write_file(fs::path(s.out) / ("trees" + ext(s)), tt.render(s.format));
  return {{"p", p}, {"small_threshold", threshold}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean-field random-cluster simulator and verification lab"};
  app.require_subcommand(1);
  app.fallthrough();
  Settings s;

  app.add_option("--config", s.config, "Flat key = value file; command-line flags win");
  app.add_option("--seed", s.seed, "Master seed (stochastic subcommands)")->envname("RCMF_SEED");
  app.add_option("--threads", s.threads, "Worker threads (0: cores, capped by replicas)")->check(CLI::NonNegativeNumber);
  app.add_option("--out", s.out, "Output directory");
  app.add_option("--format", s.format, "Tabular output format")->check(CLI::IsMember({"csv", "json"}));

  auto model = [&](CLI::App* sub) {
    sub->add_option("--n", s.n, "Vertices");
    sub->add_option("--q", s.q, "Cluster weight");
    sub->add_option("--lambda", s.lambda, "Mean degree; p = lambda / n");
  };
  auto intervals = [&](CLI::App* sub) {
    sub->add_option("--omega", s.omega, "Override omega (small-component threshold n^(2/3)/omega)");
    sub->add_option("--vartheta", s.vartheta, "Interval scale");
    sub->add_option("--g", s.g_value, "Interval growth function value");
  };

  auto* drift = app.add_subcommand("drift", "Drift function on a theta grid");
  drift->add_option("--q", s.q);
  drift->add_option("--lambda", s.lambda);
  drift->add_option("--grid", s.grid, "Theta spacing");

  auto* simulate = app.add_subcommand("simulate", "CM or Swendsen-Wang trajectories");
  model(simulate);
  intervals(simulate);
  simulate->add_option("--steps", s.steps);
  simulate->add_option("--replicas", s.replicas);
  simulate->add_option("--observers", s.observers, "stats,sq_tracker,drift_residual,step_trace");
  simulate->add_option("--start", s.start, "full or empty");
  simulate->add_option("--dynamics", s.dynamics, "cm or sw");

  auto* glauber = app.add_subcommand("glauber", "Heat-bath edge dynamics");
  model(glauber);
  intervals(glauber);
  glauber->add_option("--steps", s.steps);
  glauber->add_option("--replicas", s.replicas);
  glauber->add_option("--record-every", s.record_every);
  glauber->add_option("--start", s.start, "full or empty");

  auto* couple = app.add_subcommand("couple", "Coalescence times of the coupled chains");
  model(couple);
  intervals(couple);
  couple->add_option("--replicas", s.replicas);
  couple->add_option("--max-steps", s.max_steps);
  couple->add_option("--policy", s.policy, "matched or corrected");
  couple->add_option("--kappa", s.kappa, "Correction cap in standard deviations");

  auto* exact = app.add_subcommand("exact", "Exact transition matrices for n <= 4");
  exact->add_option("--n", s.n);
  exact->add_option("--q", s.q);
  exact->add_option("--p", s.p, "Edge probability (default lambda / n)");
  exact->add_option("--lambda", s.lambda);
  exact->add_option("--eps", s.eps, "Mixing-time threshold");

  auto* llt = app.add_subcommand("llt", "Local limit check on a critical-graph instance");
  llt->add_option("--n", s.n);
  llt->add_option("--q", s.q, "Sets r = 1/q unless --r is given");
  llt->add_option("--omega", s.omega);
  llt->add_option("--r", s.r, "Activation probability");

  auto* rw = app.add_subcommand("rw", "Random-walk coupling and reflection bounds");
  rw->add_option("--A", s.A);
  rw->add_option("--m", s.m, "Number of steps");
  rw->add_option("--d", s.d, "Target difference (or level y for reflection)");
  rw->add_option("--r", s.r, "Step probability per sign");
  rw->add_option("--trials", s.trials);
  rw->add_option("--mode", s.mode, "coupling or reflection");
  rw->add_option("--step-factor", s.step_factor, "Step sizes drawn uniformly from [A, factor A]");

  auto* stats_cmd = app.add_subcommand("stats", "Random-graph statistics for G(n, lambda/n)");
  stats_cmd->add_option("--n", s.n);
  stats_cmd->add_option("--lambda", s.lambda);
  stats_cmd->add_option("--replicas", s.replicas);
  stats_cmd->add_option("--k", s.k_list, "Tree sizes");
  intervals(stats_cmd);

  std::vector<std::string> args(argv, argv + argc);
  std::set<std::string> names;
  for (const auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    names.insert(sub->get_name());
  }
  try {
    args = merge_config(args, names);
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    app.parse(std::move(rev));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "rcmf: " << e.what() << '\n';
    return kExitUsage;
  }

  const auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  json summary{{"schema", kCsvSchema}, {"scenario", scenario_json(name, s)}, {"started", timestamp()}};
  try {
    json result;
    if (name == "drift") {
      result = cmd_drift(s);
    } else if (name == "simulate") {
      result = cmd_simulate(s);
    } else if (name == "glauber") {
      result = cmd_glauber(s);
    } else if (name == "couple") {
      result = cmd_couple(s);
    } else if (name == "exact") {
      result = cmd_exact(s);
    } else if (name == "llt") {
      result = cmd_llt(s);
    } else if (name == "rw") {
      result = cmd_rw(s);
    } else {
      result = cmd_stats(s);
    }
    summary["results"] = result;
    summary["finished"] = timestamp();
    summary["status"] = "ok";
    write_file(fs::path(s.out) / "summary.json", summary.dump(2) + "\n");
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "rcmf: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "rcmf: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::domain_error& e) {
    std::cerr << "rcmf: invalid parameters: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    std::cerr << "rcmf: invalid parameters: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "rcmf: " << e.what() << '\n';
    summary["status"] = std::string("failed: ") + e.what();
    try {
      write_file(fs::path(s.out) / "summary.json", summary.dump(2) + "\n");
    } catch (const IoError&) {
    }
    return kExitInternal;
  }
}
