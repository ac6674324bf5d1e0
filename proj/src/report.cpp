#include "rcmf/report.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace rcmf {

namespace {

std::string fixed(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, bool with_sq) {
  out << "# schema=" << kCsvSchema << '\n';
  out << "step,L1,L2,R1,R2,R_tilde,isolated,A,lambda_event,drift_residual";
  if (with_sq) {
    out << ",s_vertices,q_value";
  }
  out << '\n';
  for (const auto& row : trajectory.rows) {
    const auto& s = row.stats;
    out << row.step << ',' << s.L1 << ',' << s.L2 << ',' << s.R1 << ',' << s.R2 << ','
        << s.R_tilde << ',' << s.isolated << ',' << row.active_vertices << ','
        << (row.largest_activated ? 1 : 0) << ',';
    if (row.drift_residual) {
      out << fixed(*row.drift_residual);
    }
    if (with_sq) {
      out << ',';
      if (row.s_vertices) {
        out << *row.s_vertices;
      }
      out << ',';
      if (row.q_value) {
        out << *row.q_value;
      }
    }
    out << '\n';
  }
}

void write_glauber_csv(std::ostream& out, const GlauberTrajectory& trajectory) {
  // CM columns with the activation-only ones left empty, plus open_edges.
  out << "# schema=" << kCsvSchema << '\n';
  out << "step,L1,L2,R1,R2,R_tilde,isolated,A,lambda_event,drift_residual,open_edges\n";
  for (const auto& row : trajectory.rows) {
    const auto& s = row.stats;
    out << row.step << ',' << s.L1 << ',' << s.L2 << ',' << s.R1 << ',' << s.R2 << ','
        << s.R_tilde << ',' << s.isolated << ",,,," << row.open_edges << '\n';
  }
}

nlohmann::json to_json(const StatsReport& r) {
  nlohmann::json j{{"n", r.n},         {"L1", r.L1},
                   {"L2", r.L2},       {"R1", r.R1},
                   {"R2", r.R2},       {"R_tilde", r.R_tilde},
                   {"isolated", r.isolated}, {"components", r.components},
                   {"open_edges", r.open_edges}};
  auto& counts = j["interval_counts"] = nlohmann::json::object();
  for (const auto& [k, v] : r.interval_counts) {
    counts[std::to_string(k)] = v;
  }
  if (r.tree_counts) {
    auto& trees = j["tree_counts"] = nlohmann::json::object();
    for (const auto& [k, v] : *r.tree_counts) {
      trees[std::to_string(k)] = v;
    }
  }
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  f << content;
  if (!f.flush()) {
    throw IoError("write failed for " + path.string());
  }
}

}  // namespace rcmf
