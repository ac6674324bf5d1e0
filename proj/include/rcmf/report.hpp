#pragma once

#include "rcmf/cm_dynamics.hpp"
#include "rcmf/glauber.hpp"
#include "rcmf/state.hpp"

#include <json.hpp>

#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>

namespace rcmf {

inline constexpr int kCsvSchema = 1;

/// Raised for unwritable outputs so the CLI can map it to its own exit code.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `# schema=1`, then step,L1,L2,R1,R2,R_tilde,isolated,A,lambda_event,
/// drift_residual and, when tracked, s_vertices,q_value. Empty cells mark
/// values that were not observed at that step.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, bool with_sq);
void write_glauber_csv(std::ostream& out, const GlauberTrajectory& trajectory);

nlohmann::json to_json(const StatsReport& report);

/// Writes `content` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace rcmf
