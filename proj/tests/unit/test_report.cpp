#include "rcmf/report.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace rcmf;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    out.push_back(line);
  }
  return out;
}

int commas(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), ',')); }

}  // namespace

TEST_CASE("trajectory csv layout") {
  const ModelParams params(400, 1.5, 1.5);
  Rng rng = make_stream(1, 0);
  Observers obs;
  obs.sq_tracker = true;
  obs.drift_residual = true;
  const auto traj = run_trajectory(ComponentState::full(400), params, 5, obs, rng);
  for (const bool with_sq : {false, true}) {
    std::ostringstream out;
    write_trajectory_csv(out, traj, with_sq);
    const auto rows = lines(out.str());
    REQUIRE(rows.size() == traj.rows.size() + 2);
    CHECK(rows[0] == "# schema=1");
    const int width = commas(rows[1]);
    CHECK(width == (with_sq ? 11 : 9));
    for (std::size_t i = 2; i < rows.size(); ++i) {
      CHECK(commas(rows[i]) == width);
    }
  }
}

TEST_CASE("glauber csv layout") {
  const ModelParams params(20, 2.0, 1.0);
  Rng rng = make_stream(2, 0);
  const auto traj = glauber_trajectory(EdgeConfig(20), params, 50, 10, rng);
  std::ostringstream out;
  write_glauber_csv(out, traj);
  const auto rows = lines(out.str());
  REQUIRE(rows.size() == traj.rows.size() + 2);
  CHECK(rows[0] == "# schema=1");
  CHECK(rows[1].ends_with(",open_edges"));
  for (std::size_t i = 2; i < rows.size(); ++i) {
    CHECK(commas(rows[i]) == 10);
    CHECK(rows[i].find(",,,,") != std::string::npos);
  }
}

TEST_CASE("stats json") {
  const std::int64_t sizes[] = {5, 3, 1, 1};
  const auto s = stats(ComponentState::from_sizes(sizes), {}, 2);
  const auto j = to_json(s);
  CHECK(j["n"] == 10);
  CHECK(j["L1"] == 5);
  CHECK(j["L2"] == 3);
  CHECK(j["isolated"] == 2);
  CHECK(j["components"] == 4);
  CHECK(j.contains("interval_counts"));
}

TEST_CASE("write_file creates directories and reports failures") {
  const auto dir = std::filesystem::temp_directory_path() / "rcmf_report_test";
  std::filesystem::remove_all(dir);
  write_file(dir / "a" / "b.txt", "hello\n");
  std::ifstream in(dir / "a" / "b.txt");
  std::string text;
  std::getline(in, text);
  CHECK(text == "hello");
  // A regular file where a directory is needed.
  CHECK_THROWS_AS(write_file(dir / "a" / "b.txt" / "c.txt", "x"), IoError);
  std::filesystem::remove_all(dir);
}
