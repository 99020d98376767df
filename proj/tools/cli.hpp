#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mal::cli {

enum ExitCode { kOk = 0, kUsage = 1, kValidation = 2, kNumeric = 3 };

struct RunConfig {
  std::string subcommand;
  std::string dist;  // inline JSON or a path to a JSON file
  int order = 2;
  std::size_t n = 1000;
  std::size_t reps = 1000;
  std::uint64_t seed = 0x5EEDCAFE;
  std::string scaling = "auto";
  std::optional<std::string> orientation;
  std::string out;
  std::string csv;
  std::string rate_csv;
  double tol_singular = 1e-10;
  double ks_threshold = 0.02;
  int theta_grid = 50;
  std::string mode = "statistic";  // statistic | rate | both
  int rate_r = 2;
  std::vector<std::size_t> n_grid{500, 2000, 8000};
  bool keep_sample = false;
};

std::string load_dist_text(const std::string& dist);

nlohmann::json cmd_analyze(const RunConfig& config);
nlohmann::json cmd_catalog(const RunConfig& config);
nlohmann::json cmd_solve(const RunConfig& config);
nlohmann::json cmd_limit(const RunConfig& config);
nlohmann::json cmd_simulate(const RunConfig& config);

// Parses argv, dispatches and writes the JSON report to `out` (and --out).
// Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mal::cli
