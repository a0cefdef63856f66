#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "shtgame/cli/config.hpp"

namespace shtgame::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 1;
inline constexpr int numeric = 2;
}  // namespace exit_code

struct CommandOptions {
  std::filesystem::path out = "out";
  bool plots = false;
};

/// Writes coeffs.csv, trajectories.csv, mc_summary.json (and V, Y, alpha, beta plots).
int cmd_blue_solve(const RunConfig& config, const CommandOptions& options, std::ostream& log);

/// Writes fc_optimized.csv, report.json (and an f_c plot). Non-convergence is reported,
/// not an error.
int cmd_red_optimize(const RunConfig& config, const CommandOptions& options, std::ostream& log);

/// Writes round_<k>/ with the blue and red artifacts of each round, baseline/, rounds.json.
int cmd_stackelberg(const RunConfig& config, const CommandOptions& options, std::ostream& log);

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

/// Invariant suite on the configured parameters.
std::vector<CheckResult> run_validation(const RunConfig& config);

/// Prints a pass/fail table and writes validation.json; exit code 2 on any failure.
int cmd_validate(const RunConfig& config, const CommandOptions& options, std::ostream& log);

}  // namespace shtgame::cli
