#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "shtgame/controls.hpp"
#include "shtgame/red.hpp"
#include "shtgame/sde.hpp"

namespace shtgame {

/// Blue-side metrics for one pattern: Monte Carlo summary, closed-form E log L and a few
/// sample paths. Sample path i is the Monte Carlo path with index i.
struct BlueOutcome {
  FeedbackPolicy policy;
  McSummary mc;
  /// Only available in the simplified model (f_d = vbar = vbar_T = 0).
  std::optional<double> expected_log_lr_moment;
  std::vector<Trajectory> sample_trajectories;
};

/// True when the moment equations apply: f_d, vbar and vbar_T all vanish.
bool is_simplified_model(const ModelParams& params, const Pattern& pattern);

/// Solves the blue problem for `pattern` and evaluates it.
BlueOutcome evaluate_blue(const ValidatedParams& params, const Pattern& pattern,
                          const Grid& grid, const McOptions& mc, int n_sample_paths);

struct RoundRecord {
  int round_index = 0;
  TimeFunction f_c_used;
  ValueCoeffs coeffs;
  McSummary mc;
  double expected_log_lr_moment = 0.0;
  std::vector<Trajectory> sample_trajectories;
  /// Red move made after this round; its f_c is the next round's f_c_used.
  OptimizationReport red;
};

struct StackelbergOptions {
  int n_rounds = 3;
  McOptions mc{};
  int n_sample_paths = 3;
};

/// Leader-follower loop in the simplified model; other parameter sets raise Unsupported. Every round reuses `options.mc.master_seed` for both the Monte
/// Carlo paths and the red solver, so a round matches a standalone blue solve followed by
/// a standalone red optimization with that seed.
std::vector<RoundRecord> play_rounds(const ValidatedParams& params, const TimeFunction& initial_f_c,
                                     const RedConfig& red_config, const Grid& grid,
                                     const StackelbergOptions& options);

}  // namespace shtgame
