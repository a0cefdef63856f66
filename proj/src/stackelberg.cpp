#include "shtgame/stackelberg.hpp"

#include "shtgame/moments.hpp"

namespace shtgame {

bool is_simplified_model(const ModelParams& params, const Pattern& pattern) {
  return pattern.f_d.is_zero() && params.vbar.is_zero() && params.vbar_T == 0.0;
}

BlueOutcome evaluate_blue(const ValidatedParams& params, const Pattern& pattern,
                          const Grid& grid, const McOptions& mc, int n_sample_paths) {
  if (n_sample_paths < 0) throw Error(ErrorCode::InvalidArgument, "n_sample_paths must be >= 0");
  BlueOutcome out{FeedbackPolicy::solve(params, pattern, grid), {}, std::nullopt, {}};
  out.mc = monte_carlo(out.policy, pattern, grid, mc);
  if (is_simplified_model(params, pattern)) {
    const ValueCoeffs& coeffs = out.policy.coeffs();
    const MomentCurves moments = solve_moments(params, coeffs, pattern.f_c, grid);
    out.expected_log_lr_moment = expected_log_lr(params, coeffs, pattern.f_c, moments, grid);
  }
  for (int i = 0; i < n_sample_paths; ++i) {
    out.sample_trajectories.push_back(
        simulate_path(out.policy, grid, path_seed(mc.master_seed, i), mc.simulation));
  }
  return out;
}

std::vector<RoundRecord> play_rounds(const ValidatedParams& params, const TimeFunction& initial_f_c,
                                     const RedConfig& red_config, const Grid& grid,
                                     const StackelbergOptions& options) {
  if (options.n_rounds < 1) throw Error(ErrorCode::InvalidArgument, "n_rounds must be >= 1");
  if (!is_simplified_model(params, Pattern{initial_f_c, TimeFunction::constant(0.0)})) {
    throw Error(ErrorCode::Unsupported, "the game requires vbar = vbar_T = 0");
  }
  std::vector<RoundRecord> rounds;
  TimeFunction f_c = initial_f_c;
  for (int r = 0; r < options.n_rounds; ++r) {
    BlueOutcome blue = evaluate_blue(params, Pattern{f_c, TimeFunction::constant(0.0)}, grid,
                                     options.mc, options.n_sample_paths);
    RoundRecord record{r + 1,
                       f_c,
                       blue.policy.coeffs(),
                       blue.mc,
                       *blue.expected_log_lr_moment,
                       std::move(blue.sample_trajectories),
                       {}};

    RedConfig config = red_config;
    config.f_c_initial = f_c;
    record.red = optimize_pattern(params, config, grid, options.mc.master_seed);
    f_c = record.red.f_c;
    rounds.push_back(std::move(record));
  }
  return rounds;
}

}  // namespace shtgame
