#include "shtgame/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "shtgame/cli/output.hpp"
#include "shtgame/moments.hpp"
#include "shtgame/stackelberg.hpp"

namespace shtgame::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

McOptions mc_options(const RunConfig& c) {
  McOptions mc;
  mc.n_paths = c.mc_paths;
  mc.master_seed = c.seed;
  mc.threads = c.threads;
  return mc;
}

Series path_series(const std::string& label, const Trajectory& tr, const Eigen::VectorXd& y) {
  return {label, tr.times.head(y.size()), y};
}

void write_blue_artifacts(const fs::path& dir, const ValueCoeffs& coeffs, const McSummary& mc,
                          std::optional<double> moment, const std::vector<Trajectory>& paths,
                          bool plots) {
  write_file(dir / "coeffs.csv", coeffs_csv(coeffs));
  write_file(dir / "trajectories.csv", trajectories_csv(paths));
  write_json(dir / "mc_summary.json", mc_summary_json(mc, moment));
  if (!plots) return;
  struct Panel {
    const char* file;
    const char* name;
    const Eigen::VectorXd Trajectory::*member;
  };
  const Panel panels[] = {{"v.svg", "V", &Trajectory::v_path},
                          {"y.svg", "Y", &Trajectory::y_path},
                          {"alpha.svg", "alpha", &Trajectory::alpha_path},
                          {"beta.svg", "beta", &Trajectory::beta_path}};
  for (const Panel& p : panels) {
    std::vector<Series> series;
    for (std::size_t i = 0; i < paths.size(); ++i) {
      series.push_back(path_series("path " + std::to_string(i), paths[i], paths[i].*(p.member)));
    }
    write_file(dir / p.file, svg_line_plot(p.name, "t", p.name, series));
  }
}

void write_red_artifacts(const fs::path& dir, const OptimizationReport& report,
                         const RedConfig& config, const Grid& grid, bool plots) {
  const Eigen::VectorXd ts = grid.times();
  const Eigen::VectorXd fc = report.f_c.on_grid(grid);
  write_file(dir / "fc_optimized.csv", fc_csv(ts, fc));
  write_json(dir / "report.json", report_json(report, config));
  if (plots) {
    write_file(dir / "fc.svg",
               svg_line_plot("f_c", "t", "f_c",
                             {{"initial", ts, config.f_c_initial.on_grid(grid)}, {"optimized", ts, fc}}));
  }
}

void print_summary(std::ostream& log, const McSummary& mc, std::optional<double> moment) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "J_primary = %.6g (se %.2g), E log L (MC) = %.6g (se %.2g)",
                mc.mean_primary_cost, mc.se_primary_cost, mc.mean_log_lr, mc.se_log_lr);
  log << buf;
  if (moment) {
    std::snprintf(buf, sizeof buf, ", E log L (ODE) = %.6g", *moment);
    log << buf;
  }
  log << '\n';
}

}  // namespace

int cmd_blue_solve(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
  const ValidatedParams params = validate_params(config.model);
  const Grid grid = make_grid(config);
  const BlueOutcome blue = evaluate_blue(params, config.pattern, grid, mc_options(config),
                                         config.sample_paths);
  write_blue_artifacts(options.out, blue.policy.coeffs(), blue.mc, blue.expected_log_lr_moment,
                       blue.sample_trajectories, options.plots);
  print_summary(log, blue.mc, blue.expected_log_lr_moment);
  return exit_code::ok;
}

int cmd_red_optimize(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
  const ValidatedParams params = validate_params(config.model);
  if (!is_simplified_model(config.model, config.pattern)) {
    throw Error(ErrorCode::Unsupported, "red-optimize needs f_d = vbar = vbar_T = 0");
  }
  const Grid grid = make_grid(config);
  const OptimizationReport report = optimize_pattern(params, config.red, grid, config.seed);
  write_red_artifacts(options.out, report, config.red, grid, options.plots);
  log << to_string(report.solver) << ' ' << to_string(report.penalty) << ": E log L = "
      << report.final_expected_log_lr << ", iterations = " << report.iterations
      << (report.converged ? "" : " (not converged)") << '\n';
  return exit_code::ok;
}

int cmd_stackelberg(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
  const ValidatedParams params = validate_params(config.model);
  const Grid grid = make_grid(config);
  StackelbergOptions game;
  game.n_rounds = config.n_rounds;
  game.mc = mc_options(config);
  game.n_sample_paths = config.sample_paths;

  const Pattern zero{TimeFunction::constant(0.0), TimeFunction::constant(0.0)};
  const BlueOutcome baseline = evaluate_blue(params, zero, grid, game.mc, config.sample_paths);
  const std::vector<RoundRecord> rounds =
      play_rounds(params, config.pattern.f_c, config.red, grid, game);

  write_blue_artifacts(options.out / "baseline", baseline.policy.coeffs(), baseline.mc,
                       baseline.expected_log_lr_moment, baseline.sample_trajectories, options.plots);
  json doc;
  doc["baseline"] = mc_summary_json(baseline.mc, baseline.expected_log_lr_moment);
  doc["rounds"] = json::array();
  const Eigen::VectorXd ts = grid.times();
  std::vector<Series> fc_series;
  Eigen::VectorXd idx(rounds.size()), j_round(rounds.size()), e_round(rounds.size());
  for (std::size_t r = 0; r < rounds.size(); ++r) {
    const RoundRecord& rec = rounds[r];
    const fs::path dir = options.out / ("round_" + std::to_string(rec.round_index));
    RedConfig red = config.red;
    red.f_c_initial = rec.f_c_used;
    write_blue_artifacts(dir, rec.coeffs, rec.mc, rec.expected_log_lr_moment,
                         rec.sample_trajectories, options.plots);
    write_red_artifacts(dir, rec.red, red, grid, options.plots);

    const Eigen::VectorXd fc = rec.f_c_used.on_grid(grid);
    json jr = mc_summary_json(rec.mc, rec.expected_log_lr_moment);
    jr["round"] = rec.round_index;
    jr["f_c"] = std::vector<double>(fc.begin(), fc.end());
    jr["red_expected_log_lr"] = rec.red.final_expected_log_lr;
    jr["red_converged"] = rec.red.converged;
    doc["rounds"].push_back(std::move(jr));

    fc_series.push_back({"round " + std::to_string(rec.round_index), ts, fc});
    idx[r] = rec.round_index;
    j_round[r] = rec.mc.mean_primary_cost;
    e_round[r] = rec.expected_log_lr_moment;
    log << "round " << rec.round_index << ": ";
    print_summary(log, rec.mc, rec.expected_log_lr_moment);
  }
  write_json(options.out / "rounds.json", doc);
  log << "baseline: ";
  print_summary(log, baseline.mc, baseline.expected_log_lr_moment);

  if (options.plots) {
    fc_series.push_back({"baseline", ts, Eigen::VectorXd::Zero(ts.size())});
    write_file(options.out / "fc_rounds.svg", svg_line_plot("f_c per round", "t", "f_c", fc_series));
    const Eigen::VectorXd j_base = Eigen::VectorXd::Constant(idx.size(), baseline.mc.mean_primary_cost);
    write_file(options.out / "primary_cost.svg",
               svg_line_plot("J primary", "round", "J", {{"rounds", idx, j_round}, {"baseline", idx, j_base}}));
    write_file(options.out / "expected_log_lr.svg",
               svg_line_plot("E log L", "round", "E log L",
                             {{"rounds", idx, e_round}, {"baseline", idx, Eigen::VectorXd::Zero(idx.size())}}));
  }
  return exit_code::ok;
}

namespace {

double max_abs_misdirection_coeffs(const ValueCoeffs& c) {
  return std::max({c.eta.cwiseAbs().maxCoeff(), c.rho.cwiseAbs().maxCoeff(),
                   c.theta.cwiseAbs().maxCoeff()});
}

// Scales the pattern so the mean quadratic variation of the log likelihood ratio under H0
// is at most 1/2; otherwise the ratio is too heavy-tailed for a sample mean.
Pattern moderate_pattern(const ValidatedParams& params, const Pattern& pattern, const Grid& grid,
                         const McOptions& null_mc) {
  const FeedbackPolicy pilot = FeedbackPolicy::solve(params, pattern, grid);
  const Eigen::VectorXd fc = pattern.f_c.on_grid(grid);
  const Eigen::VectorXd fd = pattern.f_d.on_grid(grid);
  const double s2 = params->sigma_W * params->sigma_W;
  const int n_pilot = 200;
  double qv = 0.0;
  for (int i = 0; i < n_pilot; ++i) {
    const Trajectory tr = simulate_path(pilot, grid, path_seed(null_mc.master_seed, i), null_mc.simulation);
    for (int k = 0; k < grid.n_steps(); ++k) {
      const double u = fc[k] * tr.y_path[k] + fd[k];
      qv += u * u * grid.step() / s2;
    }
  }
  qv /= n_pilot;
  if (qv <= 0.5) return pattern;
  const double scale = std::sqrt(0.5 / qv);
  return {TimeFunction::sampled(scale * fc, grid.horizon()),
          TimeFunction::sampled(scale * fd, grid.horizon())};
}

CheckResult at_most(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value <= threshold};
}

}  // namespace

std::vector<CheckResult> run_validation(const RunConfig& config) {
  const ValidatedParams params = validate_params(config.model);
  const ModelParams& p = params.get();
  const Grid grid = make_grid(config);
  McOptions mc = mc_options(config);
  std::vector<CheckResult> out;

  {
    ModelParams q = p;
    q.lambda = 0.0;
    const ValueCoeffs c = solve_value_coeffs(validate_params(q), config.pattern, grid);
    out.push_back(at_most("zero_intensity_misdirection", max_abs_misdirection_coeffs(c), 1e-8));
    const Pattern zero{TimeFunction::constant(0.0), TimeFunction::constant(0.0)};
    const ValueCoeffs z = solve_value_coeffs(params, zero, grid);
    out.push_back(at_most("zero_pattern_misdirection", max_abs_misdirection_coeffs(z), 1e-8));
  }
  {
    ModelParams q = p;
    q.lambda = p.lambda_max();
    const FeedbackPolicy policy = FeedbackPolicy::solve(validate_params(q), config.pattern, grid);
    const Eigen::VectorXd fc = config.pattern.f_c.on_grid(grid);
    const Eigen::VectorXd fd = config.pattern.f_d.on_grid(grid);
    double worst = 0.0;
    for (int k = 0; k < grid.n_nodes(); ++k) {
      const AffineFeedback b = policy.beta_at_node(k);
      worst = std::max({worst, std::abs(b.v_coeff), std::abs(b.y_coeff - fc[k]),
                        std::abs(b.offset - fd[k])});
    }
    out.push_back(at_most("decoupling_full_intensity", worst, 1e-8));
  }
  {
    const ValueCoeffs coarse = solve_value_coeffs(params, config.pattern, grid);
    const Grid fine_grid(grid.horizon(), 2 * grid.n_steps());
    const ValueCoeffs fine = solve_value_coeffs(params, config.pattern, fine_grid);
    double worst = 0.0;
    const Eigen::VectorXd* cc[] = {&coarse.mu, &coarse.eta, &coarse.rho, &coarse.gamma, &coarse.theta, &coarse.xi};
    const Eigen::VectorXd* ff[] = {&fine.mu, &fine.eta, &fine.rho, &fine.gamma, &fine.theta, &fine.xi};
    for (int i = 0; i < 6; ++i) {
      for (int k = 0; k < grid.n_nodes(); ++k) {
        worst = std::max(worst, std::abs((*cc[i])[k] - (*ff[i])[2 * k]));
      }
    }
    out.push_back(at_most("step_halving", worst, 1e-6));
  }
  {
    McOptions null_mc = mc;
    null_mc.simulation.null_hypothesis = true;
    const Pattern pattern = moderate_pattern(params, config.pattern, grid, null_mc);
    const FeedbackPolicy policy = FeedbackPolicy::solve(params, pattern, grid);
    const McSummary s = monte_carlo(policy, pattern, grid, null_mc);
    out.push_back(at_most("martingale_normalization", std::abs(s.mean_likelihood_ratio - 1.0),
                          3.0 * s.se_likelihood_ratio));
  }
  {
    ModelParams q = p;
    q.vbar = TimeFunction::constant(0.0);
    q.vbar_T = 0.0;
    const ValidatedParams vq = validate_params(q);
    const Pattern pattern{config.pattern.f_c, TimeFunction::constant(0.0)};
    const FeedbackPolicy policy = FeedbackPolicy::solve(vq, pattern, grid);
    const MomentCurves moments = solve_moments(vq, policy.coeffs(), pattern.f_c, grid);
    const double ode = expected_log_lr(vq, policy.coeffs(), pattern.f_c, moments, grid);
    const McSummary s = monte_carlo(policy, pattern, grid, mc);
    out.push_back(at_most("log_lr_cross_oracle", std::abs(s.mean_log_lr - ode), 3.0 * s.se_log_lr));

    std::vector<int> nodes;
    for (int i = 1; i <= 5; ++i) nodes.push_back(i * grid.n_steps() / 5);
    const MomentSample ms = monte_carlo_moments(policy, grid, nodes, mc);
    double worst = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const int k = nodes[i];
      const Eigen::Vector3d curve(moments.h20[k], moments.h11[k], moments.h02[k]);
      for (int j = 0; j < 3; ++j) {
        const double se = ms.se(static_cast<Eigen::Index>(i), j);
        const double z = se > 0.0 ? std::abs(ms.mean(static_cast<Eigen::Index>(i), j) - curve[j]) / se : 0.0;
        worst = std::max(worst, z);
      }
    }
    out.push_back(at_most("moment_cross_oracle_z", worst, 3.0));

    ModelParams r = q;
    if (!(r.lambda > 0.5 * r.lambda_max())) r.lambda = 0.75 * r.lambda_max();
    const ValidatedParams vr = validate_params(r);
    RedConfig red = config.red;
    red.lambda_reg = 0.0;
    red.penalty = PenaltyKind::Quadratic;
    Eigen::VectorXd f = Eigen::VectorXd::Zero(grid.n_nodes());
    const double step = 1e-4;
    double worst_grad = 0.0;
    for (int k = 0; k < grid.n_nodes(); ++k) {
      f[k] = step;
      const double up = red_objective(vr, f, red, grid);
      f[k] = -step;
      const double down = red_objective(vr, f, red, grid);
      f[k] = 0.0;
      worst_grad = std::max(worst_grad, std::abs(up - down) / (2.0 * step));
    }
    out.push_back(at_most("zero_pattern_gradient", worst_grad, 1e-4));
  }
  return out;
}

int cmd_validate(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
  const std::vector<CheckResult> checks = run_validation(config);
  json doc = json::array();
  bool all = true;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-28s %14s %14s  %s\n", "check", "value", "threshold", "result");
  log << buf;
  for (const CheckResult& c : checks) {
    std::snprintf(buf, sizeof buf, "%-28s %14.6g %14.6g  %s\n", c.name.c_str(), c.value, c.threshold,
                  c.passed ? "PASS" : "FAIL");
    log << buf;
    all = all && c.passed;
    doc.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"passed", c.passed}});
  }
  write_json(options.out / "validation.json", doc);
  return all ? exit_code::ok : exit_code::numeric;
}

}  // namespace shtgame::cli
