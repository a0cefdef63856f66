#include "shtgame/sde.hpp"

#include <cmath>
#include <random>

#include "shtgame/parallel.hpp"

namespace shtgame {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

// Two-pass, index-ordered.
MeanSe mean_and_se(const std::vector<double>& xs) {
  const auto n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = xs.size() > 1 ? ss / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw Error(ErrorCode::GridMismatch, "policy and simulation grids differ");
}

void require_path_on_grid(const Trajectory& traj, const Grid& grid) {
  if (traj.v_path.size() != grid.n_nodes() || traj.y_path.size() != grid.n_nodes() ||
      traj.alpha_path.size() != grid.n_steps() || traj.beta_path.size() != grid.n_steps()) {
    throw Error(ErrorCode::GridMismatch, "trajectory length differs from grid");
  }
}

}  // namespace

std::uint64_t path_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

Trajectory simulate_path(const FeedbackPolicy& policy, const Grid& grid, std::uint64_t seed,
                         SimulationOptions options) {
  require_same_grid(policy.grid(), grid);
  const ModelParams& p = policy.params();
  const int n = grid.n_steps();
  const double h = grid.step();
  const double sqrt_h = std::sqrt(h);

  Trajectory traj;
  traj.times = grid.times();
  traj.v_path.resize(n + 1);
  traj.y_path.resize(n + 1);
  traj.alpha_path.resize(n);
  traj.beta_path.resize(n);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  double v = p.v0;
  double y = p.y0;
  traj.v_path[0] = v;
  traj.y_path[0] = y;
  for (int k = 0; k < n; ++k) {
    const double alpha = policy.alpha_at_node(k)(v, y);
    const double beta = options.null_hypothesis ? 0.0 : policy.beta_at_node(k)(v, y);
    const double dB = normal(rng);
    const double dW = normal(rng);
    const double v_next = v + alpha * h + p.sigma_B * sqrt_h * dB;
    const double y_next = y + (v + beta) * h + p.sigma_W * sqrt_h * dW;
    traj.alpha_path[k] = alpha;
    traj.beta_path[k] = beta;
    v = v_next;
    y = y_next;
    traj.v_path[k + 1] = v;
    traj.y_path[k + 1] = y;
  }
  if (!traj.v_path.allFinite() || !traj.y_path.allFinite() || !traj.alpha_path.allFinite() ||
      !traj.beta_path.allFinite()) {
    throw Error(ErrorCode::NonFiniteState, "sample path overflowed");
  }
  return traj;
}

double log_likelihood_ratio(const Trajectory& traj, const Pattern& pattern,
                            const ValidatedParams& params) {
  const ModelParams& p = params.get();
  const auto n_steps = static_cast<int>(traj.alpha_path.size());
  if (n_steps < 2) throw Error(ErrorCode::GridMismatch, "trajectory too short");
  const Grid grid(p.horizon, n_steps);
  require_path_on_grid(traj, grid);
  if (pattern.is_zero()) return 0.0;

  const double h = grid.step();
  const Eigen::VectorXd fc = pattern.f_c.on_grid(grid);
  const Eigen::VectorXd fd = pattern.f_d.on_grid(grid);
  double ito = 0.0, drift = 0.0, quad = 0.0;
  for (int k = 0; k < n_steps; ++k) {
    const double z = fc[k] * traj.y_path[k] + fd[k];
    ito += z * (traj.y_path[k + 1] - traj.y_path[k]);
    drift += traj.v_path[k] * z * h;
    quad += z * z * h;
  }
  return (ito - drift - 0.5 * quad) / (p.sigma_W * p.sigma_W);
}

double primary_cost(const Trajectory& traj, const ValidatedParams& params) {
  const ModelParams& p = params.get();
  const auto n_steps = static_cast<int>(traj.alpha_path.size());
  if (n_steps < 2) throw Error(ErrorCode::GridMismatch, "trajectory too short");
  const Grid grid(p.horizon, n_steps);
  require_path_on_grid(traj, grid);

  const double h = grid.step();
  double running = 0.0;
  for (int k = 0; k < n_steps; ++k) {
    const double a = traj.alpha_path[k];
    const double b = traj.beta_path[k];
    const double dv = traj.v_path[k] - p.vbar(grid.time(k));
    running += (0.5 * p.r_alpha * a * a + 0.5 * p.r_beta * b * b + 0.5 * p.r_v * dv * dv) * h;
  }
  const double dT = traj.v_path[n_steps] - p.vbar_T;
  return running + 0.5 * p.t_v * dT * dT;
}

McSummary monte_carlo(const FeedbackPolicy& policy, const Pattern& pattern, const Grid& grid,
                      const McOptions& options) {
  if (options.n_paths < 2) throw Error(ErrorCode::InvalidArgument, "n_paths must be at least 2");
  require_same_grid(policy.grid(), grid);
  const ValidatedParams& params = policy.validated();

  std::vector<double> costs(options.n_paths), log_lrs(options.n_paths), lrs(options.n_paths);
  detail::parallel_for(options.n_paths, options.threads, [&](int i) {
    const Trajectory traj =
        simulate_path(policy, grid, path_seed(options.master_seed, i), options.simulation);
    costs[i] = primary_cost(traj, params);
    log_lrs[i] = log_likelihood_ratio(traj, pattern, params);
    lrs[i] = std::exp(log_lrs[i]);
  });

  const MeanSe cost = mean_and_se(costs);
  const MeanSe log_lr = mean_and_se(log_lrs);
  const MeanSe lr = mean_and_se(lrs);
  McSummary out;
  out.n_paths = options.n_paths;
  out.mean_primary_cost = cost.mean;
  out.se_primary_cost = cost.se;
  out.mean_log_lr = log_lr.mean;
  out.se_log_lr = log_lr.se;
  out.mean_blue_cost = cost.mean - params->lambda * log_lr.mean;
  out.mean_likelihood_ratio = lr.mean;
  out.se_likelihood_ratio = lr.se;
  out.master_seed = options.master_seed;
  return out;
}

MomentSample monte_carlo_moments(const FeedbackPolicy& policy, const Grid& grid,
                                 const std::vector<int>& nodes, const McOptions& options) {
  if (options.n_paths < 2) throw Error(ErrorCode::InvalidArgument, "n_paths must be at least 2");
  require_same_grid(policy.grid(), grid);
  for (int node : nodes) {
    if (node < 0 || node > grid.n_steps()) throw Error(ErrorCode::OutOfDomain, "node out of range");
  }
  const auto m = static_cast<int>(nodes.size());
  // samples[j][i]: statistic j (3 per node) on path i
  std::vector<std::vector<double>> samples(3 * m, std::vector<double>(options.n_paths));
  detail::parallel_for(options.n_paths, options.threads, [&](int i) {
    const Trajectory traj =
        simulate_path(policy, grid, path_seed(options.master_seed, i), options.simulation);
    for (int j = 0; j < m; ++j) {
      const double v = traj.v_path[nodes[j]];
      const double y = traj.y_path[nodes[j]];
      samples[3 * j][i] = v * v;
      samples[3 * j + 1][i] = v * y;
      samples[3 * j + 2][i] = y * y;
    }
  });
  MomentSample out{nodes, Eigen::MatrixX3d(m, 3), Eigen::MatrixX3d(m, 3)};
  for (int j = 0; j < m; ++j) {
    for (int c = 0; c < 3; ++c) {
      const MeanSe s = mean_and_se(samples[3 * j + c]);
      out.mean(j, c) = s.mean;
      out.se(j, c) = s.se;
    }
  }
  return out;
}

}  // namespace shtgame
