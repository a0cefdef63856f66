#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "shtgame/controls.hpp"
#include "shtgame/model.hpp"

namespace shtgame {

/// One Euler-Maruyama sample path. Controls are recorded at nodes 0..N-1.
struct Trajectory {
  Eigen::VectorXd times;
  Eigen::VectorXd v_path;
  Eigen::VectorXd y_path;
  Eigen::VectorXd alpha_path;
  Eigen::VectorXd beta_path;
};

struct SimulationOptions {
  /// Simulate under H0: beta is forced to zero while alpha stays optimal.
  bool null_hypothesis = false;
};

/// Per-path seed from (master seed, path index); a SplitMix64 finalizer over both.
std::uint64_t path_seed(std::uint64_t master_seed, std::uint64_t index);

Trajectory simulate_path(const FeedbackPolicy& policy, const Grid& grid, std::uint64_t seed,
                         SimulationOptions options = {});

/// Ito (left-endpoint) discretization of the log likelihood ratio of H1 against H0.
double log_likelihood_ratio(const Trajectory& traj, const Pattern& pattern,
                            const ValidatedParams& params);

/// Left-Riemann running cost plus terminal velocity penalty.
double primary_cost(const Trajectory& traj, const ValidatedParams& params);

struct McSummary {
  int n_paths = 0;
  double mean_primary_cost = 0.0;
  double mean_log_lr = 0.0;
  double mean_blue_cost = 0.0;
  double se_primary_cost = 0.0;
  double se_log_lr = 0.0;
  /// Sample mean and standard error of exp(log L_T).
  double mean_likelihood_ratio = 0.0;
  double se_likelihood_ratio = 0.0;
  std::uint64_t master_seed = 0;
};

struct McOptions {
  int n_paths = 10000;
  std::uint64_t master_seed = 0;
  int threads = 1;
  SimulationOptions simulation{};
};

/// Seeded Monte Carlo over independent paths. Per-path results are reduced in index
/// order, so the summary does not depend on `threads`.
McSummary monte_carlo(const FeedbackPolicy& policy, const Pattern& pattern, const Grid& grid,
                      const McOptions& options);

/// Sample second moments E[V^2], E[VY], E[Y^2] at selected nodes.
struct MomentSample {
  std::vector<int> nodes;
  Eigen::MatrixX3d mean;  ///< row i: (h20, h11, h02) at nodes[i]
  Eigen::MatrixX3d se;
};

MomentSample monte_carlo_moments(const FeedbackPolicy& policy, const Grid& grid,
                                 const std::vector<int>& nodes, const McOptions& options);

}  // namespace shtgame
