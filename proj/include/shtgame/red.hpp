#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string_view>
#include <vector>

#include "shtgame/model.hpp"
#include "shtgame/moments.hpp"

namespace shtgame {

enum class PenaltyKind { Quadratic, Logarithmic };
enum class SolverKind { Fpi, Fbs, Nn };

std::string_view to_string(PenaltyKind kind);
std::string_view to_string(SolverKind kind);

struct NnSettings {
  int hidden_width = 32;
  int hidden_layers = 3;
  int epochs = 500;
  double learning_rate = 1e-3;
};

/// The red team's regularized pattern optimization problem
///   J_red(f_c) = E[log L_T] + (lambda_reg / sigma_W^2) P(f_c),
/// with P a quadratic or logarithmic proximity penalty around `f_c_initial`.
struct RedConfig {
  double lambda_reg = 1.0;
  PenaltyKind penalty = PenaltyKind::Quadratic;
  TimeFunction f_c_initial = TimeFunction::constant(1.0);
  SolverKind solver = SolverKind::Fpi;
  double tolerance = 1e-3;
  int max_iters = 200;
  double fbs_relaxation = 0.5;
  NnSettings nn{};
};

/// Throws InvalidArgument / NonPositiveFc for inconsistent settings.
void validate_red_config(const RedConfig& config, const Grid& grid);

struct OptimizationReport {
  SolverKind solver = SolverKind::Fpi;
  PenaltyKind penalty = PenaltyKind::Quadratic;
  TimeFunction f_c;  ///< grid-sampled optimizer output
  std::vector<double> objective_history;
  int iterations = 0;
  bool converged = false;
  double final_expected_log_lr = 0.0;
  double final_penalty = 0.0;
  /// final_expected_log_lr + lambda_reg / sigma_W^2 * final_penalty
  double final_objective = 0.0;
};

/// Trapezoid quadrature of the proximity penalty for grid values `f_c`.
double penalty(const Eigen::VectorXd& f_c, const RedConfig& config, const Grid& grid);

/// States of the red problem for one pattern, solved with RK4.
struct RedEvaluation {
  Eigen::MatrixX3d core;  ///< (mu, eta, rho) per node
  MomentCurves moments;
  double expected_log_lr = 0.0;
  double penalty = 0.0;
  double objective = 0.0;
  /// eta h11 / r_beta + rho h02 / r_beta per node; vanishes identically at f_c = 0.
  Eigen::VectorXd misdirection_gain;
};

RedEvaluation evaluate_red(const ValidatedParams& params, const Eigen::VectorXd& f_c,
                           const RedConfig& config, const Grid& grid);

double red_objective(const ValidatedParams& params, const Eigen::VectorXd& f_c,
                     const RedConfig& config, const Grid& grid);

/// Pointwise minimizer of the red integrand with states frozen, at time t.
double fpi_update(double t, double eta, double rho, double h11, double h02,
                  const ValidatedParams& params, const RedConfig& config);

OptimizationReport fpi_solve(const ValidatedParams& params, const RedConfig& config,
                             const Grid& grid);

/// Costates of (mu, eta, rho, h20, h11, h02); column i holds psi_{i+1}.
struct AdjointState {
  Eigen::Matrix<double, Eigen::Dynamic, 6> psi;
};

/// Solves the costate equations psi' = -dH/dx. The moment costates (psi_4..psi_6)
/// vanish at T; the coefficient costates (psi_1..psi_3) vanish at t = 0, because the
/// coefficient states are pinned at T and free at 0.
AdjointState solve_adjoint(const ValidatedParams& params, const RedConfig& config,
                           const Eigen::VectorXd& f_c, const RedEvaluation& states,
                           const Grid& grid);

/// dH/df_c at every node. Equals sigma_W^2 times the L2 gradient of J_red.
Eigen::VectorXd hamiltonian_gradient(const ValidatedParams& params, const RedConfig& config,
                                     const Eigen::VectorXd& f_c, const RedEvaluation& states,
                                     const AdjointState& adjoint, const Grid& grid);

/// Nodewise Hamiltonian minimizer given states and costates.
Eigen::VectorXd fbs_control_update(const ValidatedParams& params, const RedConfig& config,
                                   const RedEvaluation& states, const AdjointState& adjoint,
                                   const Grid& grid);

OptimizationReport fbs_solve(const ValidatedParams& params, const RedConfig& config,
                             const Grid& grid);

/// Dispatches on `config.solver`; `seed` only matters for the network solver.
OptimizationReport optimize_pattern(const ValidatedParams& params, const RedConfig& config,
                                    const Grid& grid, std::uint64_t seed);

}  // namespace shtgame
