#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "shtgame/model.hpp"
#include "shtgame/red.hpp"

namespace shtgame {

/// Feedforward network t -> f_c(t): tanh hidden layers, affine output, and an optional
/// exponential output activation. The input is scaled by 1/T so it lies in [0, 1].
class MlpNetwork {
 public:
  /// `widths` = {1, hidden..., 1}.
  MlpNetwork(std::vector<int> widths, bool exp_output, double horizon);

  /// Glorot-uniform weights, zero biases.
  static MlpNetwork random(const NnSettings& settings, bool exp_output, double horizon,
                           std::uint64_t seed);
  static MlpNetwork zeros(const NnSettings& settings, bool exp_output, double horizon);

  double operator()(double t) const;
  Eigen::VectorXd forward(const Eigen::VectorXd& ts) const;

  /// Vector-Jacobian product: d/dtheta of sum_k output_grad[k] * net(ts[k]).
  Eigen::VectorXd backward(const Eigen::VectorXd& ts, const Eigen::VectorXd& output_grad) const;

  int n_parameters() const;
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& theta);

  bool exp_output() const { return exp_output_; }
  int n_layers() const { return static_cast<int>(weights_.size()); }
  Eigen::MatrixXd& weight(int layer) { return weights_[layer]; }
  Eigen::VectorXd& bias(int layer) { return biases_[layer]; }

 private:
  struct Activations {
    std::vector<Eigen::MatrixXd> layers;  ///< layers[0] is the scaled input row
    Eigen::RowVectorXd output;
  };
  Activations run(const Eigen::VectorXd& ts) const;

  std::vector<Eigen::MatrixXd> weights_;
  std::vector<Eigen::VectorXd> biases_;
  bool exp_output_;
  double input_scale_;
};

double nn_forward(const MlpNetwork& net, double t);

/// First-order moment-adaptive optimizer.
class Adam {
 public:
  explicit Adam(int n, double learning_rate, double beta1 = 0.9, double beta2 = 0.999,
                double epsilon = 1e-8);
  void step(Eigen::VectorXd& theta, const Eigen::VectorXd& gradient);

 private:
  Eigen::VectorXd m_, v_;
  double lr_, beta1_, beta2_, eps_;
  int t_ = 0;
};

struct ObjectiveTerms {
  bool log_lr = true;
  bool penalty = true;
};

struct DiscreteObjective {
  double value = 0.0;
  double expected_log_lr = 0.0;
  double penalty = 0.0;
  Eigen::VectorXd gradient;  ///< d value / d f_c at each node; empty unless requested
};

/// Red objective with both ODE systems stepped by explicit Euler on the grid, and its
/// exact gradient with respect to the node values of f_c by reverse accumulation.
DiscreteObjective euler_objective(const ValidatedParams& params, const Eigen::VectorXd& f_c,
                                  const RedConfig& config, const Grid& grid,
                                  bool with_gradient = true, ObjectiveTerms terms = {});

/// d J_red / d theta for the Euler-discretized objective.
Eigen::VectorXd nn_gradient(const MlpNetwork& net, const ValidatedParams& params,
                            const RedConfig& config, const Grid& grid, ObjectiveTerms terms = {});

OptimizationReport nn_solve(const ValidatedParams& params, const RedConfig& config,
                            const Grid& grid, std::uint64_t seed);

}  // namespace shtgame
