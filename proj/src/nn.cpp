#include "shtgame/nn.hpp"

#include <cmath>
#include <random>

#include "shtgame/riccati.hpp"
#include "shtgame/sensitivities.hpp"

namespace shtgame {

MlpNetwork::MlpNetwork(std::vector<int> widths, bool exp_output, double horizon)
    : exp_output_(exp_output), input_scale_(1.0 / horizon) {
  if (widths.size() < 2 || widths.front() != 1 || widths.back() != 1) {
    throw Error(ErrorCode::InvalidArgument, "network maps a scalar to a scalar");
  }
  if (!(horizon > 0.0)) throw Error(ErrorCode::NonPositiveHorizon, "network horizon must be positive");
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    weights_.push_back(Eigen::MatrixXd::Zero(widths[l + 1], widths[l]));
    biases_.push_back(Eigen::VectorXd::Zero(widths[l + 1]));
  }
}

namespace {

std::vector<int> layer_widths(const NnSettings& s) {
  std::vector<int> widths{1};
  for (int l = 0; l < s.hidden_layers; ++l) widths.push_back(s.hidden_width);
  widths.push_back(1);
  return widths;
}

}  // namespace

MlpNetwork MlpNetwork::zeros(const NnSettings& settings, bool exp_output, double horizon) {
  return MlpNetwork(layer_widths(settings), exp_output, horizon);
}

MlpNetwork MlpNetwork::random(const NnSettings& settings, bool exp_output, double horizon,
                              std::uint64_t seed) {
  MlpNetwork net = zeros(settings, exp_output, horizon);
  std::mt19937_64 rng(seed);
  for (auto& w : net.weights_) {
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = dist(rng);
    }
  }
  return net;
}

MlpNetwork::Activations MlpNetwork::run(const Eigen::VectorXd& ts) const {
  Activations act;
  act.layers.reserve(weights_.size());
  act.layers.emplace_back(input_scale_ * ts.transpose());
  const std::size_t last = weights_.size() - 1;
  for (std::size_t l = 0; l < last; ++l) {
    Eigen::MatrixXd z = weights_[l] * act.layers.back();
    z.colwise() += biases_[l];
    act.layers.emplace_back(z.array().tanh().matrix());
  }
  Eigen::MatrixXd z = weights_[last] * act.layers.back();
  z.colwise() += biases_[last];
  act.output = z.row(0);
  if (exp_output_) act.output = act.output.array().exp().matrix();
  return act;
}

double MlpNetwork::operator()(double t) const {
  Eigen::VectorXd ts(1);
  ts[0] = t;
  return run(ts).output[0];
}

Eigen::VectorXd MlpNetwork::forward(const Eigen::VectorXd& ts) const {
  return run(ts).output.transpose();
}

Eigen::VectorXd MlpNetwork::backward(const Eigen::VectorXd& ts,
                                     const Eigen::VectorXd& output_grad) const {
  if (output_grad.size() != ts.size()) {
    throw Error(ErrorCode::DimensionMismatch, "output gradient length differs from inputs");
  }
  const Activations act = run(ts);
  std::vector<Eigen::MatrixXd> d_weights(weights_.size());
  std::vector<Eigen::VectorXd> d_biases(biases_.size());

  Eigen::MatrixXd dz = output_grad.transpose();
  if (exp_output_) dz = dz.cwiseProduct(act.output);
  for (int l = n_layers() - 1; l >= 0; --l) {
    const Eigen::MatrixXd& input = act.layers[l];
    d_weights[l] = dz * input.transpose();
    d_biases[l] = dz.rowwise().sum();
    if (l > 0) {
      const Eigen::MatrixXd da = weights_[l].transpose() * dz;
      dz = da.array() * (1.0 - input.array().square());
    }
  }

  Eigen::VectorXd grad(n_parameters());
  Eigen::Index offset = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    grad.segment(offset, d_weights[l].size()) = d_weights[l].reshaped();
    offset += d_weights[l].size();
    grad.segment(offset, d_biases[l].size()) = d_biases[l];
    offset += d_biases[l].size();
  }
  return grad;
}

int MlpNetwork::n_parameters() const {
  Eigen::Index n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) n += weights_[l].size() + biases_[l].size();
  return static_cast<int>(n);
}

Eigen::VectorXd MlpNetwork::parameters() const {
  Eigen::VectorXd theta(n_parameters());
  Eigen::Index offset = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    theta.segment(offset, weights_[l].size()) = weights_[l].reshaped();
    offset += weights_[l].size();
    theta.segment(offset, biases_[l].size()) = biases_[l];
    offset += biases_[l].size();
  }
  return theta;
}

void MlpNetwork::set_parameters(const Eigen::VectorXd& theta) {
  if (theta.size() != n_parameters()) {
    throw Error(ErrorCode::DimensionMismatch, "parameter vector has the wrong length");
  }
  Eigen::Index offset = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    weights_[l].reshaped() = theta.segment(offset, weights_[l].size());
    offset += weights_[l].size();
    biases_[l] = theta.segment(offset, biases_[l].size());
    offset += biases_[l].size();
  }
}

double nn_forward(const MlpNetwork& net, double t) { return net(t); }

Adam::Adam(int n, double learning_rate, double beta1, double beta2, double epsilon)
    : m_(Eigen::VectorXd::Zero(n)),
      v_(Eigen::VectorXd::Zero(n)),
      lr_(learning_rate),
      beta1_(beta1),
      beta2_(beta2),
      eps_(epsilon) {}

void Adam::step(Eigen::VectorXd& theta, const Eigen::VectorXd& gradient) {
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * gradient;
  v_ = beta2_ * v_ + (1.0 - beta2_) * gradient.cwiseProduct(gradient);
  const double m_scale = 1.0 / (1.0 - std::pow(beta1_, t_));
  const double v_scale = 1.0 / (1.0 - std::pow(beta2_, t_));
  theta.array() -= lr_ * (m_scale * m_.array()) / ((v_scale * v_.array()).sqrt() + eps_);
}

DiscreteObjective euler_objective(const ValidatedParams& params, const Eigen::VectorXd& fc,
                                  const RedConfig& config, const Grid& grid, bool with_gradient,
                                  ObjectiveTerms terms) {
  if (fc.size() != grid.n_nodes()) throw Error(ErrorCode::GridMismatch, "f_c length differs from grid");
  const ModelParams& p = params.get();
  const int n = grid.n_steps();
  const double h = grid.step();
  const double inv_s2 = 1.0 / (p.sigma_W * p.sigma_W);
  const Eigen::VectorXd w = grid.trapezoid_weights();

  // Coefficients, explicit Euler from T down to 0.
  Eigen::MatrixX3d core(n + 1, 3);
  core.row(n) << p.t_v, 0.0, 0.0;
  for (int k = n - 1; k >= 0; --k) {
    const Eigen::Vector3d next = core.row(k + 1).transpose();
    core.row(k) = (next - h * riccati_core_rhs(p, next, fc[k + 1])).transpose();
  }
  // Moments, explicit Euler from 0 up to T.
  Eigen::MatrixX3d mom(n + 1, 3);
  mom.row(0) << p.v0 * p.v0, p.v0 * p.y0, p.y0 * p.y0;
  for (int k = 0; k < n; ++k) {
    const Eigen::Vector3d hk = mom.row(k).transpose();
    const Eigen::Vector3d xk = core.row(k).transpose();
    mom.row(k + 1) = (hk + h * moment_rhs(p, hk, xk[0], xk[1], xk[2], fc[k])).transpose();
  }
  if (!core.allFinite() || !mom.allFinite()) {
    throw Error(ErrorCode::NonFiniteState, "Euler recursion produced a non-finite state");
  }

  DiscreteObjective out;
  double log_lr = 0.0;
  for (int k = 0; k <= n; ++k) {
    log_lr += w[k] * expected_log_lr_integrand(p, core(k, 1), core(k, 2), mom(k, 1), mom(k, 2), fc[k]);
  }
  out.expected_log_lr = log_lr * inv_s2;
  out.penalty = penalty(fc, config, grid);
  const double penalty_scale = config.lambda_reg * inv_s2;
  out.value = (terms.log_lr ? out.expected_log_lr : 0.0) +
              (terms.penalty ? penalty_scale * out.penalty : 0.0);
  if (!with_gradient) return out;

  Eigen::VectorXd g_fc = Eigen::VectorXd::Zero(n + 1);
  if (terms.log_lr) {
    Eigen::MatrixX3d g_core = Eigen::MatrixX3d::Zero(n + 1, 3);
    Eigen::MatrixX3d g_mom = Eigen::MatrixX3d::Zero(n + 1, 3);
    for (int k = 0; k <= n; ++k) {
      const IntegrandGradient ig = log_lr_integrand_gradient(
          p, core.row(k).transpose(), mom.row(k).transpose(), fc[k]);
      const double scale = w[k] * inv_s2;
      g_core.row(k) += scale * ig.d_core.transpose();
      g_mom.row(k) += scale * ig.d_moments.transpose();
      g_fc[k] += scale * ig.d_fc;
    }
    // Moment recursion in reverse: mom[k+1] = mom[k] + h G(mom[k], core[k], fc[k]).
    for (int k = n - 1; k >= 0; --k) {
      const MomentJacobian jm =
          moment_jacobian(p, mom.row(k).transpose(), core.row(k).transpose(), fc[k]);
      const Eigen::Vector3d upstream = g_mom.row(k + 1).transpose();
      g_mom.row(k) += (upstream + h * jm.d_moments.transpose() * upstream).transpose();
      g_core.row(k) += h * (jm.d_core.transpose() * upstream).transpose();
      g_fc[k] += h * jm.d_fc.dot(upstream);
    }
    // Coefficient recursion in reverse: core[k] = core[k+1] - h F(core[k+1], fc[k+1]).
    for (int k = 0; k < n; ++k) {
      const CoreJacobian jc = riccati_core_jacobian(p, core.row(k + 1).transpose(), fc[k + 1]);
      const Eigen::Vector3d upstream = g_core.row(k).transpose();
      g_core.row(k + 1) += (upstream - h * jc.d_state.transpose() * upstream).transpose();
      g_fc[k + 1] -= h * jc.d_fc.dot(upstream);
    }
  }
  if (terms.penalty && config.lambda_reg != 0.0) {
    const Eigen::VectorXd anchor = config.f_c_initial.on_grid(grid);
    for (int k = 0; k <= n; ++k) {
      const double d = config.penalty == PenaltyKind::Quadratic ? 2.0 * (fc[k] - anchor[k])
                                                                : -anchor[k] / fc[k];
      g_fc[k] += penalty_scale * w[k] * d;
    }
  }
  out.gradient = std::move(g_fc);
  return out;
}

Eigen::VectorXd nn_gradient(const MlpNetwork& net, const ValidatedParams& params,
                            const RedConfig& config, const Grid& grid, ObjectiveTerms terms) {
  const Eigen::VectorXd ts = grid.times();
  const Eigen::VectorXd fc = net.forward(ts);
  const DiscreteObjective obj = euler_objective(params, fc, config, grid, true, terms);
  return net.backward(ts, obj.gradient);
}

OptimizationReport nn_solve(const ValidatedParams& params, const RedConfig& config,
                            const Grid& grid, std::uint64_t seed) {
  validate_red_config(config, grid);
  const bool exp_output = config.penalty == PenaltyKind::Logarithmic;
  MlpNetwork net = MlpNetwork::random(config.nn, exp_output, grid.horizon(), seed);
  const Eigen::VectorXd ts = grid.times();

  OptimizationReport report;
  report.solver = SolverKind::Nn;
  report.penalty = config.penalty;

  Eigen::VectorXd theta = net.parameters();
  Adam adam(net.n_parameters(), config.nn.learning_rate);
  Eigen::VectorXd fc = net.forward(ts);
  double last_change = std::numeric_limits<double>::infinity();
  for (int epoch = 0; epoch < config.nn.epochs; ++epoch) {
    const DiscreteObjective obj = euler_objective(params, fc, config, grid, true);
    report.objective_history.push_back(obj.value);
    adam.step(theta, net.backward(ts, obj.gradient));
    net.set_parameters(theta);
    Eigen::VectorXd next = net.forward(ts);
    last_change = (next - fc).norm();
    fc = std::move(next);
    report.iterations = epoch + 1;
  }
  report.objective_history.push_back(euler_objective(params, fc, config, grid, false).value);
  report.converged = last_change < config.tolerance;

  const RedEvaluation ev = evaluate_red(params, fc, config, grid);
  report.f_c = TimeFunction::sampled(fc, grid.horizon());
  report.final_expected_log_lr = ev.expected_log_lr;
  report.final_penalty = ev.penalty;
  report.final_objective = ev.objective;
  return report;
}

OptimizationReport optimize_pattern(const ValidatedParams& params, const RedConfig& config,
                                    const Grid& grid, std::uint64_t seed) {
  switch (config.solver) {
    case SolverKind::Fpi: return fpi_solve(params, config, grid);
    case SolverKind::Fbs: return fbs_solve(params, config, grid);
    case SolverKind::Nn: return nn_solve(params, config, grid, seed);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown solver");
}

}  // namespace shtgame
