#include "shtgame/red.hpp"

#include <cmath>

#include "shtgame/odeint.hpp"
#include "shtgame/riccati.hpp"
#include "shtgame/sensitivities.hpp"

namespace shtgame {

std::string_view to_string(PenaltyKind kind) {
  return kind == PenaltyKind::Quadratic ? "quadratic" : "logarithmic";
}

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::Fpi: return "fpi";
    case SolverKind::Fbs: return "fbs";
    case SolverKind::Nn: return "nn";
  }
  return "unknown";
}

void validate_red_config(const RedConfig& c, const Grid& grid) {
  if (!(c.lambda_reg >= 0.0) || !std::isfinite(c.lambda_reg)) {
    throw Error(ErrorCode::InvalidArgument, "lambda_reg must be non-negative");
  }
  if (!(c.tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  if (c.max_iters < 1) throw Error(ErrorCode::InvalidArgument, "max_iters must be at least 1");
  if (!(c.fbs_relaxation > 0.0 && c.fbs_relaxation <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "fbs_relaxation must lie in (0, 1]");
  }
  if (c.nn.epochs < 1 || c.nn.hidden_width < 1 || c.nn.hidden_layers < 1 ||
      !(c.nn.learning_rate > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "invalid network settings");
  }
  if (c.penalty == PenaltyKind::Logarithmic && !(c.f_c_initial.on_grid(grid).array() > 0.0).all()) {
    throw Error(ErrorCode::NonPositiveFc, "logarithmic penalty needs a positive f_c_initial");
  }
}

double penalty(const Eigen::VectorXd& fc, const RedConfig& config, const Grid& grid) {
  if (fc.size() != grid.n_nodes()) throw Error(ErrorCode::GridMismatch, "f_c length differs from grid");
  const Eigen::VectorXd anchor = config.f_c_initial.on_grid(grid);
  const Eigen::VectorXd w = grid.trapezoid_weights();
  if (config.penalty == PenaltyKind::Quadratic) {
    return w.dot((fc - anchor).array().square().matrix());
  }
  if (!(fc.array() > 0.0).all()) {
    throw Error(ErrorCode::NonPositiveFc, "logarithmic penalty needs f_c > 0 at every node");
  }
  if (!(anchor.array() > 0.0).all()) {
    throw Error(ErrorCode::NonPositiveFc, "logarithmic penalty needs f_c_initial > 0");
  }
  return w.dot((-anchor.array() * (fc.array() / anchor.array()).log()).matrix());
}

RedEvaluation evaluate_red(const ValidatedParams& params, const Eigen::VectorXd& fc,
                           const RedConfig& config, const Grid& grid) {
  if (fc.size() != grid.n_nodes()) throw Error(ErrorCode::GridMismatch, "f_c length differs from grid");
  const ModelParams& p = params.get();
  const TimeFunction f = TimeFunction::sampled(fc, grid.horizon());
  RedEvaluation ev{solve_riccati_core(params, f, grid), {grid, {}, {}, {}}, 0.0, 0.0, 0.0, {}};
  ev.moments = solve_moments(params, ev.core, f, grid);
  ev.expected_log_lr = expected_log_lr(params, ev.core.col(1), ev.core.col(2), f, ev.moments, grid);
  ev.penalty = penalty(fc, config, grid);
  ev.objective = ev.expected_log_lr + config.lambda_reg / (p.sigma_W * p.sigma_W) * ev.penalty;
  ev.misdirection_gain = (ev.core.col(1).cwiseProduct(ev.moments.h11) +
                          ev.core.col(2).cwiseProduct(ev.moments.h02)) /
                         p.r_beta;
  return ev;
}

double red_objective(const ValidatedParams& params, const Eigen::VectorXd& fc,
                     const RedConfig& config, const Grid& grid) {
  return evaluate_red(params, fc, config, grid).objective;
}

namespace {

bool anchor_is_unit(const RedConfig& config, const Grid& grid) {
  return ((config.f_c_initial.on_grid(grid).array() - 1.0).abs() <= 1e-12).all();
}

void require_supported(const RedConfig& config, const Grid& grid) {
  if (config.penalty == PenaltyKind::Logarithmic && !anchor_is_unit(config, grid)) {
    throw Error(ErrorCode::Unsupported,
                "closed-form logarithmic updates require f_c_initial = 1");
  }
}

Eigen::Vector3d row3(const Eigen::MatrixX3d& m, int k) { return m.row(k).transpose(); }

Eigen::Vector3d moments_at(const MomentCurves& m, int k) { return {m.h20[k], m.h11[k], m.h02[k]}; }

}  // namespace

double fpi_update(double t, double eta, double rho, double h11, double h02,
                  const ValidatedParams& params, const RedConfig& config) {
  const ModelParams& p = params.get();
  const double s2 = p.sigma_W * p.sigma_W;
  const double rb = p.r_beta;
  if (config.penalty == PenaltyKind::Quadratic) {
    const double anchor = config.f_c_initial(t);
    const double den = 2.0 * config.lambda_reg * rb * s2 - (rb * s2 - 2.0 * p.lambda) * h02;
    if (!(den > 0.0)) {
      throw Error(ErrorCode::DegenerateDenominator, "quadratic fixed-point denominator is not positive");
    }
    return (2.0 * config.lambda_reg * rb * s2 * anchor + s2 * eta * h11 + s2 * rho * h02) / den;
  }
  const double a = p.lambda / (rb * s2) - 0.5;
  const double lead = 4.0 * a * h02;
  if (!(lead > 0.0)) {
    throw Error(ErrorCode::DegenerateDenominator, "logarithmic fixed-point leading coefficient is not positive");
  }
  const double gain = (eta * h11 + rho * h02) / rb;
  const double disc = gain * gain + 8.0 * config.lambda_reg * a * h02;
  if (disc < 0.0) throw Error(ErrorCode::NegativeDiscriminant, "fixed-point discriminant is negative");
  return (gain + std::sqrt(disc)) / lead;
}

OptimizationReport fpi_solve(const ValidatedParams& params, const RedConfig& config,
                             const Grid& grid) {
  validate_red_config(config, grid);
  require_supported(config, grid);
  OptimizationReport report;
  report.solver = SolverKind::Fpi;
  report.penalty = config.penalty;

  Eigen::VectorXd fc = config.f_c_initial.on_grid(grid);
  RedEvaluation ev = evaluate_red(params, fc, config, grid);
  report.objective_history.push_back(ev.objective);
  for (int it = 1; it <= config.max_iters; ++it) {
    Eigen::VectorXd next(grid.n_nodes());
    for (int k = 0; k < grid.n_nodes(); ++k) {
      next[k] = fpi_update(grid.time(k), ev.core(k, 1), ev.core(k, 2), ev.moments.h11[k],
                           ev.moments.h02[k], params, config);
    }
    const double change = (next - fc).norm();
    fc = std::move(next);
    ev = evaluate_red(params, fc, config, grid);
    report.objective_history.push_back(ev.objective);
    report.iterations = it;
    if (change < config.tolerance) {
      report.converged = true;
      break;
    }
  }
  report.f_c = TimeFunction::sampled(fc, grid.horizon());
  report.final_expected_log_lr = ev.expected_log_lr;
  report.final_penalty = ev.penalty;
  report.final_objective = ev.objective;
  return report;
}

namespace {

double penalty_integrand_derivative(const RedConfig& config, double fc, double anchor) {
  if (config.penalty == PenaltyKind::Quadratic) return 2.0 * (fc - anchor);
  return -anchor / fc;
}

}  // namespace

AdjointState solve_adjoint(const ValidatedParams& params, const RedConfig& config,
                           const Eigen::VectorXd& fc, const RedEvaluation& states,
                           const Grid& grid) {
  (void)config;  // the penalty does not depend on the states
  const ModelParams& p = params.get();
  const TimeFunction f = TimeFunction::sampled(fc, grid.horizon());
  Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor> mom(grid.n_nodes(), 3);
  mom << states.moments.h20, states.moments.h11, states.moments.h02;
  const Eigen::MatrixX3d& core = states.core;

  auto core_at = [&](double t) {
    return Eigen::Vector3d(interpolate_column(core, 0, grid, t), interpolate_column(core, 1, grid, t),
                           interpolate_column(core, 2, grid, t));
  };
  auto mom_at = [&](double t) {
    return Eigen::Vector3d(interpolate_column(mom, 0, grid, t), interpolate_column(mom, 1, grid, t),
                           interpolate_column(mom, 2, grid, t));
  };

  // Moment costates: autonomous from the coefficient costates, pinned at T.
  OdeSystem<double> moment_costate{3, [&](double t, const Eigen::VectorXd& psi) {
                                     const Eigen::Vector3d x = core_at(t), h = mom_at(t);
                                     const double ft = f(t);
                                     const MomentJacobian jm = moment_jacobian(p, h, x, ft);
                                     const IntegrandGradient g = log_lr_integrand_gradient(p, x, h, ft);
                                     return Eigen::VectorXd(
                                         -(jm.d_moments.transpose() * psi.head<3>() + g.d_moments));
                                   }};
  const auto psi_m = integrate_backward(moment_costate, Eigen::VectorXd(Eigen::Vector3d::Zero()), grid);

  // Coefficient costates: driven by the moment costates, pinned at 0.
  OdeSystem<double> core_costate{3, [&](double t, const Eigen::VectorXd& psi) {
                                   const Eigen::Vector3d x = core_at(t), h = mom_at(t);
                                   const double ft = f(t);
                                   const Eigen::Vector3d pm(interpolate_column(psi_m, 0, grid, t),
                                                            interpolate_column(psi_m, 1, grid, t),
                                                            interpolate_column(psi_m, 2, grid, t));
                                   const CoreJacobian jc = riccati_core_jacobian(p, x, ft);
                                   const MomentJacobian jm = moment_jacobian(p, h, x, ft);
                                   const IntegrandGradient g = log_lr_integrand_gradient(p, x, h, ft);
                                   return Eigen::VectorXd(-(jc.d_state.transpose() * psi.head<3>() +
                                                            jm.d_core.transpose() * pm + g.d_core));
                                 }};
  const auto psi_c = integrate_forward(core_costate, Eigen::VectorXd(Eigen::Vector3d::Zero()), grid);

  AdjointState out;
  out.psi.resize(grid.n_nodes(), 6);
  out.psi.leftCols<3>() = psi_c;
  out.psi.rightCols<3>() = psi_m;
  return out;
}

Eigen::VectorXd hamiltonian_gradient(const ValidatedParams& params, const RedConfig& config,
                                     const Eigen::VectorXd& fc, const RedEvaluation& states,
                                     const AdjointState& adjoint, const Grid& grid) {
  const ModelParams& p = params.get();
  const Eigen::VectorXd anchor = config.f_c_initial.on_grid(grid);
  Eigen::VectorXd out(grid.n_nodes());
  for (int k = 0; k < grid.n_nodes(); ++k) {
    const Eigen::Vector3d x = row3(states.core, k), h = moments_at(states.moments, k);
    const CoreJacobian jc = riccati_core_jacobian(p, x, fc[k]);
    const MomentJacobian jm = moment_jacobian(p, h, x, fc[k]);
    const IntegrandGradient g = log_lr_integrand_gradient(p, x, h, fc[k]);
    const Eigen::Vector3d psi_c = adjoint.psi.row(k).head<3>().transpose();
    const Eigen::Vector3d psi_m = adjoint.psi.row(k).tail<3>().transpose();
    out[k] = psi_c.dot(jc.d_fc) + psi_m.dot(jm.d_fc) + g.d_fc +
             config.lambda_reg * penalty_integrand_derivative(config, fc[k], anchor[k]);
  }
  return out;
}

Eigen::VectorXd fbs_control_update(const ValidatedParams& params, const RedConfig& config,
                                   const RedEvaluation& states, const AdjointState& adjoint,
                                   const Grid& grid) {
  const ModelParams& p = params.get();
  const auto [k, c2] = MisdirectionConstants::from(p);
  const double a = k - 0.5;
  const double rb = p.r_beta;
  const Eigen::VectorXd anchor = config.f_c_initial.on_grid(grid);
  Eigen::VectorXd out(grid.n_nodes());
  for (int n = 0; n < grid.n_nodes(); ++n) {
    const double x2 = states.core(n, 1), x3 = states.core(n, 2);
    const double x5 = states.moments.h11[n], x6 = states.moments.h02[n];
    const auto psi = adjoint.psi.row(n);
    // dH/df = quad * f - linear (+ penalty term)
    const double quad = 2.0 * a * x6 + 2.0 * c2 * psi[2];
    const double linear = (x2 * x5 + x3 * x6) / rb +
                          k * (psi[1] * x2 + 2.0 * psi[2] * x3 - psi[4] * x5 - 2.0 * psi[5] * x6);
    if (config.penalty == PenaltyKind::Quadratic) {
      const double den = quad + 2.0 * config.lambda_reg;
      if (!(den > 0.0)) {
        throw Error(ErrorCode::DegenerateDenominator, "Hamiltonian is not convex in f_c");
      }
      out[n] = (2.0 * config.lambda_reg * anchor[n] + linear) / den;
    } else {
      // quad f^2 - linear f - lambda_reg = 0
      if (!(quad > 0.0)) {
        throw Error(ErrorCode::DegenerateDenominator, "logarithmic update leading coefficient is not positive");
      }
      const double b = -linear;
      const double disc = b * b + 4.0 * quad * config.lambda_reg;
      if (disc < 0.0) throw Error(ErrorCode::NegativeDiscriminant, "Hamiltonian root discriminant is negative");
      out[n] = (-b + std::sqrt(disc)) / (2.0 * quad);
    }
  }
  return out;
}

OptimizationReport fbs_solve(const ValidatedParams& params, const RedConfig& config,
                             const Grid& grid) {
  validate_red_config(config, grid);
  require_supported(config, grid);
  OptimizationReport report;
  report.solver = SolverKind::Fbs;
  report.penalty = config.penalty;

  Eigen::VectorXd fc = config.f_c_initial.on_grid(grid);
  RedEvaluation ev = evaluate_red(params, fc, config, grid);
  report.objective_history.push_back(ev.objective);
  double omega = config.fbs_relaxation;
  constexpr double kMinRelaxation = 1.0 / 1024.0;
  for (int it = 1; it <= config.max_iters; ++it) {
    const AdjointState adjoint = solve_adjoint(params, config, fc, ev, grid);
    const Eigen::VectorXd target = fbs_control_update(params, config, ev, adjoint, grid);

    Eigen::VectorXd next = (1.0 - omega) * fc + omega * target;
    RedEvaluation next_ev = evaluate_red(params, next, config, grid);
    while (next_ev.objective > ev.objective + 1e-12 * std::abs(ev.objective) &&
           omega > kMinRelaxation) {
      omega *= 0.5;
      next = (1.0 - omega) * fc + omega * target;
      next_ev = evaluate_red(params, next, config, grid);
    }
    const double change = (next - fc).norm();
    fc = std::move(next);
    ev = std::move(next_ev);
    report.objective_history.push_back(ev.objective);
    report.iterations = it;
    if (change < config.tolerance) {
      report.converged = true;
      break;
    }
  }
  report.f_c = TimeFunction::sampled(fc, grid.horizon());
  report.final_expected_log_lr = ev.expected_log_lr;
  report.final_penalty = ev.penalty;
  report.final_objective = ev.objective;
  return report;
}

}  // namespace shtgame
