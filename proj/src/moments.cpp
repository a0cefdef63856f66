#include "shtgame/moments.hpp"

#include "shtgame/odeint.hpp"

namespace shtgame {

Eigen::Vector3d moment_rhs(const ModelParams& p, const Eigen::Vector3d& h, double mu, double eta,
                           double rho, double fc) {
  const double k = MisdirectionConstants::from(p).k;
  const double h20 = h[0], h11 = h[1], h02 = h[2];
  const double drift_y = k * fc - rho / p.r_beta;  // y-coefficient of beta
  const double coupling = 1.0 - eta / p.r_beta;    // v-coefficient of V + beta
  return {-2.0 * mu / p.r_alpha * h20 - 2.0 * eta / p.r_alpha * h11 + p.sigma_B * p.sigma_B,
          (drift_y - mu / p.r_alpha) * h11 + coupling * h20 - eta / p.r_alpha * h02,
          2.0 * coupling * h11 + 2.0 * drift_y * h02 + p.sigma_W * p.sigma_W};
}

MomentCurves solve_moments(const ValidatedParams& params, const Eigen::MatrixX3d& core,
                           const TimeFunction& f_c, const Grid& grid) {
  if (core.rows() != grid.n_nodes()) {
    throw Error(ErrorCode::GridMismatch, "coefficient curves and grid differ in length");
  }
  const ModelParams& p = params.get();
  OdeSystem<double> system{3, [&](double t, const Eigen::VectorXd& h) {
                             return Eigen::VectorXd(moment_rhs(
                                 p, h.head<3>(), interpolate_column(core, 0, grid, t),
                                 interpolate_column(core, 1, grid, t),
                                 interpolate_column(core, 2, grid, t), f_c(t)));
                           }};
  const Eigen::VectorXd initial = Eigen::Vector3d(p.v0 * p.v0, p.v0 * p.y0, p.y0 * p.y0);
  const StateHistory<double> sol = integrate_forward(system, initial, grid);
  return {grid, sol.col(0), sol.col(1), sol.col(2)};
}

MomentCurves solve_moments(const ValidatedParams& params, const ValueCoeffs& coeffs,
                           const TimeFunction& f_c, const Grid& grid) {
  if (!(coeffs.grid == grid)) throw Error(ErrorCode::GridMismatch, "coefficient grid differs");
  Eigen::MatrixX3d core(grid.n_nodes(), 3);
  core << coeffs.mu, coeffs.eta, coeffs.rho;
  return solve_moments(params, core, f_c, grid);
}

double expected_log_lr_integrand(const ModelParams& p, double eta, double rho, double h11,
                                 double h02, double fc) {
  const double a = p.lambda / (p.r_beta * p.sigma_W * p.sigma_W) - 0.5;
  return (-eta * h11 / p.r_beta - rho * h02 / p.r_beta) * fc + a * h02 * fc * fc;
}

double expected_log_lr(const ValidatedParams& params, const Eigen::VectorXd& eta,
                       const Eigen::VectorXd& rho, const TimeFunction& f_c,
                       const MomentCurves& moments, const Grid& grid) {
  if (!(moments.grid == grid) || eta.size() != grid.n_nodes() || rho.size() != grid.n_nodes()) {
    throw Error(ErrorCode::GridMismatch, "inputs are not on the same grid");
  }
  const ModelParams& p = params.get();
  const Eigen::VectorXd fc = f_c.on_grid(grid);
  const Eigen::VectorXd w = grid.trapezoid_weights();
  double sum = 0.0;
  for (int k = 0; k < grid.n_nodes(); ++k) {
    sum += w[k] * expected_log_lr_integrand(p, eta[k], rho[k], moments.h11[k], moments.h02[k], fc[k]);
  }
  return sum / (p.sigma_W * p.sigma_W);
}

double expected_log_lr(const ValidatedParams& params, const ValueCoeffs& coeffs,
                       const TimeFunction& f_c, const MomentCurves& moments, const Grid& grid) {
  if (!(coeffs.grid == grid)) throw Error(ErrorCode::GridMismatch, "coefficient grid differs");
  return expected_log_lr(params, coeffs.eta, coeffs.rho, f_c, moments, grid);
}

}  // namespace shtgame
