#include "shtgame/riccati.hpp"

#include "shtgame/odeint.hpp"

namespace shtgame {

ValueCoeffs::ValueCoeffs(const Grid& g)
    : grid(g),
      mu(Eigen::VectorXd::Zero(g.n_nodes())),
      eta(Eigen::VectorXd::Zero(g.n_nodes())),
      rho(Eigen::VectorXd::Zero(g.n_nodes())),
      gamma(Eigen::VectorXd::Zero(g.n_nodes())),
      theta(Eigen::VectorXd::Zero(g.n_nodes())),
      xi(Eigen::VectorXd::Zero(g.n_nodes())) {}

MisdirectionConstants MisdirectionConstants::from(const ModelParams& p) {
  if (p.lambda == 0.0) return {0.0, 0.0};
  const double s2 = p.sigma_W * p.sigma_W;
  const double k = p.lambda / (p.r_beta * s2);
  // lambda^2/(r_beta s2^2) - lambda/s2 = (lambda/s2) (k - 1); exactly 0 at k = 1.
  return {k, (p.lambda / s2) * (k - 1.0)};
}

Eigen::Vector3d riccati_core_rhs(const ModelParams& p, const Eigen::Vector3d& x, double fc) {
  const auto [k, c2] = MisdirectionConstants::from(p);
  const double mu = x[0], eta = x[1], rho = x[2];
  return {mu * mu / p.r_alpha + eta * eta / p.r_beta - 2.0 * eta - p.r_v,
          mu * eta / p.r_alpha + rho * eta / p.r_beta - rho - k * eta * fc,
          eta * eta / p.r_alpha + rho * rho / p.r_beta - 2.0 * k * rho * fc + c2 * fc * fc};
}

ValueCoeffs solve_value_coeffs(const ValidatedParams& params, const Pattern& pattern,
                               const Grid& grid) {
  const ModelParams& p = params.get();
  if (grid.horizon() != p.horizon) {
    throw Error(ErrorCode::GridMismatch, "grid horizon differs from model horizon");
  }
  const auto [k, c2] = MisdirectionConstants::from(p);
  const double s2w = p.sigma_W * p.sigma_W;
  const double s2b = p.sigma_B * p.sigma_B;
  const TimeFunction& f_c = pattern.f_c;
  const TimeFunction& f_d = pattern.f_d;
  const TimeFunction& vbar = p.vbar;

  OdeSystem<double> system{6, [&](double t, const Eigen::VectorXd& x) {
                             const double fc = f_c(t), fd = f_d(t), vb = vbar(t);
                             const double mu = x[0], eta = x[1], rho = x[2];
                             const double gam = x[3], th = x[4];
                             Eigen::VectorXd dx(6);
                             dx[0] = mu * mu / p.r_alpha + eta * eta / p.r_beta - 2.0 * eta - p.r_v;
                             dx[1] = mu * eta / p.r_alpha + rho * eta / p.r_beta - rho - k * eta * fc;
                             dx[2] = eta * eta / p.r_alpha + rho * rho / p.r_beta -
                                     2.0 * k * rho * fc + c2 * fc * fc;
                             dx[3] = mu * gam / p.r_alpha + eta * th / p.r_beta - th + p.r_v * vb -
                                     k * eta * fd;
                             dx[4] = eta * gam / p.r_alpha + rho * th / p.r_beta - k * th * fc -
                                     k * fd * rho + c2 * fc * fd;
                             dx[5] = gam * gam / (2.0 * p.r_alpha) + th * th / (2.0 * p.r_beta) -
                                     0.5 * s2b * mu - 0.5 * s2w * rho - k * fd * th -
                                     0.5 * p.r_v * vb * vb + 0.5 * c2 * fd * fd;
                             return dx;
                           }};

  Eigen::VectorXd terminal(6);
  terminal << p.t_v, 0.0, 0.0, -p.t_v * p.vbar_T, 0.0, 0.5 * p.t_v * p.vbar_T * p.vbar_T;
  const StateHistory<double> sol = integrate_backward(system, terminal, grid);

  ValueCoeffs out(grid);
  out.mu = sol.col(0);
  out.eta = sol.col(1);
  out.rho = sol.col(2);
  out.gamma = sol.col(3);
  out.theta = sol.col(4);
  out.xi = sol.col(5);
  return out;
}

Eigen::MatrixX3d solve_riccati_core(const ValidatedParams& params, const TimeFunction& f_c,
                                    const Grid& grid) {
  const ModelParams& p = params.get();
  OdeSystem<double> system{3, [&](double t, const Eigen::VectorXd& x) {
                             return Eigen::VectorXd(riccati_core_rhs(p, x.head<3>(), f_c(t)));
                           }};
  const Eigen::VectorXd terminal = Eigen::Vector3d(p.t_v, 0.0, 0.0);
  return integrate_backward(system, terminal, grid);
}

}  // namespace shtgame
