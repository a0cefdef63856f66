#include "shtgame/sensitivities.hpp"

#include "shtgame/riccati.hpp"

namespace shtgame {

CoreJacobian riccati_core_jacobian(const ModelParams& p, const Eigen::Vector3d& x, double fc) {
  const auto [k, c2] = MisdirectionConstants::from(p);
  const double ra = p.r_alpha, rb = p.r_beta;
  const double mu = x[0], eta = x[1], rho = x[2];
  CoreJacobian j;
  j.d_state << 2.0 * mu / ra, 2.0 * eta / rb - 2.0, 0.0,
               eta / ra, mu / ra + rho / rb - k * fc, eta / rb - 1.0,
               0.0, 2.0 * eta / ra, 2.0 * rho / rb - 2.0 * k * fc;
  j.d_fc << 0.0, -k * eta, -2.0 * k * rho + 2.0 * c2 * fc;
  return j;
}

MomentJacobian moment_jacobian(const ModelParams& p, const Eigen::Vector3d& h,
                               const Eigen::Vector3d& x, double fc) {
  const double k = MisdirectionConstants::from(p).k;
  const double ra = p.r_alpha, rb = p.r_beta;
  const double mu = x[0], eta = x[1], rho = x[2];
  const double h20 = h[0], h11 = h[1], h02 = h[2];
  MomentJacobian j;
  j.d_moments << -2.0 * mu / ra, -2.0 * eta / ra, 0.0,
                 1.0 - eta / rb, k * fc - rho / rb - mu / ra, -eta / ra,
                 0.0, 2.0 * (1.0 - eta / rb), 2.0 * (k * fc - rho / rb);
  j.d_core << -2.0 * h20 / ra, -2.0 * h11 / ra, 0.0,
              -h11 / ra, -h20 / rb - h02 / ra, -h11 / rb,
              0.0, -2.0 * h11 / rb, -2.0 * h02 / rb;
  j.d_fc << 0.0, k * h11, 2.0 * k * h02;
  return j;
}

IntegrandGradient log_lr_integrand_gradient(const ModelParams& p, const Eigen::Vector3d& x,
                                            const Eigen::Vector3d& h, double fc) {
  const double rb = p.r_beta;
  const double a = MisdirectionConstants::from(p).k - 0.5;
  const double eta = x[1], rho = x[2];
  const double h11 = h[1], h02 = h[2];
  IntegrandGradient g;
  g.d_core << 0.0, -h11 * fc / rb, -h02 * fc / rb;
  g.d_moments << 0.0, -eta * fc / rb, -rho * fc / rb + a * fc * fc;
  g.d_fc = -(eta * h11 + rho * h02) / rb + 2.0 * a * h02 * fc;
  return g;
}

}  // namespace shtgame
