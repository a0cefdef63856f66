#pragma once

#include <Eigen/Dense>

#include "shtgame/model.hpp"
#include "shtgame/riccati.hpp"

namespace shtgame {

/// Second moments E[V^2], E[VY], E[Y^2] of the optimally controlled state.
struct MomentCurves {
  Grid grid;
  Eigen::VectorXd h20, h11, h02;
};

/// Right-hand side of the moment equations given (mu, eta, rho) and f_c at one instant.
Eigen::Vector3d moment_rhs(const ModelParams& p, const Eigen::Vector3d& h, double mu, double eta,
                           double rho, double f_c);

/// Forward RK4 solve of the moment system. Coefficient curves are interpolated linearly
/// at half steps. Assumes the simplified model (f_d = vbar = vbar_T = 0).
MomentCurves solve_moments(const ValidatedParams& params, const ValueCoeffs& coeffs,
                           const TimeFunction& f_c, const Grid& grid);

/// Same, from (mu, eta, rho) columns of a core solve.
MomentCurves solve_moments(const ValidatedParams& params, const Eigen::MatrixX3d& core,
                           const TimeFunction& f_c, const Grid& grid);

/// Integrand of the expected log likelihood ratio at one node (before the 1/sigma_W^2 factor).
double expected_log_lr_integrand(const ModelParams& p, double eta, double rho, double h11,
                                 double h02, double f_c);

/// Trapezoid quadrature of the closed-form expected log likelihood ratio.
double expected_log_lr(const ValidatedParams& params, const ValueCoeffs& coeffs,
                       const TimeFunction& f_c, const MomentCurves& moments, const Grid& grid);

double expected_log_lr(const ValidatedParams& params, const Eigen::VectorXd& eta,
                       const Eigen::VectorXd& rho, const TimeFunction& f_c,
                       const MomentCurves& moments, const Grid& grid);

}  // namespace shtgame
