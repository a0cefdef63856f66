#pragma once

#include <Eigen/Dense>

#include "shtgame/model.hpp"

namespace shtgame {

// Partial derivatives of the (mu, eta, rho) and moment right-hand sides and of the
// expected-log-LR integrand. Shared by the discrete adjoint and the sweep adjoint.

struct CoreJacobian {
  Eigen::Matrix3d d_state;  ///< d F / d (mu, eta, rho)
  Eigen::Vector3d d_fc;     ///< d F / d f_c
};

CoreJacobian riccati_core_jacobian(const ModelParams& p, const Eigen::Vector3d& core, double f_c);

struct MomentJacobian {
  Eigen::Matrix3d d_moments;  ///< d G / d (h20, h11, h02)
  Eigen::Matrix3d d_core;     ///< d G / d (mu, eta, rho)
  Eigen::Vector3d d_fc;       ///< d G / d f_c
};

MomentJacobian moment_jacobian(const ModelParams& p, const Eigen::Vector3d& moments,
                               const Eigen::Vector3d& core, double f_c);

struct IntegrandGradient {
  Eigen::Vector3d d_core;     ///< w.r.t. (mu, eta, rho)
  Eigen::Vector3d d_moments;  ///< w.r.t. (h20, h11, h02)
  double d_fc = 0.0;
};

/// Gradient of the expected-log-LR integrand (without the 1/sigma_W^2 factor).
IntegrandGradient log_lr_integrand_gradient(const ModelParams& p, const Eigen::Vector3d& core,
                                            const Eigen::Vector3d& moments, double f_c);

}  // namespace shtgame
