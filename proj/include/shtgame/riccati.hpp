#pragma once

#include <Eigen/Dense>

#include "shtgame/model.hpp"

namespace shtgame {

/// Coefficients of the quadratic value function
///   V(t, v, y) = mu/2 v^2 + eta v y + rho/2 y^2 + gamma v + theta y + xi
/// sampled on a grid.
struct ValueCoeffs {
  Grid grid;
  Eigen::VectorXd mu, eta, rho, gamma, theta, xi;

  explicit ValueCoeffs(const Grid& g);

  /// All-zero curves on `g`. Useful for hand-built policies.
  static ValueCoeffs zeros(const Grid& g) { return ValueCoeffs(g); }
};

/// Misdirection-scaled constants shared by the coefficient and moment equations.
struct MisdirectionConstants {
  double k;   ///< lambda / (r_beta sigma_W^2)
  double c2;  ///< lambda^2 / (r_beta sigma_W^4) - lambda / sigma_W^2

  static MisdirectionConstants from(const ModelParams& p);
};

/// Right-hand side of the (mu, eta, rho) equations at a given f_c value.
Eigen::Vector3d riccati_core_rhs(const ModelParams& p, const Eigen::Vector3d& x, double f_c);

/// Backward solve of the full six-dimensional coefficient system.
ValueCoeffs solve_value_coeffs(const ValidatedParams& params, const Pattern& pattern,
                               const Grid& grid);

/// Backward solve of the (mu, eta, rho) block alone. Rows are nodes, columns mu, eta, rho.
Eigen::MatrixX3d solve_riccati_core(const ValidatedParams& params, const TimeFunction& f_c,
                                    const Grid& grid);

}  // namespace shtgame
