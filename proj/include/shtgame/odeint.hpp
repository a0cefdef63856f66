#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <string>

#include "shtgame/error.hpp"
#include "shtgame/model.hpp"

namespace shtgame {

template <typename Scalar>
using StateVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Row k holds the state at grid node k.
template <typename Scalar>
using StateHistory = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// dx/dt = rhs(t, x), with x of fixed dimension.
template <typename Scalar = double>
struct OdeSystem {
  using Vector = StateVector<Scalar>;
  using Rhs = std::function<Vector(Scalar t, const Vector& x)>;

  int dimension = 0;
  Rhs rhs;
};

namespace detail {

template <typename Scalar>
void check_finite(const StateVector<Scalar>& x, int node) {
  if (!x.allFinite()) {
    throw Error(ErrorCode::NonFiniteState,
                "integration produced a non-finite state at node " + std::to_string(node));
  }
}

template <typename Scalar>
StateVector<Scalar> checked_rhs(const OdeSystem<Scalar>& system, Scalar t,
                                const StateVector<Scalar>& x) {
  StateVector<Scalar> dx = system.rhs(t, x);
  if (dx.size() != system.dimension) {
    throw Error(ErrorCode::DimensionMismatch, "rhs returned a vector of the wrong length");
  }
  return dx;
}

/// Classical RK4 step of size h from (t, x).
template <typename Scalar>
StateVector<Scalar> rk4_step(const OdeSystem<Scalar>& system, Scalar t, const StateVector<Scalar>& x,
                             Scalar h) {
  const Scalar half = h / Scalar(2);
  const StateVector<Scalar> k1 = checked_rhs(system, t, x);
  const StateVector<Scalar> k2 = checked_rhs(system, t + half, StateVector<Scalar>(x + half * k1));
  const StateVector<Scalar> k3 = checked_rhs(system, t + half, StateVector<Scalar>(x + half * k2));
  const StateVector<Scalar> k4 = checked_rhs(system, t + h, StateVector<Scalar>(x + h * k3));
  return x + (h / Scalar(6)) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
}

}  // namespace detail

/// Fixed-step RK4 from t = 0. Row 0 equals `initial_state` exactly.
template <typename Scalar>
StateHistory<Scalar> integrate_forward(const OdeSystem<Scalar>& system,
                                       const StateVector<Scalar>& initial_state, const Grid& grid) {
  if (initial_state.size() != system.dimension) {
    throw Error(ErrorCode::DimensionMismatch, "initial state length differs from system dimension");
  }
  StateHistory<Scalar> out(grid.n_nodes(), system.dimension);
  StateVector<Scalar> x = initial_state;
  detail::check_finite(x, 0);
  out.row(0) = x.transpose();
  const Scalar h = static_cast<Scalar>(grid.step());
  for (int k = 0; k < grid.n_steps(); ++k) {
    x = detail::rk4_step(system, static_cast<Scalar>(grid.time(k)), x, h);
    detail::check_finite(x, k + 1);
    out.row(k + 1) = x.transpose();
  }
  return out;
}

/// Fixed-step RK4 from t = T towards 0, via s = T - t. Row N equals `terminal_state` exactly.
template <typename Scalar>
StateHistory<Scalar> integrate_backward(const OdeSystem<Scalar>& system,
                                        const StateVector<Scalar>& terminal_state,
                                        const Grid& grid) {
  if (terminal_state.size() != system.dimension) {
    throw Error(ErrorCode::DimensionMismatch, "terminal state length differs from system dimension");
  }
  const Scalar horizon = static_cast<Scalar>(grid.horizon());
  OdeSystem<Scalar> reversed{system.dimension,
                             [&system, horizon](Scalar s, const StateVector<Scalar>& x) {
                               return StateVector<Scalar>(-system.rhs(horizon - s, x));
                             }};
  const int n = grid.n_steps();
  StateHistory<Scalar> out(grid.n_nodes(), system.dimension);
  StateVector<Scalar> x = terminal_state;
  detail::check_finite(x, n);
  out.row(n) = x.transpose();
  const Scalar h = static_cast<Scalar>(grid.step());
  for (int j = 0; j < n; ++j) {
    // s_j = T - t_{n-j}
    const Scalar s = horizon - static_cast<Scalar>(grid.time(n - j));
    x = detail::rk4_step(reversed, s, x, h);
    detail::check_finite(x, n - j - 1);
    out.row(n - j - 1) = x.transpose();
  }
  return out;
}

/// Linear interpolation of column `col` of a grid history at time t (clamped to [0, T]).
template <typename Derived>
typename Derived::Scalar interpolate_column(const Eigen::MatrixBase<Derived>& history, int col,
                                            const Grid& grid, double t) {
  const int n = grid.n_steps();
  double s = t / grid.horizon() * n;
  if (s <= 0.0) return history(0, col);
  if (s >= n) return history(n, col);
  const int k = static_cast<int>(s);
  const double frac = s - k;
  if (frac == 0.0) return history(k, col);
  return history(k, col) + frac * (history(k + 1, col) - history(k, col));
}

}  // namespace shtgame
