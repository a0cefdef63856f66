#pragma once

#include <Eigen/Dense>

#include <variant>

#include "shtgame/error.hpp"

namespace shtgame {

/// Uniform time grid t_k = k * T / n_steps, k = 0..n_steps.
class Grid {
 public:
  Grid(double horizon, int n_steps);

  double horizon() const { return horizon_; }
  int n_steps() const { return n_steps_; }
  int n_nodes() const { return n_steps_ + 1; }
  double step() const { return horizon_ / n_steps_; }
  double time(int k) const { return k == n_steps_ ? horizon_ : k * step(); }
  Eigen::VectorXd times() const;

  /// Trapezoid weights; `weights().dot(values)` integrates over [0, T].
  Eigen::VectorXd trapezoid_weights() const;

  bool operator==(const Grid&) const = default;

 private:
  double horizon_;
  int n_steps_;
};

struct Constant {
  double value = 0.0;
};

/// a + b t
struct Affine {
  double a = 0.0;
  double b = 0.0;
};

/// amp * sin(omega t + phase)
struct Sinusoid {
  double amp = 0.0;
  double omega = 0.0;
  double phase = 0.0;
};

/// Values on a uniform grid over [0, horizon], linearly interpolated.
struct GridSampled {
  Eigen::VectorXd values;
  double horizon = 1.0;
};

class TimeFunction {
 public:
  using Variant = std::variant<Constant, Affine, Sinusoid, GridSampled>;

  TimeFunction() : repr_(Constant{0.0}) {}
  TimeFunction(Variant repr);  // NOLINT(google-explicit-constructor)

  static TimeFunction constant(double c) { return TimeFunction(Constant{c}); }
  static TimeFunction affine(double a, double b) { return TimeFunction(Affine{a, b}); }
  static TimeFunction sinusoid(double amp, double omega, double phase = 0.0) {
    return TimeFunction(Sinusoid{amp, omega, phase});
  }
  static TimeFunction sampled(Eigen::VectorXd values, double horizon) {
    return TimeFunction(GridSampled{std::move(values), horizon});
  }
  /// Samples `f` at every node of `grid`.
  static TimeFunction sample(const TimeFunction& f, const Grid& grid);

  /// Unchecked evaluation; grid-sampled values are clamped to [0, horizon].
  double operator()(double t) const;

  /// Values at every node of `grid`.
  Eigen::VectorXd on_grid(const Grid& grid) const;

  /// True when the function is the zero function (grid values all exactly 0).
  bool is_zero() const;

  const Variant& repr() const { return repr_; }

 private:
  Variant repr_;
};

bool operator==(const TimeFunction& lhs, const TimeFunction& rhs);

/// Checked evaluation at t in [0, horizon]; throws OutOfDomain otherwise.
double eval_time_function(const TimeFunction& f, double t, double horizon);

/// The alternative-hypothesis pattern: beta = f_c(t) y + f_d(t).
struct Pattern {
  TimeFunction f_c;
  TimeFunction f_d;

  bool is_zero() const { return f_c.is_zero() && f_d.is_zero(); }
};

struct ModelParams {
  double horizon = 1.0;
  double sigma_B = 0.25;
  double sigma_W = 0.25;
  double r_alpha = 1.0;
  double r_beta = 10.0;
  double r_v = 1.0;
  double t_v = 1.0;
  double vbar_T = 0.0;
  TimeFunction vbar;
  double lambda = 0.0;
  double v0 = 0.0;
  double y0 = 0.0;

  /// Upper end of the admissible misdirection intensity, r_beta * sigma_W^2.
  double lambda_max() const { return r_beta * sigma_W * sigma_W; }
};

struct ValidationOptions {
  /// Accept sigma_B = sigma_W = 0; only meaningful for deterministic test paths.
  bool allow_zero_noise = false;
};

/// Parameters that passed `validate_params`. Only constructible through it.
class ValidatedParams {
 public:
  const ModelParams& get() const { return params_; }
  const ModelParams* operator->() const { return &params_; }
  operator const ModelParams&() const { return params_; }  // NOLINT

  bool operator==(const ValidatedParams& other) const;

 private:
  explicit ValidatedParams(ModelParams p) : params_(std::move(p)) {}
  friend ValidatedParams validate_params(const ModelParams&, ValidationOptions);

  ModelParams params_;
};

ValidatedParams validate_params(const ModelParams& params, ValidationOptions options = {});

}  // namespace shtgame
