#include "shtgame/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace shtgame {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::LambdaOutOfRange: return "LambdaOutOfRange";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::NonPositiveHorizon: return "NonPositiveHorizon";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonPositiveFc: return "NonPositiveFc";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::NegativeDiscriminant: return "NegativeDiscriminant";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Grid::Grid(double horizon, int n_steps) : horizon_(horizon), n_steps_(n_steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw Error(ErrorCode::NonPositiveHorizon, "grid horizon must be positive");
  }
  if (n_steps < 2) {
    throw Error(ErrorCode::InvalidGrid, "grid needs at least 2 steps");
  }
}

Eigen::VectorXd Grid::times() const {
  Eigen::VectorXd t(n_nodes());
  for (int k = 0; k < n_nodes(); ++k) t[k] = time(k);
  return t;
}

Eigen::VectorXd Grid::trapezoid_weights() const {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n_nodes(), step());
  w[0] *= 0.5;
  w[n_steps_] *= 0.5;
  return w;
}

TimeFunction::TimeFunction(Variant repr) : repr_(std::move(repr)) {
  if (const auto* g = std::get_if<GridSampled>(&repr_)) {
    if (g->values.size() < 2) {
      throw Error(ErrorCode::InvalidGrid, "grid-sampled function needs at least 2 values");
    }
    if (!(g->horizon > 0.0)) {
      throw Error(ErrorCode::NonPositiveHorizon, "grid-sampled function needs a positive horizon");
    }
  }
}

namespace {

struct Evaluator {
  double t;

  double operator()(const Constant& f) const { return f.value; }
  double operator()(const Affine& f) const { return f.a + f.b * t; }
  double operator()(const Sinusoid& f) const { return f.amp * std::sin(f.omega * t + f.phase); }
  double operator()(const GridSampled& f) const {
    const Eigen::Index n_steps = f.values.size() - 1;
    const double s = std::clamp(t / f.horizon, 0.0, 1.0) * static_cast<double>(n_steps);
    // Node times t = k T / n can land a few ulps off k after the division.
    const double nearest = std::round(s);
    if (std::abs(s - nearest) <= 1e-9) return f.values[static_cast<Eigen::Index>(nearest)];
    const Eigen::Index k = std::min<Eigen::Index>(static_cast<Eigen::Index>(s), n_steps - 1);
    const double frac = s - static_cast<double>(k);
    return f.values[k] + frac * (f.values[k + 1] - f.values[k]);
  }
};

}  // namespace

double TimeFunction::operator()(double t) const { return std::visit(Evaluator{t}, repr_); }

Eigen::VectorXd TimeFunction::on_grid(const Grid& grid) const {
  if (const auto* g = std::get_if<GridSampled>(&repr_)) {
    if (g->values.size() == grid.n_nodes() && g->horizon == grid.horizon()) return g->values;
  }
  Eigen::VectorXd out(grid.n_nodes());
  for (int k = 0; k < grid.n_nodes(); ++k) out[k] = (*this)(grid.time(k));
  return out;
}

TimeFunction TimeFunction::sample(const TimeFunction& f, const Grid& grid) {
  return sampled(f.on_grid(grid), grid.horizon());
}

bool TimeFunction::is_zero() const {
  struct {
    bool operator()(const Constant& f) const { return f.value == 0.0; }
    bool operator()(const Affine& f) const { return f.a == 0.0 && f.b == 0.0; }
    bool operator()(const Sinusoid& f) const { return f.amp == 0.0; }
    bool operator()(const GridSampled& f) const { return (f.values.array() == 0.0).all(); }
  } visitor;
  return std::visit(visitor, repr_);
}

bool operator==(const TimeFunction& lhs, const TimeFunction& rhs) {
  const auto& a = lhs.repr();
  const auto& b = rhs.repr();
  if (a.index() != b.index()) return false;
  return std::visit(
      [&b](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, Constant>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, Affine>) {
          return x.a == y.a && x.b == y.b;
        } else if constexpr (std::is_same_v<T, Sinusoid>) {
          return x.amp == y.amp && x.omega == y.omega && x.phase == y.phase;
        } else {
          return x.horizon == y.horizon && x.values.size() == y.values.size() &&
                 x.values == y.values;
        }
      },
      a);
}

double eval_time_function(const TimeFunction& f, double t, double horizon) {
  if (!(t >= 0.0 && t <= horizon)) {
    std::ostringstream msg;
    msg << "t = " << t << " outside [0, " << horizon << "]";
    throw Error(ErrorCode::OutOfDomain, msg.str());
  }
  return f(t);
}

bool ValidatedParams::operator==(const ValidatedParams& other) const {
  const ModelParams& a = params_;
  const ModelParams& b = other.params_;
  return a.horizon == b.horizon && a.sigma_B == b.sigma_B && a.sigma_W == b.sigma_W &&
         a.r_alpha == b.r_alpha && a.r_beta == b.r_beta && a.r_v == b.r_v && a.t_v == b.t_v &&
         a.vbar_T == b.vbar_T && a.vbar == b.vbar && a.lambda == b.lambda && a.v0 == b.v0 &&
         a.y0 == b.y0;
}

ValidatedParams validate_params(const ModelParams& p, ValidationOptions options) {
  if (!(p.horizon > 0.0) || !std::isfinite(p.horizon)) {
    throw Error(ErrorCode::NonPositiveHorizon, "T must be positive");
  }
  auto positive = [](double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw Error(ErrorCode::NonPositiveWeight, std::string(name) + " must be positive");
    }
  };
  if (options.allow_zero_noise) {
    if (!(p.sigma_B >= 0.0) || !(p.sigma_W >= 0.0)) {
      throw Error(ErrorCode::NonPositiveWeight, "volatilities must be non-negative");
    }
  } else {
    positive(p.sigma_B, "sigma_B");
    positive(p.sigma_W, "sigma_W");
  }
  positive(p.r_alpha, "r_alpha");
  positive(p.r_beta, "r_beta");
  positive(p.r_v, "r_v");
  positive(p.t_v, "t_v");
  for (double x : {p.vbar_T, p.lambda, p.v0, p.y0}) {
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "non-finite parameter");
  }
  if (p.lambda < 0.0 || p.lambda > p.lambda_max()) {
    std::ostringstream msg;
    msg << "lambda = " << p.lambda << " outside [0, r_beta*sigma_W^2 = " << p.lambda_max() << "]";
    throw Error(ErrorCode::LambdaOutOfRange, msg.str());
  }
  return ValidatedParams(p);
}

}  // namespace shtgame
