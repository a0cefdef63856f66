#include "shtgame/controls.hpp"

#include <algorithm>

namespace shtgame {

namespace {

double lerp_curve(const Eigen::VectorXd& curve, const Grid& grid, double t) {
  const int n = grid.n_steps();
  const double s = std::clamp(t / grid.horizon(), 0.0, 1.0) * n;
  const int k = std::min(static_cast<int>(s), n - 1);
  const double frac = s - k;
  if (frac == 0.0) return curve[k];
  return curve[k] + frac * (curve[k + 1] - curve[k]);
}

void require_in_domain(double t, const Grid& grid) {
  if (!(t >= 0.0 && t <= grid.horizon())) {
    throw Error(ErrorCode::OutOfDomain, "feedback queried outside [0, T]");
  }
}

}  // namespace

FeedbackPolicy::FeedbackPolicy(ValidatedParams params, Pattern pattern, ValueCoeffs coeffs)
    : params_(std::move(params)), pattern_(std::move(pattern)), coeffs_(std::move(coeffs)) {
  const Grid& g = coeffs_.grid;
  for (const Eigen::VectorXd* c : {&coeffs_.mu, &coeffs_.eta, &coeffs_.rho, &coeffs_.gamma,
                                   &coeffs_.theta, &coeffs_.xi}) {
    if (c->size() != g.n_nodes()) {
      throw Error(ErrorCode::GridMismatch, "coefficient curve length differs from grid");
    }
  }
  if (g.horizon() != params_->horizon) {
    throw Error(ErrorCode::GridMismatch, "coefficient grid horizon differs from model horizon");
  }
  fc_nodes_ = pattern_.f_c.on_grid(g);
  fd_nodes_ = pattern_.f_d.on_grid(g);
}

FeedbackPolicy FeedbackPolicy::solve(const ValidatedParams& params, const Pattern& pattern,
                                     const Grid& grid) {
  return FeedbackPolicy(params, pattern, solve_value_coeffs(params, pattern, grid));
}

AffineFeedback FeedbackPolicy::alpha_from(double mu, double eta, double gamma) const {
  const double ra = params_->r_alpha;
  return {-mu / ra, -eta / ra, -gamma / ra};
}

AffineFeedback FeedbackPolicy::beta_from(double eta, double rho, double theta, double fc,
                                         double fd) const {
  const ModelParams& p = params_.get();
  const double k = p.lambda / (p.r_beta * p.sigma_W * p.sigma_W);
  if (p.lambda == 0.0) {
    // sigma_W may be zero in degenerate test setups; the misdirection terms vanish anyway.
    return {-eta / p.r_beta, -rho / p.r_beta, -theta / p.r_beta};
  }
  return {-eta / p.r_beta, k * fc - rho / p.r_beta, k * fd - theta / p.r_beta};
}

AffineFeedback FeedbackPolicy::alpha_at_node(int k) const {
  return alpha_from(coeffs_.mu[k], coeffs_.eta[k], coeffs_.gamma[k]);
}

AffineFeedback FeedbackPolicy::beta_at_node(int k) const {
  return beta_from(coeffs_.eta[k], coeffs_.rho[k], coeffs_.theta[k], fc_nodes_[k], fd_nodes_[k]);
}

AffineFeedback FeedbackPolicy::alpha_at(double t) const {
  const Grid& g = coeffs_.grid;
  require_in_domain(t, g);
  return alpha_from(lerp_curve(coeffs_.mu, g, t), lerp_curve(coeffs_.eta, g, t),
                    lerp_curve(coeffs_.gamma, g, t));
}

AffineFeedback FeedbackPolicy::beta_at(double t) const {
  const Grid& g = coeffs_.grid;
  require_in_domain(t, g);
  const double fc = pattern_.f_c(t);
  const double fd = pattern_.f_d(t);
  return beta_from(lerp_curve(coeffs_.eta, g, t), lerp_curve(coeffs_.rho, g, t),
                   lerp_curve(coeffs_.theta, g, t), fc, fd);
}

double optimal_alpha(const FeedbackPolicy& policy, double t, double v, double y) {
  return policy.alpha_at(t)(v, y);
}

double optimal_beta(const FeedbackPolicy& policy, double t, double v, double y) {
  return policy.beta_at(t)(v, y);
}

}  // namespace shtgame
