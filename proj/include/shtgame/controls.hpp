#pragma once

#include "shtgame/model.hpp"
#include "shtgame/riccati.hpp"

namespace shtgame {

/// Affine feedback u = v_coeff * v + y_coeff * y + offset.
struct AffineFeedback {
  double v_coeff = 0.0;
  double y_coeff = 0.0;
  double offset = 0.0;

  double operator()(double v, double y) const { return v_coeff * v + y_coeff * y + offset; }
};

/// The blue team's optimal feedback laws built from solved coefficient curves.
class FeedbackPolicy {
 public:
  FeedbackPolicy(ValidatedParams params, Pattern pattern, ValueCoeffs coeffs);

  /// Solves the coefficient system and wraps the result.
  static FeedbackPolicy solve(const ValidatedParams& params, const Pattern& pattern,
                              const Grid& grid);

  const ModelParams& params() const { return params_.get(); }
  const ValidatedParams& validated() const { return params_; }
  const Pattern& pattern() const { return pattern_; }
  const ValueCoeffs& coeffs() const { return coeffs_; }
  const Grid& grid() const { return coeffs_.grid; }

  /// Feedback laws at grid node k, no interpolation.
  AffineFeedback alpha_at_node(int k) const;
  AffineFeedback beta_at_node(int k) const;

  /// Feedback laws at arbitrary t in [0, T]; coefficients interpolated linearly.
  AffineFeedback alpha_at(double t) const;
  AffineFeedback beta_at(double t) const;

 private:
  AffineFeedback alpha_from(double mu, double eta, double gamma) const;
  AffineFeedback beta_from(double eta, double rho, double theta, double fc, double fd) const;

  ValidatedParams params_;
  Pattern pattern_;
  ValueCoeffs coeffs_;
  Eigen::VectorXd fc_nodes_, fd_nodes_;
};

double optimal_alpha(const FeedbackPolicy& policy, double t, double v, double y);
double optimal_beta(const FeedbackPolicy& policy, double t, double v, double y);

}  // namespace shtgame
