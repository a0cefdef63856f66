#include <doctest.h>

#include "shtgame/controls.hpp"
#include "support.hpp"

using namespace shtgame;

namespace {

FeedbackPolicy hand_policy(double mu, double gamma) {
  const ModelParams p = testing::pattern_params();
  const Grid g(p.horizon, 10);
  ValueCoeffs c = ValueCoeffs::zeros(g);
  c.mu.setConstant(mu);
  c.gamma.setConstant(gamma);
  return FeedbackPolicy(validate_params(p), Pattern{}, c);
}

}  // namespace

TEST_CASE("alpha examples") {
  const FeedbackPolicy base = hand_policy(1.0, 0.0);
  CHECK(optimal_alpha(base, 0.03, 2.0, 5.0) == -2.0);
  const FeedbackPolicy offset = hand_policy(1.0, 0.4);
  CHECK(optimal_alpha(offset, 0.05, 0.0, 0.0) == doctest::Approx(-0.4));
}

TEST_CASE("alpha = -v with unit weights and zero targets") {
  const ModelParams p = testing::pattern_params();
  const FeedbackPolicy policy = FeedbackPolicy::solve(validate_params(p), Pattern{}, Grid(p.horizon, 200));
  for (double t : {0.0, 0.0123, 0.05, 0.1}) {
    CHECK(optimal_alpha(policy, t, 1.7, -3.0) == doctest::Approx(-1.7).epsilon(1e-13));
  }
}

TEST_CASE("beta vanishes without misdirection") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 5; ++i) {
    ModelParams p = testing::random_params(rng);
    const Grid g(p.horizon, 100);
    const FeedbackPolicy zero_pattern = FeedbackPolicy::solve(validate_params(p), Pattern{}, g);
    p.lambda = 0.0;
    const FeedbackPolicy zero_lambda = FeedbackPolicy::solve(validate_params(p), testing::random_pattern(rng), g);
    for (int q = 0; q < 20; ++q) {
      const double t = testing::uniform(rng, 0.0, p.horizon);
      const double v = testing::uniform(rng, -5, 5), y = testing::uniform(rng, -5, 5);
      CHECK(optimal_beta(zero_pattern, t, v, y) == 0.0);
      CHECK(optimal_beta(zero_lambda, t, v, y) == 0.0);
    }
  }
}

TEST_CASE("beta follows the pattern at full intensity") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 5; ++i) {
    ModelParams p = testing::random_params(rng);
    p.lambda = p.lambda_max();
    const Grid g(p.horizon, 100);
    const Pattern pattern = testing::random_pattern(rng);
    const FeedbackPolicy policy = FeedbackPolicy::solve(validate_params(p), pattern, g);
    for (int k = 0; k < g.n_nodes(); ++k) {
      const AffineFeedback b = policy.beta_at_node(k);
      CHECK(std::abs(b.v_coeff) < 1e-8);
      CHECK(std::abs(b.y_coeff - pattern.f_c(g.time(k))) < 1e-8);
      CHECK(std::abs(b.offset - pattern.f_d(g.time(k))) < 1e-8);
    }
  }
}

TEST_CASE("controls are affine in the state") {
  std::mt19937_64 rng(23);
  const ModelParams p = testing::random_params(rng);
  const FeedbackPolicy policy =
      FeedbackPolicy::solve(validate_params(p), testing::random_pattern(rng), Grid(p.horizon, 100));
  const double t = 0.37 * p.horizon, v = 0.8, y = -1.1, d = 0.25;
  for (auto control : {optimal_alpha, optimal_beta}) {
    const double dvv = control(policy, t, v + d, y) - 2 * control(policy, t, v, y) + control(policy, t, v - d, y);
    const double dyy = control(policy, t, v, y + d) - 2 * control(policy, t, v, y) + control(policy, t, v, y - d);
    CHECK(std::abs(dvv) < 1e-12);
    CHECK(std::abs(dyy) < 1e-12);
  }
}

TEST_CASE("off-grid queries interpolate node values") {
  std::mt19937_64 rng(24);
  const ModelParams p = testing::random_params(rng);
  const Grid g(p.horizon, 50);
  const FeedbackPolicy policy = FeedbackPolicy::solve(validate_params(p), testing::random_pattern(rng), g);
  const AffineFeedback a0 = policy.alpha_at_node(10), a1 = policy.alpha_at_node(11);
  const AffineFeedback mid = policy.alpha_at(0.5 * (g.time(10) + g.time(11)));
  CHECK(mid.v_coeff == doctest::Approx(0.5 * (a0.v_coeff + a1.v_coeff)));
  CHECK(mid.offset == doctest::Approx(0.5 * (a0.offset + a1.offset)));
}

TEST_CASE("queries outside [0, T] are rejected") {
  const FeedbackPolicy policy = hand_policy(1.0, 0.0);
  try {
    optimal_alpha(policy, 0.2, 0.0, 0.0);
    FAIL("expected OutOfDomain");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfDomain);
  }
  CHECK_THROWS_AS(optimal_beta(policy, -0.1, 0.0, 0.0), Error);
}

TEST_CASE("mismatched curve lengths are rejected") {
  const ModelParams p = testing::pattern_params();
  ValueCoeffs c = ValueCoeffs::zeros(Grid(p.horizon, 10));
  c.eta.resize(5);
  CHECK_THROWS_AS(FeedbackPolicy(validate_params(p), Pattern{}, c), Error);
}
