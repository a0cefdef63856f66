#include <doctest.h>

#include <cmath>

#include "shtgame/moments.hpp"
#include "shtgame/sde.hpp"
#include "support.hpp"

using namespace shtgame;

TEST_CASE("noiseless cascade with unit damping") {
  ModelParams p = testing::pattern_params();
  p.horizon = 1.0;
  p.sigma_B = p.sigma_W = 0.0;
  p.lambda = 0.0;
  p.v0 = 1.0;
  p.y0 = 0.0;
  const ValidatedParams vp = validate_params(p, {.allow_zero_noise = true});
  const Grid g(1.0, 500);
  ValueCoeffs c = ValueCoeffs::zeros(g);
  c.mu.setOnes();
  const MomentCurves m = solve_moments(vp, c, TimeFunction::constant(0.0), g);
  for (int k = 0; k < g.n_nodes(); ++k) {
    // h20' = -2 h20, h11' = h20 - h11, h02' = 2 h11
    const double e1 = std::exp(-g.time(k)), e2 = e1 * e1;
    CHECK(std::abs(m.h20[k] - e2) < 1e-10);
    CHECK(std::abs(m.h11[k] - (e1 - e2)) < 1e-10);
    CHECK(std::abs(m.h02[k] - (2.0 * (1.0 - e1) - (1.0 - e2))) < 1e-10);
  }
}

TEST_CASE("no noise and no initial energy means no moments") {
  ModelParams p = testing::pattern_params();
  p.sigma_B = p.sigma_W = 0.0;
  p.lambda = 0.0;
  p.v0 = p.y0 = 0.0;
  const ValidatedParams vp = validate_params(p, {.allow_zero_noise = true});
  const Grid g(p.horizon, 50);
  const ValueCoeffs c = solve_value_coeffs(vp, Pattern{}, g);
  const MomentCurves m = solve_moments(vp, c, TimeFunction::constant(1.0), g);
  CHECK(m.h20.cwiseAbs().maxCoeff() == 0.0);
  CHECK(m.h11.cwiseAbs().maxCoeff() == 0.0);
  CHECK(m.h02.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("initial moments") {
  const ModelParams p = testing::pattern_params();
  const ValidatedParams vp = validate_params(p);
  const Grid g(p.horizon, 200);
  const TimeFunction fc = TimeFunction::constant(1.0);
  const MomentCurves m = solve_moments(vp, solve_value_coeffs(vp, Pattern{fc, {}}, g), fc, g);
  CHECK(m.h20[0] == 1.0);
  CHECK(m.h11[0] == 2.0);
  CHECK(m.h02[0] == 4.0);
}

TEST_CASE("expected log likelihood ratio of the unit pattern") {
  const ModelParams p = testing::pattern_params();
  const ValidatedParams vp = validate_params(p);
  const Grid g(p.horizon, 200);
  const TimeFunction fc = TimeFunction::constant(1.0);
  const ValueCoeffs c = solve_value_coeffs(vp, Pattern{fc, {}}, g);
  const double e = expected_log_lr(vp, c, fc, solve_moments(vp, c, fc, g), g);
  CHECK(std::abs(e - 23.21) / 23.21 < 0.01);
}

TEST_CASE("zero pattern has zero expected statistic") {
  const ValidatedParams vp = validate_params(testing::pattern_params());
  const Grid g(0.1, 100);
  const TimeFunction zero = TimeFunction::constant(0.0);
  const ValueCoeffs c = solve_value_coeffs(vp, Pattern{}, g);
  CHECK(expected_log_lr(vp, c, zero, solve_moments(vp, c, zero, g), g) == 0.0);
}

TEST_CASE("full intensity reduces the statistic to a weighted h02 integral") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 5; ++i) {
    ModelParams p = testing::random_params(rng, true);
    p.lambda = p.lambda_max();
    const ValidatedParams vp = validate_params(p);
    const Grid g(p.horizon, 200);
    const TimeFunction fc = testing::random_time_function(rng);
    const ValueCoeffs c = solve_value_coeffs(vp, Pattern{fc, {}}, g);
    const MomentCurves m = solve_moments(vp, c, fc, g);
    const Eigen::VectorXd f = fc.on_grid(g);
    const double s2 = p.sigma_W * p.sigma_W;
    const double expected = g.trapezoid_weights().dot(Eigen::VectorXd(m.h02.cwiseProduct(f.cwiseAbs2()))) / (2.0 * s2);
    const double e = expected_log_lr(vp, c, fc, m, g);
    CHECK(e == doctest::Approx(expected).epsilon(1e-10));
    if (!fc.is_zero()) CHECK(e > 0.0);
  }
}

TEST_CASE("moment curves satisfy Cauchy-Schwarz") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 20; ++i) {
    const ModelParams p = testing::random_params(rng, true);
    const ValidatedParams vp = validate_params(p);
    const Grid g(p.horizon, 200);
    const TimeFunction fc = testing::random_time_function(rng);
    const MomentCurves m = solve_moments(vp, solve_value_coeffs(vp, Pattern{fc, {}}, g), fc, g);
    for (int k = 0; k < g.n_nodes(); ++k) {
      CHECK(m.h20[k] >= 0.0);
      CHECK(m.h02[k] >= 0.0);
      CHECK(m.h11[k] * m.h11[k] <= m.h20[k] * m.h02[k] + 1e-6);
    }
  }
}

TEST_CASE("closed-form statistic agrees with simulation") {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 2; ++i) {
    ModelParams p = testing::random_params(rng, true);
    p.horizon = std::min(p.horizon, 0.5);
    const ValidatedParams vp = validate_params(p);
    const Grid g(p.horizon, 1000);
    const TimeFunction fc = testing::random_time_function(rng);
    const Pattern pattern{fc, {}};
    const FeedbackPolicy policy = FeedbackPolicy::solve(vp, pattern, g);
    const MomentCurves m = solve_moments(vp, policy.coeffs(), fc, g);
    McOptions o;
    o.n_paths = 10000;
    o.master_seed = 500 + i;
    o.threads = 4;
    const McSummary s = monte_carlo(policy, pattern, g, o);
    CHECK(std::abs(s.mean_log_lr - expected_log_lr(vp, policy.coeffs(), fc, m, g)) <= 3.0 * s.se_log_lr);

    const std::vector<int> nodes{200, 400, 600, 800, 1000};
    const MomentSample ms = monte_carlo_moments(policy, g, nodes, o);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const Eigen::Index r = static_cast<Eigen::Index>(j);
      CHECK(std::abs(ms.mean(r, 0) - m.h20[nodes[j]]) <= 3.0 * ms.se(r, 0));
      CHECK(std::abs(ms.mean(r, 1) - m.h11[nodes[j]]) <= 3.0 * ms.se(r, 1));
      CHECK(std::abs(ms.mean(r, 2) - m.h02[nodes[j]]) <= 3.0 * ms.se(r, 2));
    }
  }
}

TEST_CASE("mismatched grids are rejected") {
  const ValidatedParams vp = validate_params(testing::pattern_params());
  const TimeFunction fc = TimeFunction::constant(1.0);
  const ValueCoeffs c = solve_value_coeffs(vp, Pattern{fc, {}}, Grid(0.1, 100));
  CHECK_THROWS_AS(solve_moments(vp, c, fc, Grid(0.1, 50)), Error);
}
