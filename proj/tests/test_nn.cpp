#include <doctest.h>

#include <cmath>
#include <random>

#include "shtgame/nn.hpp"
#include "support.hpp"

using namespace shtgame;

namespace {

const Grid kGrid(0.1, 200);

RedConfig config_for(PenaltyKind penalty, double lambda_reg) {
  RedConfig c;
  c.penalty = penalty;
  c.lambda_reg = lambda_reg;
  c.solver = SolverKind::Nn;
  return c;
}

NnSettings small_net() {
  NnSettings s;
  s.hidden_width = 6;
  s.hidden_layers = 2;
  return s;
}

}  // namespace

TEST_CASE("zero network outputs the neutral value") {
  const Eigen::VectorXd ts = kGrid.times();
  CHECK(MlpNetwork::zeros(NnSettings{}, false, 0.1).forward(ts).isZero(0.0));
  CHECK(MlpNetwork::zeros(NnSettings{}, true, 0.1).forward(ts).isOnes(0.0));
}

TEST_CASE("parameter round trip") {
  MlpNetwork net = MlpNetwork::random(NnSettings{}, false, 0.1, 3);
  CHECK(net.n_parameters() == 32 + 32 + 2 * (32 * 32 + 32) + 33);
  const Eigen::VectorXd theta = net.parameters();
  MlpNetwork other = MlpNetwork::zeros(NnSettings{}, false, 0.1);
  other.set_parameters(theta);
  CHECK(other.parameters() == theta);
  CHECK(other.forward(kGrid.times()) == net.forward(kGrid.times()));
  CHECK(nn_forward(net, 0.05) == net(0.05));
}

TEST_CASE("network output is Lipschitz in time") {
  const MlpNetwork net = MlpNetwork::random(NnSettings{}, false, 0.1, 11);
  MlpNetwork copy = net;
  double bound = 1.0 / 0.1;
  for (int l = 0; l < copy.n_layers(); ++l) bound *= copy.weight(l).operatorNorm();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 0.1);
  for (int i = 0; i < 200; ++i) {
    const double a = u(rng), b = u(rng);
    if (a == b) continue;
    CHECK(std::abs(net(a) - net(b)) <= bound * std::abs(a - b) * (1.0 + 1e-12));
  }
}

TEST_CASE("backward pass matches finite differences") {
  for (bool exp_output : {false, true}) {
    MlpNetwork net = MlpNetwork::random(small_net(), exp_output, 0.1, 7);
    const Eigen::VectorXd ts = Eigen::VectorXd::LinSpaced(9, 0.0, 0.1);
    const Eigen::VectorXd g = Eigen::VectorXd::LinSpaced(9, -1.0, 2.0);
    const Eigen::VectorXd analytic = net.backward(ts, g);
    const Eigen::VectorXd theta = net.parameters();
    Eigen::VectorXd fd(theta.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      Eigen::VectorXd p = theta;
      p[i] += 1e-6;
      net.set_parameters(p);
      const double up = g.dot(net.forward(ts));
      p[i] -= 2e-6;
      net.set_parameters(p);
      fd[i] = (up - g.dot(net.forward(ts))) / 2e-6;
    }
    net.set_parameters(theta);
    CHECK((analytic - fd).norm() <= 1e-6 * std::max(1.0, fd.norm()));
  }
}

TEST_CASE("discrete objective gradient is exact") {
  const ValidatedParams vp = validate_params(testing::pattern_params());
  const Grid grid(0.1, 40);
  const Eigen::VectorXd f = (0.5 + 3.0 * grid.times().array()).matrix();
  for (auto kind : {PenaltyKind::Quadratic, PenaltyKind::Logarithmic}) {
    const RedConfig c = config_for(kind, 0.7);
    const DiscreteObjective obj = euler_objective(vp, f, c, grid);
    Eigen::VectorXd fd(grid.n_nodes());
    for (int k = 0; k < grid.n_nodes(); ++k) {
      Eigen::VectorXd g = f;
      g[k] += 1e-6;
      const double up = euler_objective(vp, g, c, grid, false).value;
      g[k] -= 2e-6;
      fd[k] = (up - euler_objective(vp, g, c, grid, false).value) / 2e-6;
    }
    CHECK((obj.gradient - fd).norm() <= 1e-6 * fd.norm());
  }
}

TEST_CASE("discrete objective approaches the continuous one") {
  const ValidatedParams vp = validate_params(testing::pattern_params());
  const RedConfig c = config_for(PenaltyKind::Quadratic, 1.0);
  const Grid fine(0.1, 2000);
  const Eigen::VectorXd f = (0.5 + 3.0 * fine.times().array()).matrix();
  const double euler = euler_objective(vp, f, c, fine, false).value;
  const double rk = red_objective(vp, f, c, fine);
  CHECK(std::abs(euler - rk) < 1e-2 * std::abs(rk));
}

TEST_CASE("parameter gradient matches finite differences") {
  const ValidatedParams vp = validate_params(testing::pattern_params());
  const Grid grid(0.1, 50);
  for (auto kind : {PenaltyKind::Quadratic, PenaltyKind::Logarithmic}) {
    const RedConfig c = config_for(kind, 1.0);
    MlpNetwork net = MlpNetwork::random(NnSettings{}, kind == PenaltyKind::Logarithmic, 0.1, 17);
    const Eigen::VectorXd g = nn_gradient(net, vp, c, grid);
    const Eigen::VectorXd theta = net.parameters();
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<Eigen::Index> pick(0, theta.size() - 1);
    for (int draw = 0; draw < 20; ++draw) {
      const Eigen::Index i = pick(rng);
      Eigen::VectorXd p = theta;
      p[i] += 1e-6;
      net.set_parameters(p);
      const double up = euler_objective(vp, net.forward(grid.times()), c, grid, false).value;
      p[i] -= 2e-6;
      net.set_parameters(p);
      const double fd = (up - euler_objective(vp, net.forward(grid.times()), c, grid, false).value) / 2e-6;
      net.set_parameters(theta);
      CHECK(std::abs(g[i] - fd) <= 1e-4 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("statistic term has no gradient at the zero pattern") {
  const ValidatedParams vp = validate_params(testing::pattern_params());
  const RedConfig c = config_for(PenaltyKind::Quadratic, 1.0);
  const MlpNetwork net = MlpNetwork::zeros(NnSettings{}, false, 0.1);
  const Eigen::VectorXd g = nn_gradient(net, vp, c, kGrid, ObjectiveTerms{true, false});
  CHECK(g.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("penalty-only gradient matches the closed form") {
  const ValidatedParams vp = validate_params(testing::pattern_params());
  const double scale = 1.0 / (0.1 * 0.1);
  const Eigen::VectorXd w = kGrid.trapezoid_weights();
  for (auto kind : {PenaltyKind::Quadratic, PenaltyKind::Logarithmic}) {
    const RedConfig c = config_for(kind, 1.0);
    const MlpNetwork net = MlpNetwork::random(NnSettings{}, kind == PenaltyKind::Logarithmic, 0.1, 29);
    const Eigen::VectorXd ts = kGrid.times();
    const Eigen::VectorXd f = net.forward(ts);
    Eigen::VectorXd df(kGrid.n_nodes());
    for (int k = 0; k < kGrid.n_nodes(); ++k) {
      const double d = kind == PenaltyKind::Quadratic ? 2.0 * (f[k] - 1.0) : -1.0 / f[k];
      df[k] = scale * w[k] * d;
    }
    const Eigen::VectorXd expected = net.backward(ts, df);
    const Eigen::VectorXd g = nn_gradient(net, vp, c, kGrid, ObjectiveTerms{false, true});
    CHECK((g - expected).cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, expected.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("Adam minimizes a quadratic bowl") {
  Eigen::VectorXd x = Eigen::VectorXd::Constant(3, 2.0);
  Adam adam(3, 0.05);
  for (int i = 0; i < 2000; ++i) adam.step(x, 2.0 * x);
  CHECK(x.norm() < 1e-2);
}

TEST_CASE("first Adam step has the learning-rate magnitude") {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
  Adam adam(2, 1e-3);
  adam.step(x, Eigen::Vector2d(5.0, -0.1));
  CHECK(x[0] == doctest::Approx(-1e-3).epsilon(1e-4));
  CHECK(x[1] == doctest::Approx(1e-3).epsilon(1e-3));
}

TEST_CASE("network solver reaches the reported optimum") {
  const ValidatedParams vp = validate_params(testing::pattern_params());
  const OptimizationReport r = nn_solve(vp, config_for(PenaltyKind::Quadratic, 0.1), kGrid, 0);
  CHECK(std::abs(r.final_expected_log_lr - 0.04) <= 0.05);
  CHECK(r.objective_history.back() < r.objective_history.front());
  CHECK(r.iterations == NnSettings{}.epochs);
}

TEST_CASE("network solver agrees with the sweep") {
  const ValidatedParams vp = validate_params(testing::pattern_params());
  RedConfig c = config_for(PenaltyKind::Quadratic, 1.0);
  const OptimizationReport nn = nn_solve(vp, c, kGrid, 0);
  c.solver = SolverKind::Fbs;
  const OptimizationReport fbs = fbs_solve(vp, c, kGrid);
  CHECK(std::abs(nn.final_objective - fbs.final_objective) <= 0.1 * std::abs(fbs.final_objective));
}

TEST_CASE("network solver is deterministic for a seed") {
  const ValidatedParams vp = validate_params(testing::pattern_params());
  RedConfig c = config_for(PenaltyKind::Logarithmic, 1.0);
  c.nn.epochs = 20;
  const OptimizationReport a = nn_solve(vp, c, kGrid, 42);
  const OptimizationReport b = nn_solve(vp, c, kGrid, 42);
  CHECK(a.f_c.on_grid(kGrid) == b.f_c.on_grid(kGrid));
  CHECK(a.objective_history == b.objective_history);
  CHECK((a.f_c.on_grid(kGrid).array() > 0.0).all());
}
