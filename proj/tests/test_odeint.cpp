#include <doctest.h>

#include <cmath>

#include "shtgame/odeint.hpp"

using namespace shtgame;
using Vec = StateVector<double>;

namespace {

Vec scalar(double x) { return Vec::Constant(1, x); }

OdeSystem<double> linear(double a, double b) {
  return {1, [a, b](double, const Vec& x) { return Vec(a * x.array() + b); }};
}

// Scalar Riccati mu' = mu^2 / r_alpha - r_v.
OdeSystem<double> riccati(double r_alpha, double r_v) {
  return {1, [=](double, const Vec& x) { return Vec(x.array().square() / r_alpha - r_v); }};
}

}  // namespace

TEST_CASE("zero dynamics stay constant") {
  const Grid g(2.0, 13);
  const OdeSystem<double> zero{1, [](double, const Vec&) { return Vec::Zero(1); }};
  const auto fwd = integrate_forward(zero, scalar(3.0), g);
  const auto bwd = integrate_backward(zero, scalar(1.5), g);
  for (int k = 0; k < g.n_nodes(); ++k) {
    CHECK(fwd(k, 0) == 3.0);
    CHECK(bwd(k, 0) == 1.5);
  }
}

TEST_CASE("exponential growth matches e") {
  const auto x = integrate_forward(linear(1.0, 0.0), scalar(1.0), Grid(1.0, 1000));
  CHECK(std::abs(x(1000, 0) - std::exp(1.0)) < 1e-10);
}

TEST_CASE("relaxation equation matches its closed form") {
  // x' = -2x + sigma^2
  const double s2 = 0.0625, x0 = 4.0;
  const Grid g(1.0, 1000);
  const auto x = integrate_forward(linear(-2.0, s2), scalar(x0), g);
  for (int k = 0; k < g.n_nodes(); ++k) {
    const double t = g.time(k);
    CHECK(std::abs(x(k, 0) - (std::exp(-2.0 * t) * (x0 - s2 / 2.0) + s2 / 2.0)) < 1e-10);
  }
}

TEST_CASE("backward Riccati with an equilibrium terminal value stays put") {
  const Grid g(1.0, 100);
  const auto mu = integrate_backward(riccati(1.0, 1.0), scalar(1.0), g);
  for (int k = 0; k < g.n_nodes(); ++k) CHECK(mu(k, 0) == 1.0);
}

TEST_CASE("backward Riccati matches the tanh solution") {
  const Grid g(1.0, 1000);
  const auto mu = integrate_backward(riccati(1.0, 1.0), scalar(0.5), g);
  CHECK(mu(1000, 0) == 0.5);
  for (int k = 0; k < g.n_nodes(); ++k) {
    const double exact = std::tanh(std::atanh(0.5) + (1.0 - g.time(k)));
    CHECK(std::abs(mu(k, 0) - exact) < 1e-8);
  }
}

TEST_CASE("fourth-order convergence under step halving") {
  auto max_err = [](int n) {
    const Grid g(1.0, n);
    const auto mu = integrate_backward(riccati(1.0, 1.0), scalar(0.5), g);
    double err = 0.0;
    for (int k = 0; k < g.n_nodes(); ++k) {
      err = std::max(err, std::abs(mu(k, 0) - std::tanh(std::atanh(0.5) + 1.0 - g.time(k))));
    }
    return err;
  };
  const double ratio = max_err(20) / max_err(40);
  CHECK(ratio > 14.0);
  CHECK(ratio < 18.0);
}

TEST_CASE("backward then forward round trip") {
  const Grid g(1.0, 400);
  const OdeSystem<double> rot{2, [](double t, const Vec& x) {
                                Vec d(2);
                                d << x[1], -x[0] + 0.3 * std::sin(t);
                                return d;
                              }};
  Vec xT(2);
  xT << 0.7, -1.2;
  const auto back = integrate_backward(rot, xT, g);
  const auto fwd = integrate_forward(rot, Vec(back.row(0).transpose()), g);
  CHECK((fwd.row(400).transpose() - xT).norm() / xT.norm() < 1e-9);
}

TEST_CASE("integrators are generic in the scalar type") {
  const OdeSystem<float> f{1, [](float, const StateVector<float>& x) { return StateVector<float>(x); }};
  const auto x = integrate_forward(f, StateVector<float>(StateVector<float>::Constant(1, 1.0f)), Grid(1.0, 100));
  CHECK(std::abs(x(100, 0) - std::exp(1.0f)) < 1e-5f);
}

TEST_CASE("blow-up is reported as NonFiniteState") {
  const OdeSystem<double> blow{1, [](double, const Vec& x) { return Vec(x.array().square()); }};
  try {
    integrate_forward(blow, scalar(10.0), Grid(1.0, 50));
    FAIL("expected NonFiniteState");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteState);
  }
}

TEST_CASE("dimension mismatches are rejected") {
  const OdeSystem<double> bad{2, [](double, const Vec&) { return Vec::Zero(3); }};
  CHECK_THROWS_AS(integrate_forward(bad, Vec(Vec::Zero(2)), Grid(1.0, 4)), Error);
  CHECK_THROWS_AS(integrate_forward(bad, Vec(Vec::Zero(1)), Grid(1.0, 4)), Error);
}
