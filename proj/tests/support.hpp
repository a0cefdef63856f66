#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "shtgame/model.hpp"

namespace shtgame::testing {

// T = 1 velocity-tracking setup.
inline ModelParams tracking_params(double lambda) {
  ModelParams p;
  p.horizon = 1.0;
  p.sigma_B = 0.25;
  p.sigma_W = 0.25;
  p.r_alpha = 1.0;
  p.r_beta = 10.0;
  p.r_v = 1.0;
  p.t_v = 1.0;
  p.vbar_T = 1.0;
  p.vbar = TimeFunction::affine(2.0, -1.0);
  p.lambda = lambda;
  p.v0 = 2.0;
  p.y0 = 4.0;
  return p;
}

// T = 0.1 pattern-optimization setup.
inline ModelParams pattern_params() {
  ModelParams p;
  p.horizon = 0.1;
  p.sigma_B = 0.1;
  p.sigma_W = 0.1;
  p.r_alpha = 1.0;
  p.r_beta = 10.0;
  p.r_v = 1.0;
  p.t_v = 1.0;
  p.vbar_T = 0.0;
  p.vbar = TimeFunction::constant(0.0);
  p.lambda = 0.1;
  p.v0 = 1.0;
  p.y0 = 2.0;
  return p;
}

// Multi-round game setup.
inline ModelParams game_params() {
  ModelParams p = pattern_params();
  p.sigma_B = 0.15;
  p.sigma_W = 0.15;
  p.r_alpha = 2.0;
  p.lambda = 0.2;
  return p;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random valid parameters; lambda uniform on [0, lambda_max].
inline ModelParams random_params(std::mt19937_64& rng, bool simplified = false) {
  ModelParams p;
  p.horizon = uniform(rng, 0.1, 1.0);
  p.sigma_B = uniform(rng, 0.05, 0.4);
  p.sigma_W = uniform(rng, 0.05, 0.4);
  p.r_alpha = uniform(rng, 0.5, 3.0);
  p.r_beta = uniform(rng, 1.0, 10.0);
  p.r_v = uniform(rng, 0.2, 2.0);
  p.t_v = uniform(rng, 0.2, 2.0);
  p.v0 = uniform(rng, -2.0, 2.0);
  p.y0 = uniform(rng, -2.0, 4.0);
  if (!simplified) {
    p.vbar_T = uniform(rng, -1.0, 1.0);
    p.vbar = TimeFunction::affine(uniform(rng, -2.0, 2.0), uniform(rng, -1.0, 1.0));
  }
  p.lambda = uniform(rng, 0.0, 1.0) * p.lambda_max();
  return p;
}

inline TimeFunction random_time_function(std::mt19937_64& rng) {
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0: return TimeFunction::constant(uniform(rng, -2.0, 2.0));
    case 1: return TimeFunction::affine(uniform(rng, -2.0, 2.0), uniform(rng, -5.0, 5.0));
    default:
      return TimeFunction::sinusoid(uniform(rng, 0.1, 2.0), uniform(rng, 1.0, 20.0),
                                    uniform(rng, 0.0, 2.0 * std::numbers::pi));
  }
}

inline Pattern random_pattern(std::mt19937_64& rng) {
  return {random_time_function(rng), random_time_function(rng)};
}

}  // namespace shtgame::testing
