#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "shtgame/model.hpp"
#include "shtgame/red.hpp"

namespace shtgame::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a command needs. Defaults reproduce the velocity-tracking experiment
/// (T = 1, sigma = 0.25, lambda = 0.05, f_c = sin(10 pi t), 1000 steps).
struct RunConfig {
  ModelParams model;
  int n_steps = 1000;
  Pattern pattern;
  RedConfig red;
  int mc_paths = 10000;
  int threads = 1;
  int sample_paths = 3;
  int n_rounds = 3;
  std::uint64_t seed = 0;
};

RunConfig default_config();

/// Applies a flat document of dotted keys on top of the defaults. Unknown keys, wrong
/// types and out-of-range settings raise ConfigError.
///
/// Time functions are a number (constant) or an object with "type" one of
///   constant {value}, affine {a, b}, sinusoid {amp, omega, phase}, sampled {values}.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

Grid make_grid(const RunConfig& config);

nlohmann::json time_function_to_json(const TimeFunction& f);

}  // namespace shtgame::cli
