#include "shtgame/cli/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <numbers>

namespace shtgame::cli {

using nlohmann::json;

namespace {

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("key '" + key + "' must be a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError("key '" + key + "' must be an integer");
  return v.get<int>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("key '" + key + "' must be a string");
  return v.get<std::string>();
}

double field(const json& obj, const char* name, const std::string& key, double fallback) {
  if (!obj.contains(name)) return fallback;
  return as_number(obj.at(name), key + "." + name);
}

void require_fields(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& key) {
  for (const auto& [name, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || name == a;
    if (!ok) throw ConfigError("unknown field '" + name + "' in '" + key + "'");
  }
}

TimeFunction parse_time_function(const json& v, const std::string& key, double horizon,
                                 int n_steps) {
  if (v.is_number()) return TimeFunction::constant(v.get<double>());
  if (!v.is_object() || !v.contains("type")) {
    throw ConfigError("key '" + key + "' must be a number or an object with a 'type'");
  }
  const std::string type = as_string(v.at("type"), key + ".type");
  if (type == "constant") {
    require_fields(v, {"type", "value"}, key);
    return TimeFunction::constant(field(v, "value", key, 0.0));
  }
  if (type == "affine") {
    require_fields(v, {"type", "a", "b"}, key);
    return TimeFunction::affine(field(v, "a", key, 0.0), field(v, "b", key, 0.0));
  }
  if (type == "sinusoid") {
    require_fields(v, {"type", "amp", "omega", "phase"}, key);
    return TimeFunction::sinusoid(field(v, "amp", key, 1.0), field(v, "omega", key, 0.0),
                                  field(v, "phase", key, 0.0));
  }
  if (type == "sampled") {
    require_fields(v, {"type", "values"}, key);
    if (!v.contains("values") || !v.at("values").is_array()) {
      throw ConfigError("key '" + key + ".values' must be an array");
    }
    const json& arr = v.at("values");
    if (static_cast<int>(arr.size()) != n_steps + 1) {
      throw ConfigError("key '" + key + ".values' must have grid.n_steps + 1 entries");
    }
    Eigen::VectorXd values(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) values[i] = as_number(arr[i], key + ".values");
    return TimeFunction::sampled(std::move(values), horizon);
  }
  throw ConfigError("key '" + key + "' has unknown type '" + type + "'");
}

PenaltyKind parse_penalty(const std::string& s) {
  if (s == "quadratic") return PenaltyKind::Quadratic;
  if (s == "logarithmic" || s == "log") return PenaltyKind::Logarithmic;
  throw ConfigError("red.penalty must be 'quadratic' or 'logarithmic'");
}

SolverKind parse_solver(const std::string& s) {
  if (s == "fpi") return SolverKind::Fpi;
  if (s == "fbs") return SolverKind::Fbs;
  if (s == "nn") return SolverKind::Nn;
  throw ConfigError("red.solver must be 'fpi', 'fbs' or 'nn'");
}

}  // namespace

RunConfig default_config() {
  RunConfig c;
  ModelParams& m = c.model;
  m.horizon = 1.0;
  m.sigma_B = 0.25;
  m.sigma_W = 0.25;
  m.r_alpha = 1.0;
  m.r_beta = 10.0;
  m.r_v = 1.0;
  m.t_v = 1.0;
  m.vbar_T = 1.0;
  m.vbar = TimeFunction::affine(2.0, -1.0);
  m.lambda = 0.05;
  m.v0 = 2.0;
  m.y0 = 4.0;
  c.pattern.f_c = TimeFunction::sinusoid(1.0, 10.0 * std::numbers::pi);
  c.pattern.f_d = TimeFunction::constant(0.0);
  return c;
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c = default_config();

  using Setter = std::function<void(const json&, const std::string&)>;
  auto num = [](double& dst) -> Setter {
    return [&dst](const json& v, const std::string& k) { dst = as_number(v, k); };
  };
  auto integer = [](int& dst) -> Setter {
    return [&dst](const json& v, const std::string& k) { dst = as_int(v, k); };
  };
  const std::map<std::string, Setter> scalars = {
      {"model.horizon", num(c.model.horizon)},
      {"model.sigma_B", num(c.model.sigma_B)},
      {"model.sigma_W", num(c.model.sigma_W)},
      {"model.r_alpha", num(c.model.r_alpha)},
      {"model.r_beta", num(c.model.r_beta)},
      {"model.r_v", num(c.model.r_v)},
      {"model.t_v", num(c.model.t_v)},
      {"model.vbar_T", num(c.model.vbar_T)},
      {"model.lambda", num(c.model.lambda)},
      {"model.v0", num(c.model.v0)},
      {"model.y0", num(c.model.y0)},
      {"grid.n_steps", integer(c.n_steps)},
      {"red.lambda_reg", num(c.red.lambda_reg)},
      {"red.tolerance", num(c.red.tolerance)},
      {"red.max_iters", integer(c.red.max_iters)},
      {"red.fbs_relaxation", num(c.red.fbs_relaxation)},
      {"red.nn.hidden_width", integer(c.red.nn.hidden_width)},
      {"red.nn.hidden_layers", integer(c.red.nn.hidden_layers)},
      {"red.nn.epochs", integer(c.red.nn.epochs)},
      {"red.nn.learning_rate", num(c.red.nn.learning_rate)},
      {"mc.n_paths", integer(c.mc_paths)},
      {"mc.threads", integer(c.threads)},
      {"mc.sample_paths", integer(c.sample_paths)},
      {"game.n_rounds", integer(c.n_rounds)},
  };
  const char* time_keys[] = {"model.vbar", "pattern.f_c", "pattern.f_d", "red.f_c_initial"};

  std::map<std::string, json> deferred;
  for (const auto& [key, value] : doc.items()) {
    if (auto it = scalars.find(key); it != scalars.end()) {
      it->second(value, key);
    } else if (key == "red.penalty") {
      c.red.penalty = parse_penalty(as_string(value, key));
    } else if (key == "red.solver") {
      c.red.solver = parse_solver(as_string(value, key));
    } else if (key == "seed") {
      if (!value.is_number_integer() || (!value.is_number_unsigned() && value.get<std::int64_t>() < 0)) {
        throw ConfigError("key 'seed' must be a non-negative integer");
      }
      c.seed = value.get<std::uint64_t>();
    } else if (std::find(std::begin(time_keys), std::end(time_keys), key) != std::end(time_keys)) {
      deferred[key] = value;
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }

  if (c.n_steps < 2) throw ConfigError("grid.n_steps must be at least 2");
  if (c.mc_paths < 2) throw ConfigError("mc.n_paths must be at least 2");
  if (c.threads < 1) throw ConfigError("mc.threads must be at least 1");
  if (c.sample_paths < 0) throw ConfigError("mc.sample_paths must be non-negative");
  if (c.n_rounds < 1) throw ConfigError("game.n_rounds must be at least 1");

  for (const auto& [key, value] : deferred) {
    TimeFunction f = parse_time_function(value, key, c.model.horizon, c.n_steps);
    if (key == "model.vbar") c.model.vbar = std::move(f);
    else if (key == "pattern.f_c") c.pattern.f_c = std::move(f);
    else if (key == "pattern.f_d") c.pattern.f_d = std::move(f);
    else c.red.f_c_initial = std::move(f);
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(doc);
}

Grid make_grid(const RunConfig& config) { return Grid(config.model.horizon, config.n_steps); }

json time_function_to_json(const TimeFunction& f) {
  return std::visit(
      [](const auto& r) -> json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return {{"type", "constant"}, {"value", r.value}};
        } else if constexpr (std::is_same_v<T, Affine>) {
          return {{"type", "affine"}, {"a", r.a}, {"b", r.b}};
        } else if constexpr (std::is_same_v<T, Sinusoid>) {
          return {{"type", "sinusoid"}, {"amp", r.amp}, {"omega", r.omega}, {"phase", r.phase}};
        } else {
          return {{"type", "sampled"}, {"values", std::vector<double>(r.values.begin(), r.values.end())}};
        }
      },
      f.repr());
}

}  // namespace shtgame::cli
