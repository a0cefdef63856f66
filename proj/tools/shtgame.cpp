#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

#include "shtgame/cli/commands.hpp"

namespace {

int exit_for(shtgame::ErrorCode code) {
  using shtgame::ErrorCode;
  switch (code) {
    case ErrorCode::LambdaOutOfRange:
    case ErrorCode::NonPositiveWeight:
    case ErrorCode::NonPositiveHorizon:
    case ErrorCode::InvalidGrid:
    case ErrorCode::GridMismatch:
    case ErrorCode::NonPositiveFc:
    case ErrorCode::Unsupported:
    case ErrorCode::InvalidArgument:
      return shtgame::cli::exit_code::usage;
    default:
      return shtgame::cli::exit_code::numeric;
  }
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = shtgame::cli;
  CLI::App app{"Deception and counter-deception game: blue LQ solver, red pattern optimizer"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool plots = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config with flat dotted keys");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "master seed (overrides 'seed')");
    sub->add_option("--threads", threads, "Monte Carlo threads (overrides 'mc.threads')")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--plots", plots, "also write SVG plots");
  };
  CLI::App* blue = app.add_subcommand("blue-solve", "solve the blue problem and simulate paths");
  CLI::App* red = app.add_subcommand("red-optimize", "optimize the instilled pattern f_c");
  CLI::App* game = app.add_subcommand("stackelberg", "play repeated red-blue rounds");
  CLI::App* validate = app.add_subcommand("validate", "run the invariant suite");
  for (CLI::App* sub : {blue, red, game, validate}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::exit_code::usage;
  }

  try {
    cli::RunConfig config = config_path.empty() ? cli::default_config() : cli::load_config(config_path);
    if (seed) config.seed = *seed;
    if (threads) config.threads = *threads;
    const cli::CommandOptions options{out_dir, plots};
    if (blue->parsed()) return cli::cmd_blue_solve(config, options, std::cout);
    if (red->parsed()) return cli::cmd_red_optimize(config, options, std::cout);
    if (game->parsed()) return cli::cmd_stackelberg(config, options, std::cout);
    return cli::cmd_validate(config, options, std::cout);
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cli::exit_code::usage;
  } catch (const shtgame::Error& e) {
    std::cerr << "error (" << shtgame::to_string(e.code()) << "): " << e.what() << '\n';
    return exit_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return cli::exit_code::usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::exit_code::numeric;
  }
}
