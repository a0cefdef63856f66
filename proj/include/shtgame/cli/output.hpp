#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "shtgame/red.hpp"
#include "shtgame/riccati.hpp"
#include "shtgame/sde.hpp"

namespace shtgame::cli {

/// 17 significant digits, C locale.
std::string format_double(double x);

/// Writes bytes as-is (no newline translation); creates parent directories.
void write_file(const std::filesystem::path& path, const std::string& contents);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

std::string coeffs_csv(const ValueCoeffs& coeffs);
/// Columns t, path_id, v, y, alpha, beta. Controls are empty on the terminal node.
std::string trajectories_csv(const std::vector<Trajectory>& paths);
std::string fc_csv(const Eigen::VectorXd& times, const Eigen::VectorXd& values);

nlohmann::json mc_summary_json(const McSummary& mc, std::optional<double> expected_log_lr_moment);
nlohmann::json report_json(const OptimizationReport& report, const RedConfig& config);

struct Series {
  std::string label;
  Eigen::VectorXd x, y;
};

/// Minimal standalone SVG line chart.
std::string svg_line_plot(const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<Series>& series);

}  // namespace shtgame::cli
