#include "shtgame/cli/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace shtgame::cli {

using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::filesystem::filesystem_error("cannot open for writing", path, {});
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::filesystem::filesystem_error("write failed", path, {});
}

void write_json(const std::filesystem::path& path, const json& doc) {
  write_file(path, doc.dump(2) + "\n");
}

std::string coeffs_csv(const ValueCoeffs& c) {
  std::string s = "t,mu,eta,rho,gamma,theta,xi\n";
  for (int k = 0; k < c.grid.n_nodes(); ++k) {
    s += format_double(c.grid.time(k));
    for (double x : {c.mu[k], c.eta[k], c.rho[k], c.gamma[k], c.theta[k], c.xi[k]}) {
      s += ',' + format_double(x);
    }
    s += '\n';
  }
  return s;
}

std::string trajectories_csv(const std::vector<Trajectory>& paths) {
  std::string s = "t,path_id,v,y,alpha,beta\n";
  for (std::size_t id = 0; id < paths.size(); ++id) {
    const Trajectory& tr = paths[id];
    for (Eigen::Index k = 0; k < tr.times.size(); ++k) {
      s += format_double(tr.times[k]) + ',' + std::to_string(id) + ',' + format_double(tr.v_path[k]) +
           ',' + format_double(tr.y_path[k]) + ',';
      if (k < tr.alpha_path.size()) {
        s += format_double(tr.alpha_path[k]) + ',' + format_double(tr.beta_path[k]);
      } else {
        s += ',';
      }
      s += '\n';
    }
  }
  return s;
}

std::string fc_csv(const Eigen::VectorXd& times, const Eigen::VectorXd& values) {
  std::string s = "t,f_c\n";
  for (Eigen::Index k = 0; k < times.size(); ++k) {
    s += format_double(times[k]) + ',' + format_double(values[k]) + '\n';
  }
  return s;
}

json mc_summary_json(const McSummary& mc, std::optional<double> moment) {
  json j;
  j["n_paths"] = mc.n_paths;
  j["master_seed"] = mc.master_seed;
  j["mean_primary_cost"] = mc.mean_primary_cost;
  j["se_primary_cost"] = mc.se_primary_cost;
  j["mean_log_lr"] = mc.mean_log_lr;
  j["se_log_lr"] = mc.se_log_lr;
  j["mean_blue_cost"] = mc.mean_blue_cost;
  j["expected_log_lr_moment"] = moment ? json(*moment) : json(nullptr);
  return j;
}

json report_json(const OptimizationReport& r, const RedConfig& config) {
  json j;
  j["solver"] = std::string(to_string(r.solver));
  j["penalty"] = std::string(to_string(r.penalty));
  j["lambda_reg"] = config.lambda_reg;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["expected_log_lr"] = r.final_expected_log_lr;
  j["penalty_value"] = r.final_penalty;
  j["objective"] = r.final_objective;
  j["objective_history"] = r.objective_history;
  return j;
}

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string tick(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

}  // namespace

std::string svg_line_plot(const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<Series>& series) {
  const double width = 640, height = 400, left = 70, right = 150, top = 40, bottom = 50;
  const double pw = width - left - right, ph = height - top - bottom;

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const Series& s : series) {
    for (Eigen::Index i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!(x1 > x0)) { x0 -= 0.5; x1 += 0.5; }
  if (!(y1 > y0)) { y0 -= 0.5; y1 += 0.5; }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
    << title << "</text>\n";
  o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0, yv = y0 + (y1 - y0) * i / 4.0;
    o << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << fmt(top + ph + 16)
      << "\" text-anchor=\"middle\">" << tick(xv) << "</text>\n";
    o << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(py(yv) + 4) << "\" text-anchor=\"end\">"
      << tick(yv) << "</text>\n";
  }
  o << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << fmt(height - 10)
    << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  o << "<text x=\"16\" y=\"" << fmt(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << fmt(top + ph / 2) << ")\">" << y_label << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
    for (Eigen::Index i = 0; i < series[s].x.size(); ++i) {
      if (!std::isfinite(series[s].y[i])) continue;
      o << fmt(px(series[s].x[i])) << ',' << fmt(py(series[s].y[i])) << ' ';
    }
    o << "\"/>\n";
    const double ly = top + 14 + 18.0 * static_cast<double>(s);
    o << "<line x1=\"" << fmt(left + pw + 10) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(left + pw + 30)
      << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << fmt(left + pw + 36) << "\" y=\"" << fmt(ly + 4) << "\">" << series[s].label
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace shtgame::cli
