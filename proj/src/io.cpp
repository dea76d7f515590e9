#include "onco/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "onco/errors.hpp"

namespace onco {

namespace {

std::ofstream open_out(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

std::string format_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_state_csv(const std::string& path, const Trajectory& traj,
                     const Grid& grid) {
  auto out = open_out(path);
  out << "t,x,p,d\n";
  for (int s = 0; s < traj.n_stored(); ++s) {
    const int level = traj.stored_levels[s];
    const std::string t = format_num(traj.times[level]);
    for (int i = 0; i < traj.n_x; ++i) {
      out << t << ',' << format_num(grid.nodes[i]) << ','
          << format_num(traj.p_hist(i, s)) << ','
          << format_num(traj.d_hist(i, s)) << '\n';
    }
  }
}

void write_mass_csv(const std::string& path, const Trajectory& traj) {
  auto out = open_out(path);
  out << "t,mass\n";
  for (int n = 0; n < traj.n_t; ++n)
    out << format_num(traj.times[n]) << ',' << format_num(traj.mass_p[n])
        << '\n';
}

void write_control_csv(const std::string& path, const Grid& grid,
                       const ControlProfile& control) {
  auto out = open_out(path);
  out << "t,I\n";
  for (int n = 0; n < grid.n_t; ++n)
    out << format_num(grid.time_at(n)) << ','
        << format_num(control.samples[n]) << '\n';
}

void write_convergence_csv(const std::string& path,
                           const std::vector<IterRecord>& iterates) {
  auto out = open_out(path);
  out << "iter,J,grad_norm,step\n";
  for (const auto& r : iterates)
    out << r.iter << ',' << format_num(r.j) << ',' << format_num(r.grad_norm)
        << ',' << format_num(r.step) << '\n';
}

void write_control_evolution_csv(const std::string& path, const Grid& grid,
                                 const OptimizeReport& report,
                                 int time_stride) {
  auto out = open_out(path);
  out << "iter,t,I\n";
  const int stride = std::max(1, time_stride);
  for (const auto& [iter, samples] : report.control_snapshots) {
    for (int n = 0; n < grid.n_t; n += stride)
      out << iter << ',' << format_num(grid.time_at(n)) << ','
          << format_num(samples[n]) << '\n';
    if ((grid.n_t - 1) % stride != 0)
      out << iter << ',' << format_num(grid.time_at(grid.n_t - 1)) << ','
          << format_num(samples[grid.n_t - 1]) << '\n';
  }
}

void write_metrics_csv(const std::string& path, const Series& t,
                       const Series& m_c, const Series& m_u,
                       const Series& peak_c, const Series& peak_u) {
  auto out = open_out(path);
  out << "t,M_c,M_u,delta_pct,peak_c,peak_u\n";
  for (Eigen::Index n = 0; n < t.size(); ++n) {
    if (m_u[n] <= 0.0) continue;
    const double delta = (m_u[n] - m_c[n]) / m_u[n] * 100.0;
    out << format_num(t[n]) << ',' << format_num(m_c[n]) << ','
        << format_num(m_u[n]) << ',' << format_num(delta) << ','
        << format_num(peak_c[n]) << ',' << format_num(peak_u[n]) << '\n';
  }
}

ControlProfile load_control_csv(const std::string& path, const Grid& grid,
                                const ModelParams& params) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open control file '" + path + "'");

  std::vector<double> ts, is;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::istringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b)) {
      throw ConfigError("control file '" + path + "' line " +
                        std::to_string(lineno) + ": expected 't,I'");
    }
    char* end = nullptr;
    const double tv = std::strtod(a.c_str(), &end);
    if (end == a.c_str()) {
      if (lineno == 1) continue;  // header row
      throw ConfigError("control file '" + path + "' line " +
                        std::to_string(lineno) + ": bad number '" + a + "'");
    }
    const double iv = std::strtod(b.c_str(), &end);
    if (end == b.c_str())
      throw ConfigError("control file '" + path + "' line " +
                        std::to_string(lineno) + ": bad number '" + b + "'");
    ts.push_back(tv);
    is.push_back(iv);
  }
  if (ts.empty())
    throw ConfigError("control file '" + path + "' holds no samples");

  ControlProfile control;
  control.samples.resize(grid.n_t);
  if (static_cast<int>(is.size()) == grid.n_t) {
    for (int n = 0; n < grid.n_t; ++n) control.samples[n] = is[n];
  } else {
    // Resample linearly in t onto the grid's time levels.
    for (size_t k = 1; k < ts.size(); ++k)
      if (!(ts[k] > ts[k - 1]))
        throw ConfigError("control file '" + path +
                          "': times must be strictly increasing to resample");
    for (int n = 0; n < grid.n_t; ++n) {
      const double t = grid.time_at(n);
      auto hi = std::lower_bound(ts.begin(), ts.end(), t);
      if (hi == ts.begin()) {
        control.samples[n] = is.front();
      } else if (hi == ts.end()) {
        control.samples[n] = is.back();
      } else {
        const auto j = static_cast<size_t>(hi - ts.begin());
        const double u = (t - ts[j - 1]) / (ts[j] - ts[j - 1]);
        control.samples[n] = (1.0 - u) * is[j - 1] + u * is[j];
      }
    }
  }

  constexpr double kSlack = 1e-9;
  if (control.samples.minCoeff() < -kSlack ||
      control.samples.maxCoeff() > params.m_tol + kSlack)
    throw ConfigError("control file '" + path +
                      "' leaves the admissible box [0, m_tol]");
  control.samples = control.samples.max(0.0).min(params.m_tol);
  return control;
}

void write_svg_line(const std::string& path, const Series& x, const Series& y,
                    const std::string& title, const std::string& x_label,
                    const std::string& y_label) {
  const int width = 720, height = 440;
  const int ml = 70, mr = 20, mt = 40, mb = 50;
  const auto n = x.size();
  if (n < 2 || y.size() != n) return;

  const double x0 = x.minCoeff(), x1 = x.maxCoeff();
  double y0 = y.minCoeff(), y1 = y.maxCoeff();
  if (y1 - y0 < 1e-300) {
    y0 -= 1.0;
    y1 += 1.0;
  }
  const double xs = (width - ml - mr) / (x1 - x0 > 0 ? x1 - x0 : 1.0);
  const double ys = (height - mt - mb) / (y1 - y0);

  const Eigen::Index max_pts = 1500;
  const Eigen::Index skip = std::max<Eigen::Index>(1, n / max_pts);

  auto out = open_out(path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
      << "' height='" << height << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n"
      << "<text x='" << width / 2 << "' y='22' text-anchor='middle' "
      << "font-family='sans-serif' font-size='15'>" << title << "</text>\n"
      << "<text x='" << width / 2 << "' y='" << height - 10
      << "' text-anchor='middle' font-family='sans-serif' font-size='12'>"
      << x_label << "</text>\n"
      << "<text x='16' y='" << height / 2
      << "' text-anchor='middle' font-family='sans-serif' font-size='12' "
      << "transform='rotate(-90 16 " << height / 2 << ")'>" << y_label
      << "</text>\n"
      << "<rect x='" << ml << "' y='" << mt << "' width='" << width - ml - mr
      << "' height='" << height - mt - mb
      << "' fill='none' stroke='#999'/>\n"
      << "<text x='" << ml << "' y='" << height - mb + 16
      << "' font-family='sans-serif' font-size='11'>" << format_num(x0)
      << "</text>\n"
      << "<text x='" << width - mr << "' y='" << height - mb + 16
      << "' text-anchor='end' font-family='sans-serif' font-size='11'>"
      << format_num(x1) << "</text>\n"
      << "<text x='" << ml - 4 << "' y='" << height - mb
      << "' text-anchor='end' font-family='sans-serif' font-size='11'>"
      << format_num(y0) << "</text>\n"
      << "<text x='" << ml - 4 << "' y='" << mt + 10
      << "' text-anchor='end' font-family='sans-serif' font-size='11'>"
      << format_num(y1) << "</text>\n"
      << "<polyline fill='none' stroke='#1f77b4' stroke-width='1.5' points='";
  for (Eigen::Index i = 0; i < n; i += skip) {
    const double px = ml + (x[i] - x0) * xs;
    const double py = height - mb - (y[i] - y0) * ys;
    out << px << ',' << py << ' ';
  }
  const double px = ml + (x[n - 1] - x0) * xs;
  const double py = height - mb - (y[n - 1] - y0) * ys;
  out << px << ',' << py << "'/>\n</svg>\n";
}

}  // namespace onco
