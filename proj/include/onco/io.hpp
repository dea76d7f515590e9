#pragma once

#include <string>
#include <vector>

#include "onco/forward.hpp"
#include "onco/optimize.hpp"

namespace onco {

/// Formats with 12 significant digits (shortest finite decimal form).
std::string format_num(double v);

void write_state_csv(const std::string& path, const Trajectory& traj,
                     const Grid& grid);
void write_mass_csv(const std::string& path, const Trajectory& traj);
void write_control_csv(const std::string& path, const Grid& grid,
                       const ControlProfile& control);
void write_convergence_csv(const std::string& path,
                           const std::vector<IterRecord>& iterates);
void write_control_evolution_csv(const std::string& path, const Grid& grid,
                                 const OptimizeReport& report,
                                 int time_stride);

/// Columns t,M_c,M_u,delta_pct,peak_c,peak_u; rows where the uncontrolled
/// mass vanishes are omitted (the relative metric is undefined there).
void write_metrics_csv(const std::string& path, const Series& t,
                       const Series& m_c, const Series& m_u,
                       const Series& peak_c, const Series& peak_u);

/// Reads a `t,I` schedule. A sample count matching the grid is used
/// verbatim; otherwise the profile is interpolated linearly in t.
/// Values are validated against [0, m_tol] (1e-9 slack, then clamped).
ControlProfile load_control_csv(const std::string& path, const Grid& grid,
                                const ModelParams& params);

/// Minimal line plot; data is decimated to keep files small. Convenience
/// rendering only — the CSVs are the numeric artifacts.
void write_svg_line(const std::string& path, const Series& x, const Series& y,
                    const std::string& title, const std::string& x_label,
                    const std::string& y_label);

}  // namespace onco
