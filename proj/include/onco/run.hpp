#pragma once

#include <string>
#include <vector>

#include "onco/config.hpp"
#include "onco/forward.hpp"
#include "onco/optimize.hpp"

namespace onco {

/// Time at which the spatial-mean drug concentration peaks.
/// Throws UsageError if no drug is ever present.
double drug_peak_time(const Trajectory& traj);

struct SimulateResult {
  Trajectory traj;
  double runtime_s = 0.0;
};

struct OptimizeResult {
  OptimizeReport report;
  Grid grid;
  double runtime_s = 0.0;
};

struct CompareResult {
  Series t;          ///< every time level
  Series mass_c;     ///< tumor mass, controlled
  Series mass_u;     ///< tumor mass, uncontrolled
  Series delta_pct;  ///< (M_u − M_c)/M_u · 100 where M_u > 0
  Series peak_c;     ///< sup_x p, controlled
  Series peak_u;     ///< sup_x p, uncontrolled
  double final_delta_pct = 0.0;
  double drug_peak_t = 0.0;
  OptimizeReport report;
  double runtime_s = 0.0;
};

struct GradCheckProbe {
  double adjoint_dd = 0.0;  ///< directional derivative via the adjoint
  double fd_dd = 0.0;       ///< central finite difference of J
  double rel_error = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckProbe> probes;
  double threshold = 0.0;
  bool passed = false;
};

/// Subcommand bodies. Each writes its artifacts under the configured
/// output directory and returns the computed data; solver and config
/// errors propagate as exceptions (the CLI maps them to exit codes).
SimulateResult cmd_simulate(const RunConfig& cfg);
OptimizeResult cmd_optimize(const RunConfig& cfg);
CompareResult cmd_compare(const RunConfig& cfg);
GradCheckReport cmd_gradcheck(const RunConfig& cfg);

/// Directional-derivative check of the adjoint gradient against central
/// finite differences of J, over seeded piecewise-constant probe
/// directions kept inside the admissible box.
GradCheckReport gradient_check(const ModelParams& params, const Grid& grid,
                               const Kernel& kernel, const Field& p0,
                               const Field& d0, const ControlProfile& control,
                               int n_probes, double eps, double threshold,
                               long seed);

/// Builds the schedule named by control_spec (zero | exp-decay | file).
ControlProfile make_control(const RunConfig& cfg, const Grid& grid);

}  // namespace onco
