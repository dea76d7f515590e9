#pragma once

#include <Eigen/Core>
#include <utility>

#include "onco/grid.hpp"
#include "onco/model.hpp"

namespace onco {

/// Drug infusion schedule sampled on the time levels, piecewise constant
/// over each step (left endpoint drives the update). Admissible schedules
/// satisfy 0 ≤ I(t) ≤ m_tol at every level.
struct ControlProfile {
  Series samples;
};

ControlProfile zero_control(const Grid& grid);

/// Throws UsageError if the profile does not match the grid or leaves the
/// admissible box.
void validate_control(const ControlProfile& control, const Grid& grid,
                      const ModelParams& params);

/// Seed tumor profile: Gaussian centered at x = 0.5 with standard
/// deviation 0.1, scaled to unit peak (or unit trapezoid mass).
Field initial_tumor(const Grid& grid,
                    InitialNorm norm = InitialNorm::kUnitPeak);

/// Time history of one forward run. Fields are stored column-per-level at
/// the requested stride (the final level is always kept); the scalar
/// diagnostics series are recorded at every level regardless of stride.
struct Trajectory {
  int stride = 1;
  Eigen::MatrixXd p_hist;          ///< n_x × n_stored tumor densities
  Eigen::MatrixXd d_hist;          ///< n_x × n_stored drug concentrations
  std::vector<int> stored_levels;  ///< time level of each stored column

  Series times;   ///< all n_t level times
  Series mass_p;  ///< trapezoid mass of p per level
  Series mass_d;  ///< trapezoid mass of d per level
  Series peak_p;  ///< max of p per level
  Series peak_d;  ///< max of d per level

  double min_p = 0.0;      ///< most negative pre-clamp p value seen
  double min_d = 0.0;      ///< most negative pre-clamp d value seen
  long clamp_count = 0;    ///< node-values snapped from (−tol,0) to 0

  int n_x = 0;
  int n_t = 0;
  double dt = 0.0;

  bool full() const { return stride == 1; }
  int n_stored() const { return static_cast<int>(stored_levels.size()); }
};

/// One explicit Euler step of the coupled system:
///   p ← p + dt·(−∂ₓ(κ·(K∗p)·p) + F(p) − C(d,p))
///   d ← d + dt·(D·∂ₓₓd + Γ(i_now, d))
/// Negative values above −1e-8 are snapped to zero; anything worse aborts.
/// Throws StabilityError if the drift exceeds the grid's velocity bound,
/// NonFiniteError if the update produces NaN/Inf.
std::pair<Field, Field> step(const Field& p, const Field& d, double i_now,
                             const Grid& grid, const ModelParams& params,
                             const Kernel& kernel);

/// Integrates the coupled system over the whole horizon.
/// Propagated solver errors carry the failing time index.
Trajectory solve_forward(const ControlProfile& control, const Field& p0,
                         const Field& d0, const Grid& grid,
                         const ModelParams& params, const Kernel& kernel,
                         int stride = 1);

/// Same run, reusing the caller's trajectory buffers.
void solve_forward_into(const ControlProfile& control, const Field& p0,
                        const Field& d0, const Grid& grid,
                        const ModelParams& params, const Kernel& kernel,
                        int stride, Trajectory& out);

/// Treatment cost
///   J = Σₙ dt·wₙ·(α·∫p(tₙ) + β·I(tₙ)²) + γ·∫p(T)
/// with trapezoid weights wₙ in time. Requires a stride-1 trajectory.
double cost(const ControlProfile& control, const Trajectory& traj,
            const ModelParams& params);

/// J for a candidate schedule without materializing the field history.
/// Produces bit-identical values to cost(solve_forward(...)).
double evaluate_cost(const ControlProfile& control, const Field& p0,
                     const Field& d0, const Grid& grid,
                     const ModelParams& params, const Kernel& kernel);

/// Paired (t, value) samples.
struct TimeSeries {
  Series t;
  Series value;
};

/// Tumor mass ∫p(t,·)dx at every recorded level.
TimeSeries tumor_mass(const Trajectory& traj);

}  // namespace onco
