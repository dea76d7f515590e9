#pragma once

#include <Eigen/Core>

#include "onco/forward.hpp"

namespace onco {

/// Backward-in-time sensitivity pair (q, r): q weighs tumor density, r
/// weighs drug concentration. Terminal data q(T) = γ, r(T) = 0.
struct AdjointPair {
  Eigen::MatrixXd q_hist;  ///< n_x × n_t
  Eigen::MatrixXd r_hist;  ///< n_x × n_t
  Series r_quad;           ///< ∫r(tₙ,·)dx per level, filled during the sweep
};

/// Integrates the adjoint system backward from t = T with explicit Euler
/// in reversed time:
///
///   −q_t − κ·w_p·∂ₓq − κ·K∗(p·∂ₓq) − (F′(p) − ∂C/∂p)·q = α,   q(T) = γ
///   −r_t − D·∂ₓₓr − (∂Γ/∂d)·r = −(∂C/∂d)·q,                   r(T) = 0
///
/// ∂ₓq uses centered differences with one-sided boundary stencils; the
/// nonlocal term reuses the forward convolution (the kernel is symmetric).
/// Requires a stride-1 trajectory (UsageError otherwise); throws
/// NonFiniteError with the failing time index.
AdjointPair solve_adjoint(const Trajectory& traj, const ControlProfile& control,
                          const Grid& grid, const ModelParams& params,
                          const Kernel& kernel);

/// Same sweep but keeps only the per-level drug-adjoint integrals ∫r dx —
/// all the gradient needs — instead of the full field histories.
Series adjoint_r_quadrature(const Trajectory& traj,
                            const ControlProfile& control, const Grid& grid,
                            const ModelParams& params, const Kernel& kernel);

/// Cost gradient with respect to the schedule,
///   g(tₙ) = 2β·I(tₙ) + Γ·∫r(tₙ,·)dx.
Series reduced_gradient(const ControlProfile& control, const AdjointPair& adj,
                        const Trajectory& traj, const Grid& grid,
                        const ModelParams& params);

/// Gradient from the quadrature series directly (fast path).
Series reduced_gradient(const ControlProfile& control, const Series& r_quad,
                        const ModelParams& params);

/// L²(0,T) inner product of two time series (trapezoid in time).
double inner_l2(const Series& a, const Series& b, const Grid& grid);

/// L²(0,T) norm of a time series.
double norm_l2(const Series& a, const Grid& grid);

}  // namespace onco
