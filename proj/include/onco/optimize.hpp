#pragma once

#include <functional>
#include <vector>

#include "onco/adjoint.hpp"
#include "onco/forward.hpp"

namespace onco {

/// Pointwise clamp onto the admissible box [0, m_tol]. Idempotent.
ControlProfile project(const Series& raw, const ModelParams& params);

/// Starting schedule m_tol·exp(−4t): maximum dose tapering off.
ControlProfile initial_guess(const Grid& grid, const ModelParams& params);

/// Per-iterate optimizer state: cost, L²(0,T) gradient norm, the accepted
/// step that produced this iterate, and the fraction of samples the
/// projection clipped.
struct IterRecord {
  int iter = 0;
  double j = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
  double clamp_fraction = 0.0;
};

struct OptimizeReport {
  std::vector<IterRecord> iterates;  ///< index 0 is the starting point
  ControlProfile final_control;
  bool converged = false;
  bool line_search_failed = false;
  int iterations_used = 0;
  /// ‖I − P(I − s·g)‖ / (s·‖g⁰‖ + ε) at the final iterate (s = last step).
  double optimality_residual = 0.0;
  /// ‖I − P(I − s·g)‖ / s, in gradient units.
  double pg_residual_norm = 0.0;
  /// Schedule snapshots (iterate index, samples); filled when requested.
  std::vector<std::pair<int, Series>> control_snapshots;
};

struct OptimizeOptions {
  int max_iterations = 50;
  double rel_j_tol = 5e-5;      ///< stop when |J⁺ − J| / |J| drops below
  double armijo_c = 1e-4;
  int backtrack_budget = 30;    ///< halvings per line search
  double initial_step = 1.0;
  bool record_snapshots = false;
  /// Called after each accepted iterate; lets callers flush partial
  /// artifacts if a later step throws.
  std::function<void(const IterRecord&, const ControlProfile&)> on_iterate;
};

/// Projected gradient descent on the treatment cost:
/// forward solve, backward adjoint sweep, reduced gradient, Armijo
/// backtracking on the step, projected update. Accepted steps never
/// increase J. Stops on the relative-J criterion or the iteration cap;
/// a failed line search stops the loop with converged = false.
OptimizeReport optimize(const ModelParams& params, const Grid& grid,
                        const Kernel& kernel, const Field& p0, const Field& d0,
                        const ControlProfile& start,
                        const OptimizeOptions& opts = {});

}  // namespace onco
