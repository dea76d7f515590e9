#include "onco/optimize.hpp"

#include <cmath>

#include "onco/errors.hpp"

namespace onco {

ControlProfile project(const Series& raw, const ModelParams& params) {
  return ControlProfile{raw.max(0.0).min(params.m_tol)};
}

ControlProfile initial_guess(const Grid& grid, const ModelParams& params) {
  Series t = Eigen::ArrayXd::LinSpaced(grid.n_t, 0.0, grid.t_final);
  return ControlProfile{params.m_tol * (-4.0 * t).exp()};
}

OptimizeReport optimize(const ModelParams& params, const Grid& grid,
                        const Kernel& kernel, const Field& p0, const Field& d0,
                        const ControlProfile& start,
                        const OptimizeOptions& opts) {
  OptimizeReport rep;
  ControlProfile control = start;
  validate_control(control, grid, params);

  Trajectory traj;
  solve_forward_into(control, p0, d0, grid, params, kernel, 1, traj);
  double j = cost(control, traj, params);
  Series grad =
      reduced_gradient(control, adjoint_r_quadrature(traj, control, grid,
                                                     params, kernel),
                       params);
  double initial_grad_norm = norm_l2(grad, grid);

  auto emit = [&](const IterRecord& rec) {
    rep.iterates.push_back(rec);
    if (opts.record_snapshots)
      rep.control_snapshots.emplace_back(rec.iter, control.samples);
    if (opts.on_iterate) opts.on_iterate(rec, control);
  };
  emit(IterRecord{0, j, initial_grad_norm, 0.0, 0.0});

  double step_seed = opts.initial_step;
  double last_step = opts.initial_step;

  for (int k = 1; k <= opts.max_iterations; ++k) {
    // Armijo backtracking on the projected update: accept the first step
    // whose decrease beats c times the first-order model ⟨g, I − I⁺⟩,
    // which is nonnegative by the projection.
    double alpha = step_seed;
    bool accepted = false;
    ControlProfile candidate;
    double j_cand = 0.0;
    double pred = 0.0;
    for (int t = 0; t <= opts.backtrack_budget; ++t) {
      candidate = project(control.samples - alpha * grad, params);
      pred = inner_l2(grad, control.samples - candidate.samples, grid);
      if (pred <= 0.0) break;  // projected gradient vanished: stationary
      j_cand = evaluate_cost(candidate, p0, d0, grid, params, kernel);
      if (j_cand <= j - opts.armijo_c * pred) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      if (pred <= 0.0) {
        rep.converged = true;  // nothing to move: first-order optimal
        rep.iterations_used = k - 1;
      } else {
        rep.line_search_failed = true;
        rep.iterations_used = k - 1;
      }
      break;
    }

    const Series raw = control.samples - alpha * grad;
    const double clamp_fraction =
        static_cast<double>(
            ((raw < 0.0) || (raw > params.m_tol)).count()) /
        static_cast<double>(grid.n_t);

    const double rel_drop = std::abs(j_cand - j) / std::abs(j);
    control = candidate;
    j = j_cand;
    last_step = alpha;
    step_seed = 2.0 * alpha;

    // Re-solve at the accepted iterate for the next gradient. The stored
    // run reproduces the line-search cost bit for bit.
    solve_forward_into(control, p0, d0, grid, params, kernel, 1, traj);
    grad = reduced_gradient(control,
                            adjoint_r_quadrature(traj, control, grid, params,
                                                 kernel),
                            params);
    emit(IterRecord{k, j, norm_l2(grad, grid), alpha, clamp_fraction});
    rep.iterations_used = k;

    if (rel_drop < opts.rel_j_tol) {
      rep.converged = true;
      break;
    }
  }

  rep.final_control = control;

  // First-order optimality residual at the final iterate.
  const ControlProfile moved =
      project(control.samples - last_step * grad, params);
  const double resid =
      norm_l2(Series(control.samples - moved.samples), grid);
  rep.pg_residual_norm = resid / last_step;
  rep.optimality_residual =
      resid / (last_step * initial_grad_norm + 1e-12);
  return rep;
}

}  // namespace onco
