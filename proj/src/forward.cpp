#include "onco/forward.hpp"

#include <cmath>
#include <string>

#include "onco/errors.hpp"

namespace onco {

namespace {

constexpr double kNegClampTol = 1e-8;

// Snaps floating-point noise in (−tol, 0) to zero; a value at or below
// −tol means the scheme actually lost positivity, which is fatal.
void clamp_negative(Field& f, const char* name, int level, double& min_seen,
                    long& clamp_count) {
  if (!f.allFinite())
    throw NonFiniteError(std::string(name) + " became non-finite at time level " +
                         std::to_string(level));
  const double mn = f.minCoeff();
  if (mn < min_seen) min_seen = mn;
  if (mn < 0.0) {
    if (mn <= -kNegClampTol)
      throw StabilityError(std::string(name) + " dropped to " +
                           std::to_string(mn) + " at time level " +
                           std::to_string(level) +
                           "; scheme lost positivity");
    clamp_count += (f < 0.0).count();
    f = f.max(0.0);
  }
}

struct RunSink {
  Trajectory* traj = nullptr;  // null: cost-only run
  int stride = 1;
};

// Single forward integrator behind solve_forward and evaluate_cost, so a
// cost-only evaluation performs bit-identical arithmetic to a stored run.
double run_forward(const ControlProfile& control, const Field& p0,
                   const Field& d0, const Grid& grid, const ModelParams& params,
                   const Kernel& kernel, const RunSink& sink) {
  validate_control(control, grid, params);
  const int n = grid.n_x;
  const int n_t = grid.n_t;
  if (p0.size() != n || d0.size() != n)
    throw UsageError("initial fields do not match the grid");
  if (!p0.allFinite() || !d0.allFinite())
    throw NonFiniteError("initial fields contain NaN/Inf");

  Trajectory* traj = sink.traj;
  int n_stored = 0;
  if (traj) {
    const int stride = std::max(1, sink.stride);
    traj->stride = stride;
    traj->n_x = n;
    traj->n_t = n_t;
    traj->dt = grid.dt;
    traj->stored_levels.clear();
    for (int l = 0; l < n_t; l += stride) traj->stored_levels.push_back(l);
    if (traj->stored_levels.back() != n_t - 1)
      traj->stored_levels.push_back(n_t - 1);
    n_stored = static_cast<int>(traj->stored_levels.size());
    traj->p_hist.resize(n, n_stored);
    traj->d_hist.resize(n, n_stored);
    traj->times = Eigen::ArrayXd::LinSpaced(n_t, 0.0, grid.t_final);
    traj->mass_p.resize(n_t);
    traj->mass_d.resize(n_t);
    traj->peak_p.resize(n_t);
    traj->peak_d.resize(n_t);
    traj->min_p = 0.0;
    traj->min_d = 0.0;
    traj->clamp_count = 0;
  }

  Convolver conv(grid, kernel);
  Field p = p0, d = d0;
  Field w(n), adv(n), lap(n), p_next(n), d_next(n);

  double min_p = 0.0, min_d = 0.0;
  long clamps = 0;
  int store_idx = 0;
  double j_run = 0.0;  // time-trapezoid of alpha*mass + beta*I^2

  auto record_level = [&](int level, const Field& pf, const Field& df) {
    const double mass = quadrature(pf, grid);
    const double tw = (level == 0 || level == n_t - 1) ? 0.5 : 1.0;
    const double i_n = control.samples[level];
    j_run += grid.dt * tw * (params.alpha_w * mass + params.beta_w * i_n * i_n);
    if (traj) {
      traj->mass_p[level] = mass;
      traj->mass_d[level] = quadrature(df, grid);
      traj->peak_p[level] = pf.maxCoeff();
      traj->peak_d[level] = df.maxCoeff();
      if (store_idx < n_stored && traj->stored_levels[store_idx] == level) {
        traj->p_hist.col(store_idx) = pf.matrix();
        traj->d_hist.col(store_idx) = df.matrix();
        ++store_idx;
      }
    }
    if (level == n_t - 1) j_run += params.gamma_w * mass;
    return mass;
  };

  record_level(0, p, d);

  for (int level = 0; level < n_t - 1; ++level) {
    const double i_now = control.samples[level];

    conv.apply(p, w);
    const double vmax = params.kappa * w.abs().maxCoeff();
    if (vmax > grid.v_ref)
      throw StabilityError("drift " + std::to_string(vmax) +
                           " exceeded the grid velocity bound " +
                           std::to_string(grid.v_ref) + " at time level " +
                           std::to_string(level));
    w *= params.kappa;  // w now holds the drift velocity

    advection_rhs(p, w, grid, adv);
    diffusion_rhs(d, params.diff, grid, lap);

    p_next = p + grid.dt * (adv + growth_rate(params, p) -
                            kill_rate(params, d, p));
    d_next = d + grid.dt * (lap + exchange_rate(params, i_now, d));

    clamp_negative(p_next, "p", level + 1, min_p, clamps);
    clamp_negative(d_next, "d", level + 1, min_d, clamps);

    p.swap(p_next);
    d.swap(d_next);
    record_level(level + 1, p, d);
  }

  if (traj) {
    traj->min_p = min_p;
    traj->min_d = min_d;
    traj->clamp_count = clamps;
  }
  return j_run;
}

}  // namespace

ControlProfile zero_control(const Grid& grid) {
  return ControlProfile{Series::Zero(grid.n_t)};
}

void validate_control(const ControlProfile& control, const Grid& grid,
                      const ModelParams& params) {
  if (control.samples.size() != grid.n_t)
    throw UsageError("control has " + std::to_string(control.samples.size()) +
                     " samples, grid has " + std::to_string(grid.n_t) +
                     " time levels");
  if (!control.samples.allFinite())
    throw UsageError("control contains NaN/Inf");
  if (control.samples.minCoeff() < 0.0 ||
      control.samples.maxCoeff() > params.m_tol)
    throw UsageError("control leaves the admissible box [0, m_tol]");
}

Field initial_tumor(const Grid& grid, InitialNorm norm) {
  constexpr double kCenter = 0.5;
  constexpr double kStdDev = 0.1;
  Field p0 =
      (-(grid.nodes - kCenter).square() / (2.0 * kStdDev * kStdDev)).exp();
  if (norm == InitialNorm::kUnitMass) {
    p0 /= quadrature(p0, grid);
  }
  // Unit peak needs no rescale: the profile's analytic maximum is 1.
  return p0;
}

std::pair<Field, Field> step(const Field& p, const Field& d, double i_now,
                             const Grid& grid, const ModelParams& params,
                             const Kernel& kernel) {
  Field w = convolve(p, kernel, grid);
  const double vmax = params.kappa * w.abs().maxCoeff();
  if (vmax > grid.v_ref)
    throw StabilityError("drift exceeded the grid velocity bound");
  Field vel = params.kappa * w;
  Field adv = advection_rhs(p, vel, grid);
  Field lap = diffusion_rhs(d, params.diff, grid);
  Field p_next =
      p + grid.dt * (adv + growth_rate(params, p) - kill_rate(params, d, p));
  Field d_next = d + grid.dt * (lap + exchange_rate(params, i_now, d));
  double mn = 0.0;
  long clamps = 0;
  clamp_negative(p_next, "p", 1, mn, clamps);
  clamp_negative(d_next, "d", 1, mn, clamps);
  return {std::move(p_next), std::move(d_next)};
}

Trajectory solve_forward(const ControlProfile& control, const Field& p0,
                         const Field& d0, const Grid& grid,
                         const ModelParams& params, const Kernel& kernel,
                         int stride) {
  Trajectory traj;
  solve_forward_into(control, p0, d0, grid, params, kernel, stride, traj);
  return traj;
}

void solve_forward_into(const ControlProfile& control, const Field& p0,
                        const Field& d0, const Grid& grid,
                        const ModelParams& params, const Kernel& kernel,
                        int stride, Trajectory& out) {
  RunSink sink{&out, stride};
  run_forward(control, p0, d0, grid, params, kernel, sink);
}

double evaluate_cost(const ControlProfile& control, const Field& p0,
                     const Field& d0, const Grid& grid,
                     const ModelParams& params, const Kernel& kernel) {
  return run_forward(control, p0, d0, grid, params, kernel, RunSink{});
}

double cost(const ControlProfile& control, const Trajectory& traj,
            const ModelParams& params) {
  if (!traj.full())
    throw UsageError("cost requires a stride-1 trajectory");
  if (control.samples.size() != traj.n_t)
    throw UsageError("control does not match the trajectory's time grid");
  double j = 0.0;
  for (int n = 0; n < traj.n_t; ++n) {
    const double tw = (n == 0 || n == traj.n_t - 1) ? 0.5 : 1.0;
    const double i_n = control.samples[n];
    j += traj.dt * tw *
         (params.alpha_w * traj.mass_p[n] + params.beta_w * i_n * i_n);
  }
  j += params.gamma_w * traj.mass_p[traj.n_t - 1];
  return j;
}

TimeSeries tumor_mass(const Trajectory& traj) {
  return TimeSeries{traj.times, traj.mass_p};
}

}  // namespace onco
