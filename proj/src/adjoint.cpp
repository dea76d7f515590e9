#include "onco/adjoint.hpp"

#include <cmath>
#include <string>

#include "onco/errors.hpp"

namespace onco {

namespace {

// Centered gradient with one-sided stencils at the boundary nodes.
void gradient_x(const Field& q, double dx, Field& out) {
  const auto n = q.size();
  out.resize(n);
  out.segment(1, n - 2) = (q.tail(n - 2) - q.head(n - 2)) / (2.0 * dx);
  out[0] = (q[1] - q[0]) / dx;
  out[n - 1] = (q[n - 1] - q[n - 2]) / dx;
}

struct AdjointSink {
  AdjointPair* pair = nullptr;  // null: keep only the r-quadrature series
};

// Backward sweep shared by the full-history and gradient-only entry
// points. Reversed-time explicit Euler of
//
//   q_t = −α − κ·w_p·∂ₓq − κ·K∗(p·∂ₓq) − (F′(p) − ∂C/∂p)·q
//   r_t = −D·∂ₓₓr − (∂Γ/∂d)·r + (∂C/∂d)·q
//
// from q(T) = γ, r(T) = 0 down to t = 0. w_p is recomputed from the
// stored tumor history; packing both kernel integrals into one complex
// transform halves the spectral work per step.
Series adjoint_sweep(const Trajectory& traj, const ControlProfile& control,
                     const Grid& grid, const ModelParams& params,
                     const Kernel& kernel, const AdjointSink& sink) {
  if (!traj.full())
    throw UsageError("adjoint sweep requires a stride-1 trajectory");
  if (traj.n_x != grid.n_x || traj.n_t != grid.n_t)
    throw UsageError("trajectory does not match the grid");
  validate_control(control, grid, params);

  const int n = grid.n_x;
  const int n_t = grid.n_t;
  const double dt = grid.dt;
  const double gam_d = -(params.gamma_ex + params.lambda_cl);  // dGamma/dd

  AdjointPair* pair = sink.pair;
  if (pair) {
    pair->q_hist.resize(n, n_t);
    pair->r_hist.resize(n, n_t);
    pair->r_quad.resize(n_t);
  }

  Convolver conv(grid, kernel);
  Field q = Field::Constant(n, params.gamma_w);
  Field r = Field::Zero(n);
  Field dqdx(n), w(n), knl(n), lap(n), q_prev(n), r_prev(n), pdq(n);
  Series r_quad(n_t);

  r_quad[n_t - 1] = quadrature(r, grid);
  if (pair) {
    pair->q_hist.col(n_t - 1) = q.matrix();
    pair->r_hist.col(n_t - 1) = r.matrix();
    pair->r_quad[n_t - 1] = r_quad[n_t - 1];
  }

  for (int level = n_t - 1; level > 0; --level) {
    const auto p = traj.p_hist.col(level).array();
    const auto d = traj.d_hist.col(level).array();

    gradient_x(q, grid.dx, dqdx);
    pdq = p * dqdx;
    conv.apply_pair(p, pdq, w, knl);
    diffusion_rhs(r, params.diff, grid, lap);

    // Reaction factor F'(p) − ∂C/∂p at this level.
    q_prev = q + dt * (params.alpha_w + params.kappa * w * dqdx +
                       params.kappa * knl +
                       (params.r_growth * (1.0 - 2.0 * p / params.k_cap) -
                        params.delta * d) *
                           q);
    r_prev = r + dt * (lap + gam_d * r - params.delta * p * q);

    if (!q_prev.allFinite() || !r_prev.allFinite())
      throw NonFiniteError("adjoint fields became non-finite at time level " +
                           std::to_string(level - 1));

    q.swap(q_prev);
    r.swap(r_prev);
    r_quad[level - 1] = quadrature(r, grid);
    if (pair) {
      pair->q_hist.col(level - 1) = q.matrix();
      pair->r_hist.col(level - 1) = r.matrix();
      pair->r_quad[level - 1] = r_quad[level - 1];
    }
  }
  return r_quad;
}

}  // namespace

AdjointPair solve_adjoint(const Trajectory& traj, const ControlProfile& control,
                          const Grid& grid, const ModelParams& params,
                          const Kernel& kernel) {
  AdjointPair pair;
  adjoint_sweep(traj, control, grid, params, kernel, AdjointSink{&pair});
  return pair;
}

Series adjoint_r_quadrature(const Trajectory& traj,
                            const ControlProfile& control, const Grid& grid,
                            const ModelParams& params, const Kernel& kernel) {
  return adjoint_sweep(traj, control, grid, params, kernel, AdjointSink{});
}

Series reduced_gradient(const ControlProfile& control, const Series& r_quad,
                        const ModelParams& params) {
  return 2.0 * params.beta_w * control.samples + params.gamma_ex * r_quad;
}

Series reduced_gradient(const ControlProfile& control, const AdjointPair& adj,
                        const Trajectory& traj, const Grid& grid,
                        const ModelParams& params) {
  if (adj.r_quad.size() != grid.n_t || traj.n_t != grid.n_t)
    throw UsageError("adjoint pair does not match the grid");
  return reduced_gradient(control, adj.r_quad, params);
}

double inner_l2(const Series& a, const Series& b, const Grid& grid) {
  const auto n = a.size();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double tw = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    acc += tw * a[i] * b[i];
  }
  return grid.dt * acc;
}

double norm_l2(const Series& a, const Grid& grid) {
  return std::sqrt(inner_l2(a, a, grid));
}

}  // namespace onco
