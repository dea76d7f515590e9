#include "onco/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <string>

#include "onco/errors.hpp"
#include "onco/forward.hpp"

namespace onco {

namespace {

// FFTW plan creation/destruction is not thread-safe; executions on
// distinct plans are.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// Grid construction

Grid build_grid(const ModelParams& params, int n_x, double cfl,
                InitialNorm p0_norm) {
  params.validate();
  if (n_x < 3) throw ConfigError("n_x must be >= 3, got " + std::to_string(n_x));
  if (!(std::isfinite(cfl) && cfl > 0.0))
    throw ConfigError("cfl must be finite and > 0");

  Grid g;
  g.n_x = n_x;
  g.x_min = params.x_min;
  g.x_max = params.x_max;
  g.cfl = cfl;
  g.t_final = params.t_final;
  g.dx = (params.x_max - params.x_min) / static_cast<double>(n_x - 1);
  g.nodes = Eigen::ArrayXd::LinSpaced(n_x, params.x_min, params.x_max);
  g.trap_w = Eigen::ArrayXd::Constant(n_x, g.dx);
  g.trap_w[0] *= 0.5;
  g.trap_w[n_x - 1] *= 0.5;

  // Velocity budget: the drift the scheme must accommodate is kappa times
  // the kernel average of the seed profile, with a 4x safety factor.
  // Solvers re-check the realized drift every step against this bound.
  Kernel kernel = build_kernel(params, g);
  Field p0 = initial_tumor(g, p0_norm);
  Field w0 = convolve(p0, kernel, g);
  g.v_ref = 4.0 * params.kappa * w0.abs().maxCoeff();

  const double dt_adv = g.v_ref > 0.0 ? g.dx / g.v_ref
                                      : std::numeric_limits<double>::infinity();
  const double dt_diff = g.dx * g.dx / (2.0 * params.diff);
  const double dt_budget = cfl * std::min(dt_adv, dt_diff);

  // Shrink (never grow) the step so the horizon is hit exactly.
  const long steps =
      std::max(1L, static_cast<long>(std::ceil(params.t_final / dt_budget - 1e-12)));
  g.dt = params.t_final / static_cast<double>(steps);
  g.n_t = static_cast<int>(steps) + 1;
  return g;
}

double quadrature(const Field& f, const Grid& grid) {
  return (grid.trap_w * f).sum();
}

// ---------------------------------------------------------------------------
// Interaction kernel and spectral convolution

Kernel build_kernel(const ModelParams& params, const Grid& grid) {
  const int n = grid.n_x;
  Kernel k;
  k.profile.resize(2 * n - 1);
  const double inv2s2 = 1.0 / (2.0 * params.sigma * params.sigma);
  const double norm = 1.0 / (params.sigma * std::sqrt(2.0 * M_PI));
  // Fill one side and mirror so symmetry holds exactly.
  for (int j = 0; j < n; ++j) {
    const double h = static_cast<double>(j) * grid.dx;
    const double v = norm * std::exp(-h * h * inv2s2);
    k.profile[(n - 1) + j] = v;
    k.profile[(n - 1) - j] = v;
  }

  k.fft_len = next_pow2(2 * n - 1);
  const int len = k.fft_len;

  // Circular layout: offset j at index j mod len. The layout is exactly
  // even, so its DFT is purely real; drop the O(eps) imaginary residue.
  double* in = fftw_alloc_real(len);
  fftw_complex* spec = fftw_alloc_complex(len / 2 + 1);
  for (int i = 0; i < len; ++i) in[i] = 0.0;
  in[0] = k.profile[n - 1];
  for (int j = 1; j < n; ++j) {
    in[j] = k.profile[(n - 1) + j];
    in[len - j] = k.profile[(n - 1) - j];
  }
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_plan plan = fftw_plan_dft_r2c_1d(len, in, spec, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }
  // Fold the inverse-transform 1/len normalization into the spectrum.
  k.spectrum_half.resize(len / 2 + 1);
  for (int i = 0; i <= len / 2; ++i)
    k.spectrum_half[i] = spec[i][0] / static_cast<double>(len);
  k.spectrum_full.resize(len);
  for (int i = 0; i < len; ++i)
    k.spectrum_full[i] = k.spectrum_half[std::min(i, len - i)];
  fftw_free(in);
  fftw_free(spec);
  return k;
}

struct Convolver::Impl {
  int n = 0;
  int len = 0;
  Eigen::ArrayXd trap_w;
  Eigen::ArrayXd spec_half;
  Eigen::ArrayXd spec_full;

  double* rbuf = nullptr;
  fftw_complex* rspec = nullptr;
  fftw_complex* cbuf = nullptr;
  fftw_complex* cspec = nullptr;
  fftw_plan plan_r2c{}, plan_c2r{}, plan_fwd{}, plan_bwd{};

  Impl(const Grid& grid, const Kernel& kernel)
      : n(grid.n_x),
        len(kernel.fft_len),
        trap_w(grid.trap_w),
        spec_half(kernel.spectrum_half),
        spec_full(kernel.spectrum_full) {
    rbuf = fftw_alloc_real(len);
    rspec = fftw_alloc_complex(len / 2 + 1);
    cbuf = fftw_alloc_complex(len);
    cspec = fftw_alloc_complex(len);
    for (int i = 0; i < len; ++i) rbuf[i] = 0.0;
    for (int i = 0; i < len; ++i) cbuf[i][0] = cbuf[i][1] = 0.0;
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_r2c = fftw_plan_dft_r2c_1d(len, rbuf, rspec, FFTW_ESTIMATE);
    plan_c2r = fftw_plan_dft_c2r_1d(len, rspec, rbuf, FFTW_ESTIMATE);
    plan_fwd = fftw_plan_dft_1d(len, cbuf, cspec, FFTW_FORWARD, FFTW_ESTIMATE);
    plan_bwd = fftw_plan_dft_1d(len, cspec, cbuf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan_r2c);
    fftw_destroy_plan(plan_c2r);
    fftw_destroy_plan(plan_fwd);
    fftw_destroy_plan(plan_bwd);
    fftw_free(rbuf);
    fftw_free(rspec);
    fftw_free(cbuf);
    fftw_free(cspec);
  }
};

Convolver::Convolver(const Grid& grid, const Kernel& kernel)
    : impl_(std::make_unique<Impl>(grid, kernel)) {}

Convolver::~Convolver() = default;

void Convolver::apply(const Eigen::Ref<const Eigen::ArrayXd>& f, Field& out) {
  Impl& s = *impl_;
  for (int i = 0; i < s.n; ++i) s.rbuf[i] = f[i] * s.trap_w[i];
  for (int i = s.n; i < s.len; ++i) s.rbuf[i] = 0.0;
  fftw_execute(s.plan_r2c);
  for (int i = 0; i <= s.len / 2; ++i) {
    s.rspec[i][0] *= s.spec_half[i];
    s.rspec[i][1] *= s.spec_half[i];
  }
  fftw_execute(s.plan_c2r);
  out.resize(s.n);
  for (int i = 0; i < s.n; ++i) out[i] = s.rbuf[i];
}

void Convolver::apply_pair(const Eigen::Ref<const Eigen::ArrayXd>& a,
                           const Eigen::Ref<const Eigen::ArrayXd>& b,
                           Field& out_a, Field& out_b) {
  Impl& s = *impl_;
  for (int i = 0; i < s.n; ++i) {
    s.cbuf[i][0] = a[i] * s.trap_w[i];
    s.cbuf[i][1] = b[i] * s.trap_w[i];
  }
  for (int i = s.n; i < s.len; ++i) s.cbuf[i][0] = s.cbuf[i][1] = 0.0;
  fftw_execute(s.plan_fwd);
  for (int i = 0; i < s.len; ++i) {
    s.cspec[i][0] *= s.spec_full[i];
    s.cspec[i][1] *= s.spec_full[i];
  }
  fftw_execute(s.plan_bwd);
  out_a.resize(s.n);
  out_b.resize(s.n);
  for (int i = 0; i < s.n; ++i) {
    out_a[i] = s.cbuf[i][0];
    out_b[i] = s.cbuf[i][1];
  }
}

Field convolve(const Field& f, const Kernel& kernel, const Grid& grid) {
  Convolver conv(grid, kernel);
  Field out;
  conv.apply(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Finite-difference kernels

void advection_rhs(const Field& p, const Field& vel, const Grid& grid,
                   Field& out) {
  const int n = grid.n_x;
  out.resize(n);
  // Interface fluxes, ghost state 0 outside the domain with extrapolated
  // velocity: outflow is upwinded, inflow carries nothing.
  Eigen::ArrayXd vp = vel * p;
  Eigen::ArrayXd va = vel.abs();
  Eigen::ArrayXd flux(n + 1);
  flux.segment(1, n - 1) =
      0.5 * (vp.head(n - 1) + vp.tail(n - 1)) -
      0.5 * va.head(n - 1).max(va.tail(n - 1)) * (p.tail(n - 1) - p.head(n - 1));
  flux[0] = 0.5 * vp[0] - 0.5 * va[0] * p[0];
  flux[n] = 0.5 * vp[n - 1] + 0.5 * va[n - 1] * p[n - 1];
  out = -(flux.tail(n) - flux.head(n)) / grid.dx;
}

Field advection_rhs(const Field& p, const Field& vel, const Grid& grid) {
  Field out;
  advection_rhs(p, vel, grid, out);
  return out;
}

void diffusion_rhs(const Field& d, double diff, const Grid& grid, Field& out) {
  const int n = grid.n_x;
  const double c = diff / (grid.dx * grid.dx);
  out.resize(n);
  out.segment(1, n - 2) =
      c * (d.head(n - 2) - 2.0 * d.segment(1, n - 2) + d.tail(n - 2));
  // Mirrored ghosts: zero-flux boundaries.
  out[0] = 2.0 * c * (d[1] - d[0]);
  out[n - 1] = 2.0 * c * (d[n - 2] - d[n - 1]);
}

Field diffusion_rhs(const Field& d, double diff, const Grid& grid) {
  Field out;
  diffusion_rhs(d, diff, grid, out);
  return out;
}

}  // namespace onco
