#pragma once

#include <Eigen/Core>
#include <memory>

#include "onco/model.hpp"

namespace onco {

/// Uniform space/time discretization of [x_min,x_max] × [0,T].
///
/// The time step is budgeted against both the advective and the diffusive
/// stability limits, dt = cfl·min(dx/v_ref, dx²/(2·D)), then shrunk so the
/// horizon is an integer number of steps. v_ref is the velocity bound the
/// budget was computed with; solvers abort if the realized drift ever
/// exceeds it.
struct Grid {
  int n_x = 0;
  double dx = 0.0;
  Eigen::ArrayXd nodes;    ///< n_x node positions
  int n_t = 0;             ///< time levels (steps + 1)
  double dt = 0.0;
  double cfl = 0.0;
  double v_ref = 0.0;
  double t_final = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;
  Eigen::ArrayXd trap_w;   ///< trapezoid quadrature weights: dx, halved at the ends

  double time_at(int level) const { return static_cast<double>(level) * dt; }
};

/// Whether the seed tumor profile is scaled to unit peak or unit mass.
enum class InitialNorm { kUnitPeak, kUnitMass };

/// Builds the grid for the given resolution and CFL number.
/// p0_norm selects the initial-profile normalization the velocity bound is
/// derived from. Throws ConfigError for non-finite parameters or n_x < 3.
Grid build_grid(const ModelParams& params, int n_x, double cfl,
                InitialNorm p0_norm = InitialNorm::kUnitPeak);

/// Sampled interaction kernel K(h) = exp(−h²/(2σ²)) / (σ√(2π)) together
/// with its padded real spectrum. profile[j] holds K((j − n_x + 1)·dx), so
/// the layout is exactly symmetric by construction.
struct Kernel {
  Eigen::ArrayXd profile;        ///< 2·n_x − 1 offsets
  int fft_len = 0;               ///< power-of-two padded transform length
  Eigen::ArrayXd spectrum_half;  ///< real DFT bins 0..fft_len/2, scaled by 1/fft_len
  Eigen::ArrayXd spectrum_full;  ///< mirrored full-length copy, same scaling

  double value_at_offset(int j) const {
    return profile[j + (static_cast<int>(profile.size()) - 1) / 2];
  }
};

Kernel build_kernel(const ModelParams& params, const Grid& grid);

/// Reusable spectral convolution engine for one (grid, kernel) pair.
/// Owns the FFT plans and scratch buffers; create one per solver run
/// (plan creation is internally serialized, execution is not shared).
class Convolver {
 public:
  Convolver(const Grid& grid, const Kernel& kernel);
  ~Convolver();
  Convolver(const Convolver&) = delete;
  Convolver& operator=(const Convolver&) = delete;

  /// out = trapezoid-weighted kernel integral of f over the domain.
  void apply(const Eigen::Ref<const Eigen::ArrayXd>& f, Field& out);

  /// Two integrals for the price of one complex transform: the kernel
  /// spectrum is purely real, so a + i·b stays separated.
  void apply_pair(const Eigen::Ref<const Eigen::ArrayXd>& a,
                  const Eigen::Ref<const Eigen::ArrayXd>& b, Field& out_a,
                  Field& out_b);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Trapezoidal rule over the domain; exact for affine integrands.
double quadrature(const Field& f, const Grid& grid);

/// Nonlocal average w(x) = ∫ K(x−y) f(y) dy by zero-padded spectral
/// multiplication. Matches the direct O(N²) quadrature to ~1e-10.
Field convolve(const Field& f, const Kernel& kernel, const Grid& grid);

/// −∂ₓ(vel·p) with a local Lax-Friedrichs flux,
///   F_{i+1/2} = ½(vel_i·p_i + vel_{i+1}·p_{i+1}) − ½·a_{i+1/2}·(p_{i+1} − p_i),
///   a_{i+1/2} = max(|vel_i|, |vel_{i+1}|),
/// with zero-inflow ghost cells (ghost state 0, ghost velocity extrapolated).
void advection_rhs(const Field& p, const Field& vel, const Grid& grid,
                   Field& out);
Field advection_rhs(const Field& p, const Field& vel, const Grid& grid);

/// diff·∂ₓₓd with the second-order central stencil; homogeneous Neumann
/// boundaries via mirrored ghost values. Conserves trapezoid mass exactly.
void diffusion_rhs(const Field& d, double diff, const Grid& grid, Field& out);
Field diffusion_rhs(const Field& d, double diff, const Grid& grid);

}  // namespace onco
