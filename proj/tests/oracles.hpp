#pragma once

// Test-only reference implementations, deliberately independent of the
// library's production paths: direct-summation convolution against the
// spectral route, scalar ODE integrators against the PDE solver on
// spatially uniform data, and centered differences against hand-coded
// derivatives.

#include <Eigen/Core>
#include <cmath>
#include <functional>

#include "onco/grid.hpp"

namespace oracles {

// O(N²) quadrature of the kernel integral, no FFT involved.
inline onco::Field direct_convolve(const onco::Field& f,
                                   const onco::Kernel& kernel,
                                   const onco::Grid& grid) {
  const int n = grid.n_x;
  onco::Field out(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j)
      acc += kernel.value_at_offset(i - j) * grid.trap_w[j] * f[j];
    out[i] = acc;
  }
  return out;
}

struct OdeState {
  double p;
  double d;
};

using OdeRhs = std::function<OdeState(double t, const OdeState&)>;

// Explicit Euler with the same dt as the PDE solver; on uniform data the
// two must agree to rounding.
inline OdeState euler_ode(const OdeRhs& rhs, OdeState y, double dt,
                          int steps) {
  for (int n = 0; n < steps; ++n) {
    const OdeState k = rhs(n * dt, y);
    y.p += dt * k.p;
    y.d += dt * k.d;
  }
  return y;
}

// Classical fourth-order Runge-Kutta reference.
inline OdeState rk4_ode(const OdeRhs& rhs, OdeState y, double dt, int steps) {
  for (int n = 0; n < steps; ++n) {
    const double t = n * dt;
    const OdeState k1 = rhs(t, y);
    const OdeState k2 =
        rhs(t + 0.5 * dt, {y.p + 0.5 * dt * k1.p, y.d + 0.5 * dt * k1.d});
    const OdeState k3 =
        rhs(t + 0.5 * dt, {y.p + 0.5 * dt * k2.p, y.d + 0.5 * dt * k2.d});
    const OdeState k4 = rhs(t + dt, {y.p + dt * k3.p, y.d + dt * k3.d});
    y.p += dt / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
    y.d += dt / 6.0 * (k1.d + 2.0 * k2.d + 2.0 * k3.d + k4.d);
  }
  return y;
}

// Centered difference of a scalar function.
inline double central_diff(const std::function<double(double)>& f, double x,
                           double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Closed-form logistic solution p(t) = K / (1 + (K/p0 - 1) e^{-rt}).
inline double logistic_exact(double p0, double r, double k, double t) {
  return k / (1.0 + (k / p0 - 1.0) * std::exp(-r * t));
}

}  // namespace oracles
