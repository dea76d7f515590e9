#pragma once

#include <Eigen/Core>

#include "onco/errors.hpp"

namespace onco {

/// Scalar function sampled on the spatial nodes at one time level.
using Field = Eigen::ArrayXd;

/// Scalar function sampled on the time levels.
using Series = Eigen::ArrayXd;

/// All model coefficients and cost weights. Units are documented but not
/// enforced; everything is a plain double at the problem's natural scales.
///
/// Defaults reproduce the reference configuration: logistic tumor growth
/// with nonlocal drift, bilinear drug kill, and first-order blood-tissue
/// drug exchange on the unit interval.
struct ModelParams {
  double r_growth = 1.2;    ///< logistic growth rate [1/time]
  double k_cap = 1.0;       ///< carrying capacity [density]
  double delta = 0.8;       ///< drug kill coefficient [1/(drug·time)]
  double kappa = 0.05;      ///< velocity gain per unit of sensed density [length/time]
  double sigma = 0.01;      ///< interaction kernel standard deviation [length]
  double diff = 0.05;       ///< drug diffusivity [length²/time]
  double gamma_ex = 2.5;    ///< blood–tissue exchange rate [1/time]
  double lambda_cl = 0.3;   ///< drug clearance rate [1/time]
  double alpha_w = 1.0;     ///< running tumor-burden cost weight
  double beta_w = 0.1;      ///< quadratic control (toxicity) cost weight
  double gamma_w = 1.0;     ///< terminal tumor-burden cost weight
  double m_tol = 4.0;       ///< maximum tolerable infusion level [drug]
  double t_final = 1.0;     ///< treatment horizon [time]
  double x_min = 0.0;       ///< left domain endpoint [length]
  double x_max = 1.0;       ///< right domain endpoint [length]

  /// Throws ConfigError naming the offending field if any coefficient is
  /// non-finite or outside its admissible range.
  void validate() const;
};

// Pointwise constitutive functions. Each works elementwise on scalars or
// Eigen array expressions, so they can be fused into solver updates.

/// Logistic proliferation r·p·(1 − p/K).
template <class T>
auto growth_rate(const ModelParams& m, const T& p) {
  return m.r_growth * p * (1.0 - p / m.k_cap);
}

/// Drug-induced death δ·d·p.
template <class T, class U>
auto kill_rate(const ModelParams& m, const T& d, const U& p) {
  return m.delta * d * p;
}

/// Blood–tissue exchange and clearance Γ·(i − d) − λ·d.
template <class T, class U>
auto exchange_rate(const ModelParams& m, const T& i, const U& d) {
  return m.gamma_ex * (i - d) - m.lambda_cl * d;
}

/// Nonlocal drift speed κ·w, with w the kernel-averaged density.
template <class T>
auto velocity(const ModelParams& m, const T& w) {
  return m.kappa * w;
}

/// First-order partials of the constitutive functions, evaluated at one
/// state point. These drive the linearized/backward dynamics.
struct PartialSet {
  double f_p;    ///< dF/dp   = r·(1 − 2p/K)
  double c_d;    ///< dC/dd   = δ·p
  double c_p;    ///< dC/dp   = δ·d
  double gam_i;  ///< dΓ/di   = Γ
  double gam_d;  ///< dΓ/dd   = −(Γ + λ)
  double v_w;    ///< dV/dw   = κ
};

inline PartialSet partials(const ModelParams& m, double d, double p,
                           [[maybe_unused]] double i = 0.0) {
  return PartialSet{
      m.r_growth * (1.0 - 2.0 * p / m.k_cap),
      m.delta * p,
      m.delta * d,
      m.gamma_ex,
      -(m.gamma_ex + m.lambda_cl),
      m.kappa,
  };
}

}  // namespace onco
