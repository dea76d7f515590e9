#include "onco/model.hpp"

#include <cmath>
#include <string>

namespace onco {

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError("invalid parameter " + field + ": " + what);
}

void require_finite_positive(double v, const std::string& field) {
  require(std::isfinite(v) && v > 0.0, field, "must be finite and > 0");
}

void require_finite_nonneg(double v, const std::string& field) {
  require(std::isfinite(v) && v >= 0.0, field, "must be finite and >= 0");
}

}  // namespace

void ModelParams::validate() const {
  require_finite_positive(r_growth, "r_growth");
  require_finite_positive(k_cap, "k_cap");
  require_finite_positive(delta, "delta");
  require_finite_positive(gamma_ex, "gamma_ex");
  require_finite_positive(diff, "diff");
  require_finite_positive(sigma, "sigma");
  require_finite_positive(m_tol, "m_tol");
  require_finite_positive(t_final, "t_final");
  require_finite_positive(beta_w, "beta_w");
  require_finite_nonneg(lambda_cl, "lambda_cl");
  require_finite_nonneg(kappa, "kappa");
  require_finite_nonneg(alpha_w, "alpha_w");
  require_finite_nonneg(gamma_w, "gamma_w");
  require(std::isfinite(x_min) && std::isfinite(x_max) && x_max > x_min,
          "x_max", "domain must satisfy x_max > x_min");
}

}  // namespace onco
