#pragma once

#include <string>

#include "onco/grid.hpp"
#include "onco/model.hpp"

namespace onco {

/// One run's worth of configuration: model coefficients plus
/// discretization, control source, and output settings.
///
/// The zero-argument state reproduces the reference experiment:
/// r_growth=1.2, k_cap=1.0, delta=0.8, kappa=0.05, sigma=0.01, diff=0.05,
/// gamma_ex=2.5, lambda_cl=0.3, alpha_w=1.0, beta_w=0.1, gamma_w=1.0,
/// m_tol=4.0, t_final=1.0 on [0,1] with n_x=200 and cfl=0.025.
struct RunConfig {
  ModelParams params;
  int n_x = 200;
  double cfl = 0.025;
  std::string control_spec = "exp-decay";  ///< zero | exp-decay | <csv path>
  std::string output_dir;                  ///< empty: $ONCO_OUT_DIR or "out"
  int stride = 10;                         ///< state.csv time decimation
  long seed = 0;                           ///< probe directions for gradcheck
  InitialNorm p0_norm = InitialNorm::kUnitPeak;

  /// Output directory after applying the environment fallback.
  std::string resolved_output_dir() const;

  void validate() const;  // throws ConfigError naming the offending key
};

/// Parses a flat `key = value` file ('#' starts a comment). Unknown keys
/// and malformed lines raise ConfigError with the line number; missing
/// keys keep their defaults. An empty file yields the default config.
RunConfig load_config(const std::string& path);

/// Parses one `key = value` assignment into an existing config (used for
/// both file lines and CLI overrides). Throws ConfigError on unknown keys
/// or unparsable values.
void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value);

}  // namespace onco
