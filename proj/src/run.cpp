#include "onco/run.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <random>

#include "onco/adjoint.hpp"
#include "onco/errors.hpp"
#include "onco/io.hpp"

namespace onco {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

struct Problem {
  Grid grid;
  Kernel kernel;
  Field p0;
  Field d0;
};

Problem setup(const RunConfig& cfg) {
  cfg.validate();
  Problem pr;
  pr.grid = build_grid(cfg.params, cfg.n_x, cfg.cfl, cfg.p0_norm);
  pr.kernel = build_kernel(cfg.params, pr.grid);
  pr.p0 = initial_tumor(pr.grid, cfg.p0_norm);
  pr.d0 = Field::Zero(pr.grid.n_x);
  return pr;
}

void write_optimize_artifacts(const std::string& dir, const Grid& grid,
                              const OptimizeReport& report, int stride) {
  write_control_csv(join(dir, "control.csv"), grid, report.final_control);
  write_convergence_csv(join(dir, "convergence.csv"), report.iterates);
  if (!report.control_snapshots.empty())
    write_control_evolution_csv(join(dir, "control_evolution.csv"), grid,
                                report, stride);

  Series t = Eigen::ArrayXd::LinSpaced(grid.n_t, 0.0, grid.t_final);
  write_svg_line(join(dir, "control.svg"), t, report.final_control.samples,
                 "Optimal infusion schedule", "t", "I(t)");
  Series iters(report.iterates.size()), js(report.iterates.size());
  for (size_t i = 0; i < report.iterates.size(); ++i) {
    iters[static_cast<Eigen::Index>(i)] = static_cast<double>(i);
    js[static_cast<Eigen::Index>(i)] = report.iterates[i].j;
  }
  write_svg_line(join(dir, "convergence.svg"), iters, js, "Cost per iterate",
                 "iteration", "J");
}

}  // namespace

ControlProfile make_control(const RunConfig& cfg, const Grid& grid) {
  if (cfg.control_spec == "zero") return zero_control(grid);
  if (cfg.control_spec == "exp-decay") return initial_guess(grid, cfg.params);
  return load_control_csv(cfg.control_spec, grid, cfg.params);
}

double drug_peak_time(const Trajectory& traj) {
  Eigen::Index argmax = 0;
  const double peak = traj.mass_d.maxCoeff(&argmax);
  if (peak <= 0.0)
    throw UsageError("drug_peak_time: no drug present in the trajectory");
  return traj.times[argmax];
}

SimulateResult cmd_simulate(const RunConfig& cfg) {
  const auto t0 = Clock::now();
  Problem pr = setup(cfg);
  ControlProfile control = make_control(cfg, pr.grid);

  SimulateResult res;
  res.traj = solve_forward(control, pr.p0, pr.d0, pr.grid, cfg.params,
                           pr.kernel, cfg.stride);
  res.runtime_s = seconds_since(t0);

  const std::string dir = cfg.resolved_output_dir();
  write_state_csv(join(dir, "state.csv"), res.traj, pr.grid);
  write_mass_csv(join(dir, "mass.csv"), res.traj);

  std::ofstream sum(join(dir, "summary.txt"));
  sum << "time levels      " << res.traj.n_t << "\n"
      << "dt               " << format_num(res.traj.dt) << "\n"
      << "min p (pre-clamp) " << format_num(res.traj.min_p) << "\n"
      << "min d (pre-clamp) " << format_num(res.traj.min_d) << "\n"
      << "max p            " << format_num(res.traj.peak_p.maxCoeff()) << "\n"
      << "max d            " << format_num(res.traj.peak_d.maxCoeff()) << "\n"
      << "clamped values   " << res.traj.clamp_count << "\n"
      << "runtime [s]      " << format_num(res.runtime_s) << "\n";
  return res;
}

OptimizeResult cmd_optimize(const RunConfig& cfg) {
  const auto t0 = Clock::now();
  Problem pr = setup(cfg);
  ControlProfile start = make_control(cfg, pr.grid);
  const std::string dir = cfg.resolved_output_dir();

  OptimizeOptions opts;
  opts.record_snapshots = true;

  // Keep enough state to flush partial artifacts if the solver throws.
  std::vector<IterRecord> seen;
  ControlProfile latest = start;
  opts.on_iterate = [&](const IterRecord& rec, const ControlProfile& c) {
    seen.push_back(rec);
    latest = c;
  };

  OptimizeResult res;
  res.grid = pr.grid;
  try {
    res.report = optimize(cfg.params, pr.grid, pr.kernel, pr.p0, pr.d0, start,
                          opts);
  } catch (...) {
    write_control_csv(join(dir, "control.csv"), pr.grid, latest);
    write_convergence_csv(join(dir, "convergence.csv"), seen);
    throw;
  }
  res.runtime_s = seconds_since(t0);
  write_optimize_artifacts(dir, pr.grid, res.report, cfg.stride);
  return res;
}

CompareResult cmd_compare(const RunConfig& cfg) {
  const auto t0 = Clock::now();
  Problem pr = setup(cfg);
  ControlProfile start = make_control(cfg, pr.grid);
  const std::string dir = cfg.resolved_output_dir();

  CompareResult res;
  res.report = optimize(cfg.params, pr.grid, pr.kernel, pr.p0, pr.d0, start);

  // The two diagnostic runs are independent; overlap them. Storage stays
  // coarse, the per-level series are what the metrics need.
  const int stride = std::max(cfg.stride, 1);
  auto controlled = std::async(std::launch::async, [&] {
    return solve_forward(res.report.final_control, pr.p0, pr.d0, pr.grid,
                         cfg.params, pr.kernel, stride);
  });
  Trajectory traj_u = solve_forward(zero_control(pr.grid), pr.p0, pr.d0,
                                    pr.grid, cfg.params, pr.kernel, stride);
  Trajectory traj_c = controlled.get();

  res.t = traj_c.times;
  res.mass_c = traj_c.mass_p;
  res.mass_u = traj_u.mass_p;
  res.peak_c = traj_c.peak_p;
  res.peak_u = traj_u.peak_p;
  res.delta_pct.resize(traj_c.n_t);
  for (int n = 0; n < traj_c.n_t; ++n)
    res.delta_pct[n] = res.mass_u[n] > 0.0
                           ? (res.mass_u[n] - res.mass_c[n]) / res.mass_u[n] * 100.0
                           : 0.0;
  res.final_delta_pct = res.delta_pct[traj_c.n_t - 1];
  res.drug_peak_t = drug_peak_time(traj_c);
  res.runtime_s = seconds_since(t0);

  write_optimize_artifacts(dir, pr.grid, res.report, cfg.stride);
  write_metrics_csv(join(dir, "metrics.csv"), res.t, res.mass_c, res.mass_u,
                    res.peak_c, res.peak_u);
  write_svg_line(join(dir, "improvement.svg"), res.t, res.delta_pct,
                 "Relative tumor-mass reduction", "t", "delta [%]");
  return res;
}

GradCheckReport gradient_check(const ModelParams& params, const Grid& grid,
                               const Kernel& kernel, const Field& p0,
                               const Field& d0, const ControlProfile& control,
                               int n_probes, double eps, double threshold,
                               long seed) {
  GradCheckReport rep;
  rep.threshold = threshold;

  Trajectory traj = solve_forward(control, p0, d0, grid, params, kernel, 1);
  Series grad = reduced_gradient(
      control, adjoint_r_quadrature(traj, control, grid, params, kernel),
      params);

  // Piecewise-constant ±1 sign patterns over fixed fractions of the
  // horizon, so a seeded direction means the same continuous-time
  // perturbation at every resolution. Samples where I ± eps would leave
  // the admissible box are zeroed.
  constexpr int kBlocks = 16;
  std::mt19937_64 rng(static_cast<unsigned long long>(seed));
  std::uniform_int_distribution<int> coin(0, 1);

  rep.passed = true;
  for (int probe = 0; probe < n_probes; ++probe) {
    double signs[kBlocks];
    for (int b = 0; b < kBlocks; ++b) signs[b] = coin(rng) ? 1.0 : -1.0;

    Series h(grid.n_t);
    for (int n = 0; n < grid.n_t; ++n) {
      int b = static_cast<int>(static_cast<double>(kBlocks) * grid.time_at(n) /
                               grid.t_final);
      if (b >= kBlocks) b = kBlocks - 1;
      const double i_n = control.samples[n];
      const bool movable = i_n - eps >= 0.0 && i_n + eps <= params.m_tol;
      h[n] = movable ? signs[b] : 0.0;
    }

    ControlProfile up{control.samples + eps * h};
    ControlProfile down{control.samples - eps * h};
    const double j_up = evaluate_cost(up, p0, d0, grid, params, kernel);
    const double j_down = evaluate_cost(down, p0, d0, grid, params, kernel);

    GradCheckProbe pr;
    pr.fd_dd = (j_up - j_down) / (2.0 * eps);
    pr.adjoint_dd = inner_l2(grad, h, grid);
    pr.rel_error =
        std::abs(pr.adjoint_dd - pr.fd_dd) / std::max(std::abs(pr.fd_dd), 1e-14);
    rep.passed = rep.passed && pr.rel_error <= threshold;
    rep.probes.push_back(pr);
  }
  return rep;
}

GradCheckReport cmd_gradcheck(const RunConfig& cfg) {
  Problem pr = setup(cfg);
  ControlProfile control = make_control(cfg, pr.grid);
  GradCheckReport rep = gradient_check(cfg.params, pr.grid, pr.kernel, pr.p0,
                                       pr.d0, control, 5, 1e-4, 5e-2, cfg.seed);
  for (size_t k = 0; k < rep.probes.size(); ++k) {
    const auto& p = rep.probes[k];
    std::cout << "probe " << k << ": adjoint " << format_num(p.adjoint_dd)
              << "  fd " << format_num(p.fd_dd) << "  rel_err "
              << format_num(p.rel_error) << "  "
              << (p.rel_error <= rep.threshold ? "ok" : "FAIL") << "\n";
  }
  std::cout << (rep.passed ? "gradient check passed" : "gradient check FAILED")
            << " (threshold " << format_num(rep.threshold) << ")\n";
  return rep;
}

}  // namespace onco
