#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "onco/config.hpp"
#include "onco/errors.hpp"
#include "onco/io.hpp"
#include "onco/run.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInstability = 3;
constexpr int kExitNoConvergence = 4;
constexpr int kExitGradCheck = 5;

struct CliArgs {
  std::string command;
  std::string config_path;
  std::string out_dir;
  std::string control;
  int nx = -1;
  long seed = -1;
  bool seed_set = false;
};

onco::RunConfig assemble_config(const CliArgs& args) {
  onco::RunConfig cfg;
  if (!args.config_path.empty()) cfg = onco::load_config(args.config_path);
  if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
  if (!args.control.empty()) cfg.control_spec = args.control;
  if (args.nx > 0) cfg.n_x = args.nx;
  if (args.seed_set) cfg.seed = args.seed;
  cfg.validate();
  return cfg;
}

int dispatch(const CliArgs& args) {
  const onco::RunConfig cfg = assemble_config(args);
  if (args.command == "simulate") {
    auto res = onco::cmd_simulate(cfg);
    std::cout << "simulate: " << res.traj.n_t << " time levels, runtime "
              << onco::format_num(res.runtime_s) << " s, artifacts in "
              << cfg.resolved_output_dir() << "\n";
    return kExitOk;
  }
  if (args.command == "optimize") {
    auto res = onco::cmd_optimize(cfg);
    const auto& rep = res.report;
    std::cout << "optimize: " << rep.iterations_used << " iterations, J "
              << onco::format_num(rep.iterates.back().j)
              << (rep.converged ? ", converged" : ", NOT converged")
              << ", artifacts in " << cfg.resolved_output_dir() << "\n";
    return rep.converged ? kExitOk : kExitNoConvergence;
  }
  if (args.command == "compare") {
    auto res = onco::cmd_compare(cfg);
    std::cout << "compare: final mass reduction "
              << onco::format_num(res.final_delta_pct) << " %, drug peak at t="
              << onco::format_num(res.drug_peak_t) << ", runtime "
              << onco::format_num(res.runtime_s) << " s, artifacts in "
              << cfg.resolved_output_dir() << "\n";
    return res.report.converged ? kExitOk : kExitNoConvergence;
  }
  // gradcheck
  auto rep = onco::cmd_gradcheck(cfg);
  return rep.passed ? kExitOk : kExitGradCheck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal tumor growth simulation and optimal drug scheduling"};
  app.require_subcommand(1);

  CliArgs args;
  for (const char* name : {"simulate", "optimize", "compare", "gradcheck"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", args.config_path, "key = value config file");
    sub->add_option("--out", args.out_dir, "output directory");
    sub->add_option("--control", args.control,
                    "zero | exp-decay | schedule csv path");
    sub->add_option("--nx", args.nx, "spatial resolution override");
    sub->add_option("--seed", args.seed, "probe-direction seed")
        ->each([&args](const std::string&) { args.seed_set = true; });
    sub->callback([&args, name] { args.command = name; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    return dispatch(args);
  } catch (const onco::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const onco::StabilityError& e) {
    std::cerr << "instability: " << e.what() << "\n";
    return kExitInstability;
  } catch (const onco::NonFiniteError& e) {
    std::cerr << "instability: " << e.what() << "\n";
    return kExitInstability;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
