#include "onco/config.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

#include "onco/errors.hpp"

namespace onco {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw ConfigError("key " + key + ": cannot parse number '" + value + "'");
  return v;
}

long parse_long(const std::string& key, const std::string& value) {
  long v = 0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw ConfigError("key " + key + ": cannot parse integer '" + value + "'");
  return v;
}

using Setter = std::function<void(RunConfig&, const std::string&,
                                  const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto num = [&t](const std::string& key, double ModelParams::* field) {
      t[key] = [field](RunConfig& c, const std::string& k,
                       const std::string& v) {
        c.params.*field = parse_double(k, v);
      };
    };
    num("r_growth", &ModelParams::r_growth);
    num("k_cap", &ModelParams::k_cap);
    num("delta", &ModelParams::delta);
    num("kappa", &ModelParams::kappa);
    num("sigma", &ModelParams::sigma);
    num("diff", &ModelParams::diff);
    num("gamma_ex", &ModelParams::gamma_ex);
    num("lambda_cl", &ModelParams::lambda_cl);
    num("alpha_w", &ModelParams::alpha_w);
    num("beta_w", &ModelParams::beta_w);
    num("gamma_w", &ModelParams::gamma_w);
    num("m_tol", &ModelParams::m_tol);
    num("t_final", &ModelParams::t_final);
    num("x_min", &ModelParams::x_min);
    num("x_max", &ModelParams::x_max);
    t["n_x"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.n_x = static_cast<int>(parse_long(k, v));
    };
    t["cfl"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.cfl = parse_double(k, v);
    };
    t["stride"] = [](RunConfig& c, const std::string& k,
                     const std::string& v) {
      c.stride = static_cast<int>(parse_long(k, v));
    };
    t["seed"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.seed = parse_long(k, v);
    };
    t["control_spec"] = [](RunConfig& c, const std::string&,
                           const std::string& v) { c.control_spec = v; };
    t["output_dir"] = [](RunConfig& c, const std::string&,
                         const std::string& v) { c.output_dir = v; };
    t["p0_norm"] = [](RunConfig& c, const std::string& k,
                      const std::string& v) {
      if (v == "unit-peak")
        c.p0_norm = InitialNorm::kUnitPeak;
      else if (v == "unit-mass")
        c.p0_norm = InitialNorm::kUnitMass;
      else
        throw ConfigError("key " + k +
                          ": expected unit-peak or unit-mass, got '" + v + "'");
    };
    return t;
  }();
  return table;
}

}  // namespace

void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value) {
  const auto& table = setters();
  auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown key '" + key + "'");
  it->second(cfg, key, value);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");

  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(lineno) +
                        ": empty key or value");
    try {
      apply_config_entry(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

std::string RunConfig::resolved_output_dir() const {
  if (!output_dir.empty()) return output_dir;
  if (const char* env = std::getenv("ONCO_OUT_DIR"); env && *env) return env;
  return "out";
}

void RunConfig::validate() const {
  params.validate();
  if (n_x < 3) throw ConfigError("n_x must be >= 3");
  if (!(cfl > 0.0)) throw ConfigError("cfl must be > 0");
  if (stride < 1) throw ConfigError("stride must be >= 1");
  if (control_spec != "zero" && control_spec != "exp-decay") {
    // Anything else names a schedule file; it must at least exist.
    if (!std::filesystem::exists(control_spec))
      throw ConfigError("control_spec file '" + control_spec +
                        "' does not exist");
  }
}

}  // namespace onco
