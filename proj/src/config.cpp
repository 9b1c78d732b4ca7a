// SPDX-License-Identifier: Apache-2.0
#include "gfpl/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gfpl/errors.hpp"

namespace gfpl {

namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& key, double fallback,
                      bool required = false) {
  if (!j.contains(key)) {
    if (required) throw ConfigError("missing required field '" + key + "'");
    return fallback;
  }
  if (!j.at(key).is_number()) {
    throw ConfigError("field '" + key + "' must be a number");
  }
  return j.at(key).get<double>();
}

FragmentationKernel parse_kernel(const json& root) {
  if (!root.contains("kernel")) throw ConfigError("missing 'kernel' block");
  const json& k = root.at("kernel");
  const std::string type = k.value("type", "");
  const double epsilon = require_number(root, "epsilon", 0.5);
  if (type == "monomial") {
    const double gamma = require_number(k, "gamma", 1.0, true);
    return FragmentationKernel::monomial(gamma, epsilon);
  }
  if (type == "table") {
    if (!k.contains("s") || !k.contains("rho")) {
      throw ConfigError("table kernel needs 's' and 'rho' arrays");
    }
    if (!root.contains("epsilon")) {
      throw ConfigError("table kernel needs an explicit 'epsilon'");
    }
    return FragmentationKernel::tabulated(k.at("s").get<std::vector<double>>(),
                                          k.at("rho").get<std::vector<double>>(),
                                          epsilon);
  }
  throw ConfigError("kernel type must be 'monomial' or 'table'");
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }

  RunConfig cfg;
  cfg.kernel = parse_kernel(root);
  const double a_minus = require_number(root, "a_minus", 0.0, true);
  const double a_plus = require_number(root, "a_plus", 0.0, true);
  if (!(a_plus > 0.0) || !(a_plus < a_minus)) {
    throw ConfigError("need 0 < a_plus < a_minus");
  }
  cfg.params = ModelParams(a_minus, a_plus);
  if (root.contains("seed")) {
    if (!root.at("seed").is_number_unsigned()) {
      throw ConfigError("seed must be a nonnegative integer");
    }
    cfg.seed = root.at("seed").get<std::uint64_t>();
  }

  if (root.contains("mc")) {
    const json& m = root.at("mc");
    cfg.mc.n_paths = static_cast<std::int64_t>(
        require_number(m, "n_paths", static_cast<double>(cfg.mc.n_paths)));
    if (cfg.mc.n_paths < 1) throw ConfigError("mc.n_paths must be positive");
    cfg.mc.t = require_number(m, "t", cfg.mc.t);
    if (m.contains("q")) cfg.mc.q = require_number(m, "q", 0.0);
    if (m.contains("t_max")) cfg.mc.t_max = require_number(m, "t_max", 0.0);
    cfg.mc.x0 = require_number(m, "x0", cfg.mc.x0);
    cfg.mc.t_total = require_number(m, "t_total", cfg.mc.t_total);
    cfg.mc.bin_lo = require_number(m, "bin_lo", cfg.mc.bin_lo);
    cfg.mc.bin_hi = require_number(m, "bin_hi", cfg.mc.bin_hi);
    cfg.mc.n_bins =
        static_cast<int>(require_number(m, "n_bins", cfg.mc.n_bins));
    if (m.contains("martingale_times")) {
      cfg.mc.martingale_times =
          m.at("martingale_times").get<std::vector<double>>();
    }
    cfg.mc.event_log = m.value("event_log", false);
    cfg.mc.event_log_paths = static_cast<std::int64_t>(require_number(
        m, "event_log_paths", static_cast<double>(cfg.mc.event_log_paths)));
  }

  if (root.contains("pde")) {
    const json& p = root.at("pde");
    cfg.pde.x_min = require_number(p, "x_min", cfg.pde.x_min);
    cfg.pde.x_max = require_number(p, "x_max", cfg.pde.x_max);
    cfg.pde.n_cells =
        static_cast<int>(require_number(p, "n_cells", cfg.pde.n_cells));
    cfg.pde.t_final = require_number(p, "t_final", cfg.pde.t_final);
    cfg.pde.dt_safety = require_number(p, "dt_safety", cfg.pde.dt_safety);
    cfg.pde.sample_every =
        require_number(p, "sample_every", cfg.pde.sample_every);
    cfg.pde.scheme = p.value("scheme", cfg.pde.scheme);
    if (cfg.pde.scheme != "euler" && cfg.pde.scheme != "heun") {
      throw ConfigError("pde.scheme must be 'euler' or 'heun'");
    }
    if (!(cfg.pde.dt_safety > 0.0) || cfg.pde.dt_safety > 1.0) {
      throw ConfigError("pde.dt_safety must lie in (0, 1]");
    }
  }

  if (root.contains("profile")) {
    const json& p = root.at("profile");
    cfg.profile.force_numeric_body = p.value("force_numeric_body", false);
    cfg.profile.grid_step =
        require_number(p, "grid_step", cfg.profile.grid_step);
    cfg.profile.y_max = require_number(p, "y_max", cfg.profile.y_max);
    cfg.profile.n_output_points = static_cast<int>(
        require_number(p, "n_output_points", cfg.profile.n_output_points));
    cfg.profile.x_lo = require_number(p, "x_lo", cfg.profile.x_lo);
    cfg.profile.x_hi = require_number(p, "x_hi", cfg.profile.x_hi);
    cfg.profile.svg = p.value("svg", false);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace gfpl
