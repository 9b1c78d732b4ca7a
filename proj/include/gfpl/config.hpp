// SPDX-License-Identifier: Apache-2.0
#ifndef GFPL_CONFIG_HPP
#define GFPL_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gfpl/kernel.hpp"

namespace gfpl {

struct McConfig {
  std::int64_t n_paths = 100000;
  double t = 5.0;                      // semigroup horizon
  std::vector<double> martingale_times = {1.0, 5.0, 10.0};
  std::optional<double> q;             // estimate_L argument; default lambda*
  std::optional<double> t_max;         // excursion censor; default 200/lambda*
  double x0 = 1.0;
  double t_total = 1e6;                // occupation trajectory length
  double bin_lo = 1e-4;
  double bin_hi = 1e4;
  int n_bins = 200;
  bool event_log = false;
  std::int64_t event_log_paths = 1;
};

struct PdeRunConfig {
  double x_min = 1e-4;
  double x_max = 1e4;
  int n_cells = 4096;
  double t_final = 30.0;
  double dt_safety = 0.9;
  std::string scheme = "euler";
  double sample_every = 0.25;
};

struct ProfileRunConfig {
  bool force_numeric_body = false;
  double grid_step = 0.0025;
  double y_max = 12.0;
  int n_output_points = 513;
  double x_lo = 1e-4;
  double x_hi = 1e4;
  bool svg = false;
};

struct RunConfig {
  FragmentationKernel kernel = FragmentationKernel::monomial(1.0);
  ModelParams params{2.0, 0.5};
  std::uint64_t seed = 1;
  McConfig mc;
  PdeRunConfig pde;
  ProfileRunConfig profile;
};

// Parses and validates the JSON run configuration; throws ConfigError with
// a readable message on any violation.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);

}  // namespace gfpl

#endif  // GFPL_CONFIG_HPP
