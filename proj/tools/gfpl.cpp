// SPDX-License-Identifier: Apache-2.0
//
// Command line front end: regime classification, stationary-profile tables,
// Monte Carlo estimators, the deterministic solver and the verification
// suite, all driven by one JSON config.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gfpl/config.hpp"
#include "gfpl/errors.hpp"
#include "gfpl/io.hpp"
#include "gfpl/pde.hpp"
#include "gfpl/pdmp.hpp"
#include "gfpl/profile.hpp"
#include "gfpl/spectral.hpp"
#include "gfpl/verify.hpp"

namespace {

using nlohmann::json;

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  int threads = 4;
  std::string format = "json";
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON run configuration")
      ->required();
  cmd->add_option("--seed", args.seed, "Override the config seed");
  cmd->add_option("--out", args.out_dir, "Output directory");
  cmd->add_option("--threads", args.threads, "Monte Carlo worker threads");
  cmd->add_option("--format", args.format, "json or csv estimator output")
      ->check(CLI::IsMember({"json", "csv"}));
}

gfpl::RunConfig load(const CommonArgs& args) {
  gfpl::RunConfig cfg = gfpl::load_config(args.config_path);
  if (args.seed) cfg.seed = *args.seed;
  return cfg;
}

int cmd_classify(const CommonArgs& args) {
  const gfpl::RunConfig cfg = load(args);
  const gfpl::RegimeReport report = gfpl::malthus(cfg.params, cfg.kernel);

  auto row = [](const std::string& key, const std::string& value) {
    std::printf("  %-22s %s\n", key.c_str(), value.c_str());
  };
  auto opt = [](const std::optional<double>& v) {
    return v ? gfpl::format_double(*v) : std::string("-");
  };
  std::printf("regime classification\n");
  row("regime", gfpl::to_string(report.regime));
  row("lambda_star", gfpl::format_double(report.lambda_star));
  row("condition_low", gfpl::format_double(report.condition_low));
  row("beta_plus", opt(report.beta_plus));
  row("beta_minus", opt(report.beta_minus));
  row("L_prime_at_lambda", opt(report.L_prime_at_lambda));
  row("recurrence (tilted)", gfpl::to_string(report.recurrence_class));
  std::cout << gfpl::regime_json(report).dump() << "\n";

  switch (report.regime) {
    case gfpl::Regime::StrictMalthusian:
      return 0;
    case gfpl::Regime::BoundaryLow:
    case gfpl::Regime::BoundaryHigh:
      return 10;
    default:
      return 11;
  }
}

int cmd_profile(const CommonArgs& args) {
  const gfpl::RunConfig cfg = load(args);
  std::filesystem::create_directories(args.out_dir);
  const gfpl::RegimeReport report = gfpl::malthus(cfg.params, cfg.kernel);
  gfpl::write_text_file(
      args.out_dir + "/constants.json",
      gfpl::constants_json(cfg.params, cfg.kernel, report).dump(2) + "\n");

  gfpl::ProfileOptions opts;
  opts.force_numeric_body = cfg.profile.force_numeric_body;
  opts.grid_step = cfg.profile.grid_step;
  opts.y_max = cfg.profile.y_max;
  const gfpl::ProfileDensity profile =
      gfpl::ProfileDensity::build(cfg.params, cfg.kernel, opts);
  gfpl::write_text_file(args.out_dir + "/profile.csv",
                        gfpl::profile_csv(profile, cfg.profile.x_lo,
                                          cfg.profile.x_hi,
                                          cfg.profile.n_output_points));

  if (cfg.profile.svg) {
    std::vector<gfpl::SvgSeries> series(2);
    series[0].label = "density";
    series[1].label = "downside asymptote";
    const double ly = std::log(cfg.profile.x_lo);
    const double dy = std::log(cfg.profile.x_hi / cfg.profile.x_lo) /
                      (cfg.profile.n_output_points - 1);
    for (int i = 0; i < cfg.profile.n_output_points; ++i) {
      const double x = std::exp(ly + i * dy);
      series[0].x.push_back(x);
      series[0].y.push_back(profile.nu(x));
      if (x < 1.0 && profile.c2()) {
        series[1].x.push_back(x);
        series[1].y.push_back(*profile.c2() * std::pow(x, *profile.beta_minus() - 1.0));
      }
    }
    gfpl::write_text_file(args.out_dir + "/profile.svg",
                          gfpl::svg_loglog_plot("stationary profile", series));
  }
  std::cout << "wrote " << args.out_dir << "/profile.csv and constants.json\n";
  return 0;
}

int cmd_simulate(const CommonArgs& args) {
  const gfpl::RunConfig cfg = load(args);
  std::filesystem::create_directories(args.out_dir);
  const double lam = cfg.kernel.lambda_star();
  json records = json::array();

  const double q = cfg.mc.q.value_or(lam);
  const double t_max = cfg.mc.t_max.value_or(200.0 / lam);
  const gfpl::LEstimate le =
      gfpl::estimate_L(cfg.params, cfg.kernel, q, cfg.mc.n_paths, t_max,
                       cfg.seed, args.threads);
  records.push_back({{"estimator", "estimate_L"},
                     {"q", q},
                     {"value", le.mean},
                     {"stderr", le.std_error},
                     {"n", le.n},
                     {"seed", cfg.seed},
                     {"censored_fraction", le.censored_fraction},
                     {"censor_tail_rate", le.censor_tail_rate}});

  const auto one = [](double) { return 1.0; };
  const gfpl::Estimate fk =
      gfpl::feynman_kac(cfg.params, cfg.kernel, one, cfg.mc.t, cfg.mc.x0,
                        cfg.mc.n_paths, cfg.seed + 1, args.threads);
  records.push_back({{"estimator", "semigroup_growth"},
                     {"t", cfg.mc.t},
                     {"value", fk.mean},
                     {"stderr", fk.std_error},
                     {"reference", std::exp(lam * cfg.mc.t)},
                     {"n", fk.n},
                     {"seed", cfg.seed + 1}});

  const gfpl::OccupationHistogram h = gfpl::occupation_histogram(
      cfg.params, cfg.kernel, cfg.mc.t_total, cfg.mc.bin_lo, cfg.mc.bin_hi,
      cfg.mc.n_bins, cfg.seed);
  records.push_back(
      {{"estimator", "occupation_mass_above_1"},
       {"value", h.time_above_one / h.t_total},
       {"t_total", h.t_total},
       {"seed", cfg.seed}});

  for (double t : cfg.mc.martingale_times) {
    const gfpl::TiltedComparison tc =
        gfpl::tilted_vs_weighted(cfg.params, cfg.kernel, one, t, cfg.mc.x0,
                                 cfg.mc.n_paths, cfg.seed + 17, args.threads);
    records.push_back({{"estimator", "martingale_mean"},
                       {"t", t},
                       {"value", tc.weighted_x.mean},
                       {"stderr", tc.weighted_x.std_error},
                       {"n", tc.weighted_x.n},
                       {"seed", cfg.seed + 17}});
  }

  if (cfg.mc.event_log) {
    std::ostringstream ev;
    ev << "path,time,before,after\n";
    for (std::int64_t p = 0; p < cfg.mc.event_log_paths; ++p) {
      gfpl::SimConfig sim;
      sim.process = gfpl::ProcessKind::Xi;
      sim.seed = cfg.seed;
      sim.horizon = cfg.mc.t;
      const gfpl::PathRecord rec =
          gfpl::simulate_path(cfg.params, cfg.kernel, sim, p);
      for (const auto& e : rec.events) {
        ev << p << ',' << gfpl::format_double(e.time) << ','
           << gfpl::format_double(e.before) << ','
           << gfpl::format_double(e.after) << '\n';
      }
    }
    gfpl::write_text_file(args.out_dir + "/events.csv", ev.str());
  }

  const std::string path = args.out_dir + "/estimators.json";
  gfpl::write_text_file(path, json{{"results", records}}.dump(2) + "\n");
  std::cout << "wrote " << path << "\n";
  return 0;
}

int cmd_pde(const CommonArgs& args) {
  const gfpl::RunConfig cfg = load(args);
  std::filesystem::create_directories(args.out_dir);
  const gfpl::Grid grid =
      gfpl::Grid::log_uniform(cfg.pde.x_min, cfg.pde.x_max, cfg.pde.n_cells);
  gfpl::GrowthFragOperator op(grid, cfg.params, cfg.kernel);

  gfpl::PdeState state;
  state.u.resize(grid.n());
  for (int i = 0; i < grid.n(); ++i) {
    const double y = std::log(grid.center(i));
    state.u[i] = std::exp(-0.5 * y * y / (0.25 * 0.25));
  }
  double total = 0.0;
  for (int i = 0; i < grid.n(); ++i) total += state.u[i] * grid.dx(i);
  for (auto& v : state.u) v /= total;

  const gfpl::TimeScheme scheme = cfg.pde.scheme == "heun"
                                      ? gfpl::TimeScheme::Heun
                                      : gfpl::TimeScheme::Euler;
  const auto above1 = [](double x) { return x >= 1.0 ? 1.0 : 0.0; };
  const auto series =
      gfpl::evolve_and_observe(op, state, cfg.pde.t_final, {above1},
                               cfg.pde.sample_every, 0.0, scheme,
                               cfg.pde.dt_safety);
  gfpl::write_text_file(args.out_dir + "/pde_series.csv",
                        gfpl::series_csv(series, {"count_above_1"}));

  std::vector<double> x(grid.n()), dens(grid.n());
  const double count = op.count(state.u);
  for (int i = 0; i < grid.n(); ++i) {
    x[i] = grid.center(i);
    dens[i] = state.u[i] / count;
  }
  gfpl::write_text_file(args.out_dir + "/pde_profile.csv",
                        gfpl::density_csv(x, dens));
  std::cout << "wrote " << args.out_dir << "/pde_series.csv and pde_profile.csv\n";
  return 0;
}

int cmd_verify(const CommonArgs& args) {
  const gfpl::RunConfig cfg = load(args);
  const gfpl::VerifyReport report =
      gfpl::run_acceptance(cfg, args.out_dir, args.threads);
  for (const auto& c : report.criteria) {
    std::printf("%-4s criterion %2d: %s (%.2fs)\n",
                gfpl::to_string(c.status).c_str(), c.id, c.name.c_str(),
                c.runtime_seconds);
    if (c.status == gfpl::CriterionStatus::Fail) std::fputs(c.details.c_str(), stdout);
  }
  std::printf("report: %s/report.json\n", args.out_dir.c_str());
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"growth-fragmentation asymptotics: spectral formulas, Monte "
               "Carlo and a finite-volume solver"};
  app.require_subcommand(1);

  CommonArgs args;
  auto* classify = app.add_subcommand("classify", "Regime classification");
  add_common(classify, args);
  auto* profile = app.add_subcommand("profile", "Stationary profile tables");
  add_common(profile, args);
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimators");
  add_common(simulate, args);
  auto* pde = app.add_subcommand("pde", "Deterministic finite-volume run");
  add_common(pde, args);
  auto* verify = app.add_subcommand("verify", "Run the verification suite");
  add_common(verify, args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (classify->parsed()) return cmd_classify(args);
    if (profile->parsed()) return cmd_profile(args);
    if (simulate->parsed()) return cmd_simulate(args);
    if (pde->parsed()) return cmd_pde(args);
    if (verify->parsed()) return cmd_verify(args);
  } catch (const gfpl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const gfpl::RegimeError& e) {
    std::cerr << "regime error: " << e.what() << "\n";
    return 3;
  } catch (const gfpl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
