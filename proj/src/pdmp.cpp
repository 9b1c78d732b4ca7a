// SPDX-License-Identifier: Apache-2.0
#include "gfpl/pdmp.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "gfpl/errors.hpp"
#include "gfpl/rng.hpp"
#include "gfpl/spectral.hpp"

namespace gfpl {

namespace {

constexpr std::uint64_t kSecondStream = std::uint64_t{1} << 40;

// Runs one trajectory, reporting every linear piece through seg(t0, t1,
// level0, slope) and every jump or creeping crossing through evt(t, before,
// after). Returns the final level; accumulates the branch weight integral.
template <class SegFn, class EvtFn>
double walk(const ModelParams& params, const FragmentationKernel& kernel,
            ProcessKind kind, double start, double horizon, PathRng& rng,
            double& weight, SegFn&& seg, EvtFn&& evt) {
  const auto rates = kernel.total_rates();
  const double rate = (kind == ProcessKind::Xi) ? rates.first : rates.second;
  const JumpKind jump_kind =
      (kind == ProcessKind::Xi) ? JumpKind::XType : JumpKind::YType;

  double t = 0.0;
  double level = start;
  weight = 0.0;
  while (t < horizon) {
    const double t_jump = t + rng.exponential(rate);
    double t_end = std::min(t_jump, horizon);
    if (level < 0.0) {
      const double t_cross = t + (0.0 - level) / params.a_minus;
      if (t_cross < t_end) {
        seg(t, t_cross, level, params.a_minus);
        weight += params.a_minus * (t_cross - t);
        evt(t_cross, 0.0, 0.0);
        t = t_cross;
        level = 0.0;
      } else {
        seg(t, t_end, level, params.a_minus);
        weight += params.a_minus * (t_end - t);
        level += params.a_minus * (t_end - t);
        t = t_end;
      }
    }
    if (t < t_end) {
      seg(t, t_end, level, params.a_plus);
      weight += params.a_plus * (t_end - t);
      level += params.a_plus * (t_end - t);
      t = t_end;
    }
    if (t_jump >= horizon) break;
    const double z = kernel.sample_jump(jump_kind, rng.uniform());
    evt(t, level, level + z);
    level += z;
  }
  return level;
}

void parallel_fill(std::int64_t n, int threads,
                   const std::function<void(std::int64_t, std::int64_t)>& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || n < 2 * threads) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  const std::int64_t chunk = (n + threads - 1) / threads;
  for (int w = 0; w < threads; ++w) {
    const std::int64_t lo = w * chunk;
    const std::int64_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

Estimate reduce(std::span<const double> values) {
  Estimate e;
  e.n = static_cast<std::int64_t>(values.size());
  if (e.n == 0) return e;
  e.mean = pairwise_sum(values) / static_cast<double>(e.n);
  if (e.n < 2) return e;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - e.mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / static_cast<double>(e.n - 1);
  e.std_error = std::sqrt(var / static_cast<double>(e.n));
  return e;
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 32) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

PathRecord simulate_path(const ModelParams& params,
                         const FragmentationKernel& kernel,
                         const SimConfig& config, std::int64_t path_index) {
  if (config.n_paths < 1) throw ConfigError("n_paths must be at least 1");
  if (!(config.horizon > 0.0)) throw ConfigError("horizon must be positive");
  PathRecord record;
  PathRng rng(config.seed, static_cast<std::uint64_t>(path_index));
  double weight = 0.0;
  record.final_level =
      walk(params, kernel, config.process, config.start_level, config.horizon,
           rng, weight, [](double, double, double, double) {},
           [&record](double t, double before, double after) {
             record.events.push_back({t, before, after});
           });
  record.elapsed = config.horizon;
  record.log_weight = (config.process == ProcessKind::Xi) ? weight : 0.0;
  return record;
}

Estimate feynman_kac(const ModelParams& params,
                     const FragmentationKernel& kernel,
                     const std::function<double(double)>& f, double t,
                     double x, std::int64_t n_paths, std::uint64_t seed,
                     int threads) {
  if (!(x > 0.0)) throw ConfigError("the start size must be positive");
  if (t == 0.0) return {f(x), 0.0, n_paths};
  const double log_x = std::log(x);
  std::vector<double> vals(static_cast<std::size_t>(n_paths));
  parallel_fill(n_paths, threads, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      PathRng rng(seed, static_cast<std::uint64_t>(i));
      double weight = 0.0;
      const double level = walk(params, kernel, ProcessKind::Xi, log_x, t, rng,
                                weight, [](double, double, double, double) {},
                                [](double, double, double) {});
      vals[static_cast<std::size_t>(i)] =
          std::exp(log_x + weight - level) * f(std::exp(level));
    }
  });
  return reduce(vals);
}

LEstimate estimate_L(const ModelParams& params,
                     const FragmentationKernel& kernel, double q,
                     std::int64_t n_paths, double t_max, std::uint64_t seed,
                     int threads) {
  const double qs = q_star(params, kernel);
  if (q <= qs + 1e-12 * std::max(1.0, std::abs(qs))) {
    throw ConfigError("estimate_L needs q above q_star");
  }
  if (!(t_max > 0.0)) throw ConfigError("t_max must be positive");
  const double rate = kernel.total_rates().first;

  std::vector<double> vals(static_cast<std::size_t>(n_paths), 0.0);
  std::vector<std::uint8_t> censored(static_cast<std::size_t>(n_paths), 0);
  parallel_fill(n_paths, threads, [&](std::int64_t lo_i, std::int64_t hi_i) {
    for (std::int64_t i = lo_i; i < hi_i; ++i) {
      PathRng rng(seed, static_cast<std::uint64_t>(i));
      double t = 0.0, level = 0.0, weight = 0.0;
      bool done = false;
      while (!done) {
        const double t_jump = t + rng.exponential(rate);
        if (level < 0.0) {
          const double t_cross = t + (0.0 - level) / params.a_minus;
          if (t_cross <= t_jump) {
            // First return: the excursion ends by creeping back to 0.
            weight += params.a_minus * (t_cross - t);
            if (t_cross <= t_max) {
              vals[static_cast<std::size_t>(i)] =
                  std::exp(-q * t_cross + weight);
            } else {
              censored[static_cast<std::size_t>(i)] = 1;
            }
            done = true;
            continue;
          }
          weight += params.a_minus * (t_jump - t);
          level += params.a_minus * (t_jump - t);
        } else {
          weight += params.a_plus * (t_jump - t);
          level += params.a_plus * (t_jump - t);
        }
        t = t_jump;
        if (t > t_max) {
          censored[static_cast<std::size_t>(i)] = 1;
          done = true;
          continue;
        }
        level += kernel.sample_jump(JumpKind::XType, rng.uniform());
      }
    }
  });

  const Estimate base = reduce(vals);
  LEstimate out;
  out.mean = base.mean;
  out.std_error = base.std_error;
  out.n = base.n;
  std::int64_t n_censored = 0;
  for (auto c : censored) n_censored += c;
  out.censored_fraction =
      static_cast<double>(n_censored) / static_cast<double>(n_paths);
  const auto inf_plus = make_exponent(Family::Xi, true, params, kernel).infimum();
  const auto inf_minus =
      make_exponent(Family::Xi, false, params, kernel).infimum();
  out.censor_tail_rate = std::max(params.a_plus - q + inf_plus.value,
                                  params.a_minus - q + inf_minus.value);
  return out;
}

OccupationHistogram occupation_histogram(const ModelParams& params,
                                         const FragmentationKernel& kernel,
                                         double t_total, double x_lo,
                                         double x_hi, int n_bins,
                                         std::uint64_t seed) {
  if (!(t_total > 0.0)) throw ConfigError("t_total must be positive");
  if (!(x_lo > 0.0) || !(x_hi > x_lo) || n_bins < 1) {
    throw ConfigError("invalid histogram range");
  }
  const RegimeReport report = malthus(params, kernel);
  if (report.regime == Regime::FailsLow || report.regime == Regime::FailsHigh) {
    throw RegimeError("occupation statistics need a recurrent tilted process");
  }

  OccupationHistogram h;
  h.t_total = t_total;
  h.x_edges.resize(n_bins + 1);
  const double y_lo = std::log(x_lo);
  const double dy = (std::log(x_hi) - y_lo) / n_bins;
  for (int i = 0; i <= n_bins; ++i) h.x_edges[i] = std::exp(y_lo + i * dy);
  h.time_in_bin.assign(n_bins, 0.0);

  PathRng rng(seed, 0);
  double weight = 0.0;
  walk(params, kernel, ProcessKind::Eta, 0.0, t_total, rng, weight,
       [&](double t0, double t1, double level0, double slope) {
         const double y0 = level0;
         const double y1 = level0 + slope * (t1 - t0);
         // Upward drift: sojourn time in [c, d) is overlap length / slope.
         const double inv = 1.0 / slope;
         if (y0 < 0.0) h.time_below_one += (std::min(y1, 0.0) - y0) * inv;
         if (y1 > 0.0) h.time_above_one += (y1 - std::max(y0, 0.0)) * inv;
         if (y1 <= y_lo) {
           h.time_underflow += (y1 - y0) * inv;
           return;
         }
         const double top = y_lo + n_bins * dy;
         if (y0 >= top) {
           h.time_overflow += (y1 - y0) * inv;
           return;
         }
         if (y0 < y_lo) h.time_underflow += (y_lo - y0) * inv;
         if (y1 > top) h.time_overflow += (y1 - top) * inv;
         const int k_lo = std::max(0, static_cast<int>((y0 - y_lo) / dy));
         const int k_hi =
             std::min(n_bins - 1, static_cast<int>((y1 - y_lo) / dy));
         for (int k = k_lo; k <= k_hi; ++k) {
           const double c = y_lo + k * dy;
           const double d = c + dy;
           const double overlap =
               std::min(y1, d) - std::max(y0, c);
           if (overlap > 0.0) h.time_in_bin[k] += overlap * inv;
         }
       },
       [](double, double, double) {});
  return h;
}

TiltedComparison tilted_vs_weighted(const ModelParams& params,
                                    const FragmentationKernel& kernel,
                                    const std::function<double(double)>& f,
                                    double t, double x, std::int64_t n_paths,
                                    std::uint64_t seed, int threads) {
  if (!(x > 0.0)) throw ConfigError("the start size must be positive");
  TiltedComparison out;
  if (t == 0.0) {
    out.direct_y = {f(x), 0.0, n_paths};
    out.weighted_x = {f(x), 0.0, n_paths};
    return out;
  }
  const double log_x = std::log(x);
  const double lambda = kernel.lambda_star();

  std::vector<double> direct(static_cast<std::size_t>(n_paths));
  std::vector<double> weighted(static_cast<std::size_t>(n_paths));
  parallel_fill(n_paths, threads, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      {
        PathRng rng(seed, static_cast<std::uint64_t>(i));
        double w = 0.0;
        const double level =
            walk(params, kernel, ProcessKind::Eta, log_x, t, rng, w,
                 [](double, double, double, double) {},
                 [](double, double, double) {});
        direct[static_cast<std::size_t>(i)] = f(std::exp(level));
      }
      {
        PathRng rng(seed, static_cast<std::uint64_t>(i) + kSecondStream);
        double w = 0.0;
        const double level =
            walk(params, kernel, ProcessKind::Xi, log_x, t, rng, w,
                 [](double, double, double, double) {},
                 [](double, double, double) {});
        const double mart = std::exp(log_x - level + w - lambda * t);
        weighted[static_cast<std::size_t>(i)] = mart * f(std::exp(level));
      }
    }
  });
  out.direct_y = reduce(direct);
  out.weighted_x = reduce(weighted);
  return out;
}

}  // namespace gfpl
