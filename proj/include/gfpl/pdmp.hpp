// SPDX-License-Identifier: Apache-2.0
#ifndef GFPL_PDMP_HPP
#define GFPL_PDMP_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gfpl/kernel.hpp"

namespace gfpl {

enum class ProcessKind { Xi, Eta };

// One trajectory of the refracted log-size process: linear drift between
// events, slope a_plus at and above 0 and a_minus below, negative jumps at
// the kind-specific Poisson rate. Upward crossings of 0 creep and are
// recorded as events with before == after == 0.
struct PathEvent {
  double time = 0.0;
  double before = 0.0;
  double after = 0.0;
};

struct PathRecord {
  std::vector<PathEvent> events;
  double final_level = 0.0;
  double elapsed = 0.0;
  double log_weight = 0.0;  // \int c(X_s)/X_s ds; tracked for Xi paths
};

struct SimConfig {
  ProcessKind process = ProcessKind::Xi;
  double start_level = 0.0;
  std::uint64_t seed = 1;
  std::int64_t n_paths = 1;
  double horizon = 1.0;
};

PathRecord simulate_path(const ModelParams& params,
                         const FragmentationKernel& kernel,
                         const SimConfig& config, std::int64_t path_index = 0);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n = 0;
};

// Monte Carlo of the semigroup through the driving process:
// x E[ exp(weight) f(X_t) / X_t ] with X_0 = x.
Estimate feynman_kac(const ModelParams& params,
                     const FragmentationKernel& kernel,
                     const std::function<double(double)>& f, double t,
                     double x, std::int64_t n_paths, std::uint64_t seed,
                     int threads = 1);

struct LEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double censored_fraction = 0.0;
  // Exponent of the censoring-bias bound per unit of t_max (negative when
  // the truncated tail is exponentially small).
  double censor_tail_rate = 0.0;
  std::int64_t n = 0;
};

// Excursion estimator of L(q): average of exp(-q H + weight) over first
// returns of the log-size process to 0, zero for paths still out at t_max.
LEstimate estimate_L(const ModelParams& params,
                     const FragmentationKernel& kernel, double q,
                     std::int64_t n_paths, double t_max, std::uint64_t seed,
                     int threads = 1);

struct OccupationHistogram {
  std::vector<double> x_edges;     // log-spaced, size n_bins + 1
  std::vector<double> time_in_bin;
  double time_below_one = 0.0;     // exact sojourn time with level < 0
  double time_above_one = 0.0;
  double time_underflow = 0.0;     // below x_edges.front()
  double time_overflow = 0.0;
  double t_total = 0.0;
};

// Time-weighted histogram of the tilted size process over one trajectory,
// with exact per-segment sojourn accounting.
OccupationHistogram occupation_histogram(const ModelParams& params,
                                         const FragmentationKernel& kernel,
                                         double t_total, double x_lo,
                                         double x_hi, int n_bins,
                                         std::uint64_t seed);

struct TiltedComparison {
  Estimate direct_y;    // E[f(Y_t)]
  Estimate weighted_x;  // E[M'_t f(X_t)]
};

// Two estimators of the same rescaled semigroup value; the second one
// importance-weights the untilted process by the martingale
// M'_t = (X_0/X_t) exp(weight) e^{-lambda* t}.
TiltedComparison tilted_vs_weighted(const ModelParams& params,
                                    const FragmentationKernel& kernel,
                                    const std::function<double(double)>& f,
                                    double t, double x, std::int64_t n_paths,
                                    std::uint64_t seed, int threads = 1);

// Order-independent reduction used by all estimators.
double pairwise_sum(std::span<const double> values);

}  // namespace gfpl

#endif  // GFPL_PDMP_HPP
