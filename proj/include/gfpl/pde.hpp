// SPDX-License-Identifier: Apache-2.0
#ifndef GFPL_PDE_HPP
#define GFPL_PDE_HPP

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "gfpl/kernel.hpp"

namespace gfpl {

// Geometric (log-uniform) grid with one edge pinned exactly at x = 1. The
// requested bounds are shifted by at most half a cell to keep the spacing
// uniform while honoring the pin.
class Grid {
 public:
  static Grid log_uniform(double x_min, double x_max, int n_cells);

  int n() const { return static_cast<int>(edges_.size()) - 1; }
  double edge(int i) const { return edges_[i]; }
  double center(int i) const { return 0.5 * (edges_[i] + edges_[i + 1]); }
  double dx(int i) const { return edges_[i + 1] - edges_[i]; }
  double dlog() const { return dlog_; }
  int unit_edge() const { return unit_edge_; }
  double x_min() const { return edges_.front(); }
  double x_max() const { return edges_.back(); }

 private:
  std::vector<double> edges_;
  double dlog_ = 0.0;
  int unit_edge_ = 0;
};

struct PdeState {
  std::vector<double> u;  // per-cell average concentration
  double t = 0.0;
};

struct OperatorParts {
  bool transport = true;
  bool gain = true;
  bool loss = true;
};

enum class TimeScheme { Euler, Heun };

// First-order upwind transport plus conservative remapping of the
// fragmentation gain (Toeplitz in log space, applied with an FFT) and the
// diagonal loss K u. Single-threaded semantics.
class GrowthFragOperator {
 public:
  GrowthFragOperator(Grid grid, ModelParams params,
                     FragmentationKernel kernel, OperatorParts parts = {});
  ~GrowthFragOperator();
  GrowthFragOperator(const GrowthFragOperator&) = delete;
  GrowthFragOperator& operator=(const GrowthFragOperator&) = delete;

  const Grid& grid() const { return grid_; }
  const ModelParams& params() const { return params_; }
  double loss_rate() const { return loss_rate_; }

  // du_i = (A u)_i, the rate of change of the cell averages.
  void apply(std::span<const double> u, std::span<double> du) const;

  // Stability bound min_i dx_i / c(center_i); callers scale by the safety
  // factor before stepping.
  double cfl_bound() const;
  // Largest dt that keeps the update positivity-preserving.
  double default_dt(double safety = 0.9) const;

  // Count per unit time lost as fragments land below the grid.
  double frag_leak_count_rate(std::span<const double> u) const;
  // Count per unit time advected past the top edge.
  double outflow_count_rate(std::span<const double> u) const;

  double count(std::span<const double> u) const;  // <u, 1>
  double mass(std::span<const double> u) const;   // <u, x>

  void step(PdeState& state, double dt, TimeScheme scheme = TimeScheme::Euler,
            double safety = 0.9) const;

 private:
  void apply_transport(std::span<const double> u, std::span<double> du) const;
  void apply_gain(std::span<const double> u, std::span<double> du) const;

  Grid grid_;
  ModelParams params_;
  FragmentationKernel kernel_;
  OperatorParts parts_;
  double loss_rate_ = 0.0;   // K
  double jump_rate_ = 0.0;   // r_tilde
  std::vector<double> edge_speed_;  // upwind speed at interior/outflow edges
  std::vector<double> theta_;       // log-shift gain weights
  std::vector<double> theta_suffix_;

  struct FftPlan;
  std::unique_ptr<FftPlan> fft_;
};

struct SeriesPoint {
  double t = 0.0;
  double count = 0.0;
  double mass = 0.0;
  double frag_leak_rate = 0.0;
  double outflow_rate = 0.0;
  std::vector<double> observables;  // <u_t, f_k>
};

// Steps the state to t_final, recording <u, f> for each observable every
// sample_every time units (and at the final time).
std::vector<SeriesPoint> evolve_and_observe(
    const GrowthFragOperator& op, PdeState& state, double t_final,
    const std::vector<std::function<double(double)>>& observables,
    double sample_every, double dt = 0.0,
    TimeScheme scheme = TimeScheme::Euler, double safety = 0.9);

struct ExtractedProfile {
  std::vector<double> x;        // cell centers
  std::vector<double> density;  // normalized to unit mass on the grid
  double scaled_count = 0.0;    // e^{-lambda t} <u, 1> at extraction time
};

// Normalized rescaled solution for comparison with the stationary profile.
// Requires the rescaled count to have stabilized: relative drift below
// rel_drift_tol per unit time over the trailing unit interval.
ExtractedProfile profile_extract(const GrowthFragOperator& op,
                                 const PdeState& state, double lambda_star,
                                 const std::vector<SeriesPoint>& series,
                                 double rel_drift_tol = 1e-4);

}  // namespace gfpl

#endif  // GFPL_PDE_HPP
