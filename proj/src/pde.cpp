// SPDX-License-Identifier: Apache-2.0
#include "gfpl/pde.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "gfpl/errors.hpp"
#include "gfpl/pdmp.hpp"

namespace gfpl {

Grid Grid::log_uniform(double x_min, double x_max, int n_cells) {
  if (!(x_min > 0.0) || !(x_max > x_min)) throw ConfigError("bad grid bounds");
  if (!(x_min < 1.0) || !(x_max > 1.0)) {
    throw ConfigError("the grid must straddle x = 1");
  }
  if (n_cells < 4) throw ConfigError("need at least 4 cells");

  Grid g;
  g.dlog_ = std::log(x_max / x_min) / n_cells;
  // Shift the whole grid so that the edge nearest to 1 lands exactly on it.
  const int k = static_cast<int>(std::lround(std::log(1.0 / x_min) / g.dlog_));
  if (k < 1 || k > n_cells - 1) {
    throw ConfigError("the unit edge must be interior to the grid");
  }
  g.unit_edge_ = k;
  g.edges_.resize(n_cells + 1);
  for (int i = 0; i <= n_cells; ++i) {
    g.edges_[i] = std::exp((i - k) * g.dlog_);
  }
  g.edges_[k] = 1.0;
  return g;
}

struct GrowthFragOperator::FftPlan {
  int padded = 0;
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  double* real_buf = nullptr;
  fftw_complex* freq_buf = nullptr;
  std::vector<std::complex<double>> theta_hat;

  ~FftPlan() {
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
    if (real_buf) fftw_free(real_buf);
    if (freq_buf) fftw_free(freq_buf);
  }
};

GrowthFragOperator::GrowthFragOperator(Grid grid, ModelParams params,
                                       FragmentationKernel kernel,
                                       OperatorParts parts)
    : grid_(std::move(grid)),
      params_(params),
      kernel_(std::move(kernel)),
      parts_(parts) {
  const auto rates = kernel_.total_rates();
  loss_rate_ = rates.first;
  jump_rate_ = rates.second;
  const int n = grid_.n();

  // Upwind speed at edges 1..n: the flow is rightward everywhere, so the
  // speed comes from the growth law; the edge pinned at 1 uses the upper
  // branch per the x >= 1 convention.
  edge_speed_.resize(n);
  for (int i = 0; i < n; ++i) {
    const double xe = grid_.edge(i + 1);
    edge_speed_[i] = (xe >= 1.0 ? params_.a_plus : params_.a_minus) * xe;
  }

  // Gain weights: the count moved from source cell j to target cell j - k
  // per unit time is theta_k * edge_j * u_j. Each theta_k integrates the
  // overlap of the 1/s-stretched target cell with the source cell, using the
  // kernel's exact partial moments over the two s-subintervals.
  const double d = grid_.dlog();
  theta_.resize(n);
  for (int k = 0; k < n; ++k) {
    const double a0 = std::exp(-(k + 1) * d);
    const double a1 = std::exp(-static_cast<double>(k) * d);
    double th = std::exp(d) * kernel_.partial_moment(0.0, a0, a1) -
                a1 * kernel_.partial_moment(-1.0, a0, a1);
    if (k >= 1) {
      const double b1 = std::min(std::exp(-(k - 1.0) * d), 1.0);
      th += std::exp((1.0 - k) * d) * kernel_.partial_moment(-1.0, a1, b1) -
            kernel_.partial_moment(0.0, a1, b1);
    }
    theta_[k] = std::max(th, 0.0);
  }
  // Suffix sums including the analytic part beyond the grid, for leakage.
  const double theta_total = jump_rate_ * (std::exp(d) - 1.0);
  theta_suffix_.assign(n + 1, 0.0);
  double acc = 0.0;
  for (int k = 0; k < n; ++k) acc += theta_[k];
  theta_suffix_[n] = std::max(theta_total - acc, 0.0);
  for (int k = n - 1; k >= 0; --k) {
    theta_suffix_[k] = theta_suffix_[k + 1] + theta_[k];
  }

  // Correlation Gain_i = sum_k theta_k w_{i+k} via zero-padded FFT.
  fft_ = std::make_unique<FftPlan>();
  int padded = 1;
  while (padded < 2 * n) padded <<= 1;
  fft_->padded = padded;
  fft_->real_buf = fftw_alloc_real(padded);
  fft_->freq_buf = fftw_alloc_complex(padded / 2 + 1);
  fft_->forward = fftw_plan_dft_r2c_1d(padded, fft_->real_buf, fft_->freq_buf,
                                       FFTW_ESTIMATE);
  fft_->inverse = fftw_plan_dft_c2r_1d(padded, fft_->freq_buf, fft_->real_buf,
                                       FFTW_ESTIMATE);
  std::fill(fft_->real_buf, fft_->real_buf + padded, 0.0);
  std::copy(theta_.begin(), theta_.end(), fft_->real_buf);
  fftw_execute(fft_->forward);
  fft_->theta_hat.resize(padded / 2 + 1);
  for (int i = 0; i <= padded / 2; ++i) {
    fft_->theta_hat[i] = std::conj(
        std::complex<double>(fft_->freq_buf[i][0], fft_->freq_buf[i][1]));
  }
}

GrowthFragOperator::~GrowthFragOperator() = default;

void GrowthFragOperator::apply_transport(std::span<const double> u,
                                         std::span<double> du) const {
  const int n = grid_.n();
  double flux_in = 0.0;  // nothing enters from below
  for (int i = 0; i < n; ++i) {
    const double flux_out = edge_speed_[i] * u[i];
    du[i] += (flux_in - flux_out) / grid_.dx(i);
    flux_in = flux_out;
  }
}

void GrowthFragOperator::apply_gain(std::span<const double> u,
                                    std::span<double> du) const {
  const int n = grid_.n();
  const int padded = fft_->padded;
  std::fill(fft_->real_buf, fft_->real_buf + padded, 0.0);
  for (int j = 0; j < n; ++j) fft_->real_buf[j] = grid_.edge(j) * u[j];
  fftw_execute(fft_->forward);
  for (int i = 0; i <= padded / 2; ++i) {
    const std::complex<double> prod =
        std::complex<double>(fft_->freq_buf[i][0], fft_->freq_buf[i][1]) *
        fft_->theta_hat[i];
    fft_->freq_buf[i][0] = prod.real();
    fft_->freq_buf[i][1] = prod.imag();
  }
  fftw_execute(fft_->inverse);
  const double scale = 1.0 / padded;
  for (int i = 0; i < n; ++i) {
    // Roundoff in the transform can leave tiny negative counts on cells the
    // convolution should leave empty.
    const double gain = std::max(fft_->real_buf[i] * scale, 0.0);
    du[i] += gain / grid_.dx(i);
  }
}

void GrowthFragOperator::apply(std::span<const double> u,
                               std::span<double> du) const {
  std::fill(du.begin(), du.end(), 0.0);
  if (parts_.transport) apply_transport(u, du);
  if (parts_.gain) apply_gain(u, du);
  if (parts_.loss) {
    for (int i = 0; i < grid_.n(); ++i) du[i] -= loss_rate_ * u[i];
  }
}

double GrowthFragOperator::cfl_bound() const {
  double bound = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_.n(); ++i) {
    const double x = grid_.center(i);
    const double c = (x >= 1.0 ? params_.a_plus : params_.a_minus) * x;
    bound = std::min(bound, grid_.dx(i) / c);
  }
  return bound;
}

double GrowthFragOperator::default_dt(double safety) const {
  double bound = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_.n(); ++i) {
    const double x = grid_.center(i);
    const double c = (x >= 1.0 ? params_.a_plus : params_.a_minus) * x;
    bound = std::min(bound, grid_.dx(i) / (c + loss_rate_ * grid_.dx(i)));
  }
  return safety * bound;
}

double GrowthFragOperator::frag_leak_count_rate(
    std::span<const double> u) const {
  double rate = 0.0;
  for (int j = 0; j < grid_.n(); ++j) {
    rate += grid_.edge(j) * u[j] * theta_suffix_[j + 1];
  }
  return rate;
}

double GrowthFragOperator::outflow_count_rate(std::span<const double> u) const {
  return edge_speed_[grid_.n() - 1] * u[grid_.n() - 1];
}

double GrowthFragOperator::count(std::span<const double> u) const {
  std::vector<double> terms(grid_.n());
  for (int i = 0; i < grid_.n(); ++i) terms[i] = u[i] * grid_.dx(i);
  return pairwise_sum(terms);
}

double GrowthFragOperator::mass(std::span<const double> u) const {
  std::vector<double> terms(grid_.n());
  for (int i = 0; i < grid_.n(); ++i) {
    terms[i] = u[i] * grid_.dx(i) * grid_.center(i);
  }
  return pairwise_sum(terms);
}

void GrowthFragOperator::step(PdeState& state, double dt, TimeScheme scheme,
                              double safety) const {
  if (state.u.size() != static_cast<std::size_t>(grid_.n())) {
    throw ConfigError("state size does not match the grid");
  }
  const double bound = safety * cfl_bound();
  if (dt > bound * (1.0 + 1e-12)) {
    throw CflError("dt exceeds the transport stability bound");
  }
  if (loss_rate_ > 0.0 && dt > 1.0 / loss_rate_) {
    throw CflError("dt exceeds the loss-rate bound");
  }
  const int n = grid_.n();
  std::vector<double> k1(n);
  apply(state.u, k1);
  if (scheme == TimeScheme::Euler) {
    for (int i = 0; i < n; ++i) state.u[i] += dt * k1[i];
  } else {
    std::vector<double> predictor(n), k2(n);
    for (int i = 0; i < n; ++i) predictor[i] = state.u[i] + dt * k1[i];
    apply(predictor, k2);
    for (int i = 0; i < n; ++i) {
      state.u[i] += 0.5 * dt * (k1[i] + k2[i]);
    }
  }
  state.t += dt;
}

std::vector<SeriesPoint> evolve_and_observe(
    const GrowthFragOperator& op, PdeState& state, double t_final,
    const std::vector<std::function<double(double)>>& observables,
    double sample_every, double dt, TimeScheme scheme, double safety) {
  const int n = op.grid().n();
  // Per-observable quadrature weights f(center) * dx.
  std::vector<std::vector<double>> weights;
  weights.reserve(observables.size());
  for (const auto& f : observables) {
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = f(op.grid().center(i)) * op.grid().dx(i);
    weights.push_back(std::move(w));
  }
  auto record = [&](std::vector<SeriesPoint>& out) {
    SeriesPoint pt;
    pt.t = state.t;
    pt.count = op.count(state.u);
    pt.mass = op.mass(state.u);
    pt.frag_leak_rate = op.frag_leak_count_rate(state.u);
    pt.outflow_rate = op.outflow_count_rate(state.u);
    pt.observables.resize(observables.size());
    std::vector<double> terms(n);
    for (std::size_t k = 0; k < weights.size(); ++k) {
      for (int i = 0; i < n; ++i) terms[i] = weights[k][i] * state.u[i];
      pt.observables[k] = pairwise_sum(terms);
    }
    out.push_back(std::move(pt));
  };

  if (dt <= 0.0) dt = op.default_dt(safety);
  std::vector<SeriesPoint> series;
  record(series);
  double next_sample = state.t + sample_every;
  const double t_end = state.t + t_final;
  while (state.t < t_end - 1e-12) {
    const double step_dt = std::min(dt, t_end - state.t);
    op.step(state, step_dt, scheme, safety);
    if (state.t >= next_sample - 1e-9 || state.t >= t_end - 1e-12) {
      record(series);
      while (next_sample <= state.t + 1e-9) next_sample += sample_every;
    }
  }
  return series;
}

ExtractedProfile profile_extract(const GrowthFragOperator& op,
                                 const PdeState& state, double lambda_star,
                                 const std::vector<SeriesPoint>& series,
                                 double rel_drift_tol) {
  if (series.size() < 2) throw NotConverged("too few samples to check drift");
  // Trailing drift of the rescaled count per unit time.
  const SeriesPoint& last = series.back();
  const SeriesPoint* prev = nullptr;
  for (auto it = series.rbegin() + 1; it != series.rend(); ++it) {
    if (last.t - it->t >= 1.0) {
      prev = &*it;
      break;
    }
  }
  if (prev == nullptr) prev = &series.front();
  const double r_last = std::exp(-lambda_star * last.t) * last.count;
  const double r_prev = std::exp(-lambda_star * prev->t) * prev->count;
  const double span = std::max(last.t - prev->t, 1e-9);
  const double drift =
      std::abs(r_last / r_prev - 1.0) / span;
  if (drift > rel_drift_tol) {
    throw NotConverged("rescaled solution still drifting");
  }

  ExtractedProfile out;
  const int n = op.grid().n();
  out.x.resize(n);
  out.density.resize(n);
  const double total = op.count(state.u);
  for (int i = 0; i < n; ++i) {
    out.x[i] = op.grid().center(i);
    out.density[i] = state.u[i] / total;
  }
  out.scaled_count = std::exp(-lambda_star * state.t) * total;
  return out;
}

}  // namespace gfpl
