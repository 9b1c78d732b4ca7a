// SPDX-License-Identifier: Apache-2.0
#include "gfpl/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gfpl/errors.hpp"

namespace gfpl {

namespace {

constexpr double kHuge = 1e300;

double re(double x) { return x; }
double re(const std::complex<double>& x) { return x.real(); }

// \int_{t0}^{t1} t^k e^{w t} dt for k in {0,1,2}, stable for small |w|.
// Expansion about the interval midpoint keeps the small-|w*h| series free of
// cancellation; the closed form takes over once the exponentials separate.
template <typename S>
S exp_poly_integral(int k, S w, double t0, double t1) {
  const double tm = 0.5 * (t0 + t1);
  const double h = 0.5 * (t1 - t0);
  if (re(w) * tm + std::abs(w) * h > 600.0) return S(kHuge);

  S g[3] = {S(0.0), S(0.0), S(0.0)};
  if (std::abs(w) * h < 0.5) {
    // g[j] = \int_{-h}^{h} u^j e^{wu} du via the exponential series.
    for (int j = 0; j <= k; ++j) {
      S sum(0.0);
      S wm(1.0);  // w^m / m!
      for (int m = 0; m < 40; ++m) {
        const int p = j + m;
        double mom = (p % 2 == 0) ? 2.0 * std::pow(h, p + 1) / (p + 1) : 0.0;
        S term = wm * mom;
        sum += term;
        wm *= w / static_cast<double>(m + 1);
        if (std::abs(wm) * 2.0 * std::pow(h, p + 2) / (p + 2) <
            1e-20 * (std::abs(sum) + 1e-300)) {
          break;
        }
      }
      g[j] = sum;
    }
  } else {
    const S ep = std::exp(w * h);
    const S em = std::exp(-w * h);
    const S iw = S(1.0) / w;
    g[0] = (ep - em) * iw;
    if (k >= 1) g[1] = h * iw * (ep + em) - iw * iw * (ep - em);
    if (k >= 2) {
      g[2] = ep * (h * h * iw - 2.0 * h * iw * iw + 2.0 * iw * iw * iw) -
             em * (h * h * iw + 2.0 * h * iw * iw + 2.0 * iw * iw * iw);
    }
  }

  const S scale = std::exp(w * tm);
  switch (k) {
    case 0:
      return scale * g[0];
    case 1:
      return scale * (tm * g[0] + g[1]);
    default:
      return scale * (tm * tm * g[0] + 2.0 * tm * g[1] + g[2]);
  }
}

}  // namespace

ModelParams::ModelParams(double am, double ap) : a_minus(am), a_plus(ap) {
  if (!(ap > 0.0) || !(am > 0.0)) {
    throw ConfigError("growth slopes must be positive");
  }
  if (ap > am) {
    throw ConfigError("a_plus must not exceed a_minus");
  }
}

FragmentationKernel FragmentationKernel::monomial(double gamma,
                                                  double epsilon) {
  FragmentationKernel k;
  k.monomial_ = true;
  k.gamma_ = gamma;
  k.epsilon_ = epsilon;
  k.cache_ = std::make_shared<MomentCache>();
  k.validate();
  return k;
}

FragmentationKernel FragmentationKernel::tabulated(std::vector<double> s,
                                                   std::vector<double> rho,
                                                   double epsilon) {
  FragmentationKernel k;
  k.monomial_ = false;
  k.epsilon_ = epsilon;
  k.s_ = std::move(s);
  k.rho_ = std::move(rho);
  k.cache_ = std::make_shared<MomentCache>();
  k.validate();

  // Cumulative per-segment masses for the two jump laws.
  const std::size_t nseg = k.s_.size() - 1;
  k.cdf_x_.assign(nseg + 1, 0.0);
  k.cdf_y_.assign(nseg + 1, 0.0);
  for (std::size_t i = 0; i < nseg; ++i) {
    k.cdf_y_[i + 1] = k.cdf_y_[i] + k.partial_moment(0.0, k.s_[i], k.s_[i + 1]);
    k.cdf_x_[i + 1] = k.cdf_x_[i] + k.partial_moment(1.0, k.s_[i], k.s_[i + 1]);
  }
  return k;
}

void FragmentationKernel::validate() const {
  if (monomial_) {
    if (!(gamma_ >= 1.0)) throw ConfigError("monomial kernel needs gamma >= 1");
    if (!(epsilon_ > 0.0) || !(epsilon_ < gamma_)) {
      throw ConfigError("monomial kernel needs 0 < epsilon < gamma");
    }
    return;
  }
  if (s_.size() < 2 || s_.size() != rho_.size()) {
    throw ConfigError("tabulated kernel needs matching s/rho with >= 2 nodes");
  }
  if (!(epsilon_ > 0.0)) throw ConfigError("epsilon must be positive");
  double max_rho = 0.0;
  for (std::size_t i = 0; i < s_.size(); ++i) {
    if (!(s_[i] > 0.0) || !(s_[i] < 1.0)) {
      throw ConfigError("tabulated nodes must lie strictly inside (0,1)");
    }
    if (i > 0 && !(s_[i] > s_[i - 1])) {
      throw ConfigError("tabulated nodes must be strictly increasing");
    }
    if (!(rho_[i] >= 0.0)) throw ConfigError("rho values must be nonnegative");
    max_rho = std::max(max_rho, rho_[i]);
  }
  if (max_rho == 0.0) throw ConfigError("rho must not vanish identically");
}

double FragmentationKernel::gamma() const {
  if (!monomial_) throw DomainError("gamma is defined for monomial kernels");
  return gamma_;
}

double FragmentationKernel::density(double s) const {
  if (monomial_) {
    if (s <= 0.0 || s > 1.0) return 0.0;
    return std::pow(s, gamma_ - 1.0);
  }
  if (s < s_.front() || s > s_.back()) return 0.0;
  auto it = std::upper_bound(s_.begin(), s_.end(), s);
  std::size_t i = (it == s_.begin()) ? 0 : (it - s_.begin() - 1);
  i = std::min(i, s_.size() - 2);
  const double f = (s - s_[i]) / (s_[i + 1] - s_[i]);
  return rho_[i] + f * (rho_[i + 1] - rho_[i]);
}

// Sum of c0 * E_k(q+1) + c1 * E_k(q+2) over segments, clipped to [lo, hi];
// rho(s) = c0 + c1 s on each segment.
double FragmentationKernel::tab_weighted_integral(int log_power, double shift,
                                                  double lo, double hi) const {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < s_.size(); ++i) {
    const double sa = std::max(s_[i], lo);
    const double sb = std::min(s_[i + 1], hi);
    if (sb <= sa) continue;
    const double c1 = (rho_[i + 1] - rho_[i]) / (s_[i + 1] - s_[i]);
    const double c0 = rho_[i] - c1 * s_[i];
    const double ta = std::log(sa);
    const double tb = std::log(sb);
    total += c0 * exp_poly_integral(log_power, shift + 1.0, ta, tb) +
             c1 * exp_poly_integral(log_power, shift + 2.0, ta, tb);
  }
  return total;
}

double FragmentationKernel::moment(double q) const {
  if (monomial_) {
    if (q <= -gamma_) throw DomainError("moment diverges for q <= -gamma");
    return 1.0 / (q + gamma_);
  }
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->values.find(q);
    if (it != cache_->values.end()) return it->second;
  }
  const double value = tab_weighted_integral(0, q, 0.0, 1.0);
  std::lock_guard<std::mutex> lock(cache_->mutex);
  cache_->values.emplace(q, value);
  return value;
}

std::complex<double> FragmentationKernel::moment(std::complex<double> q) const {
  if (monomial_) return 1.0 / (q + gamma_);
  std::complex<double> total(0.0);
  for (std::size_t i = 0; i + 1 < s_.size(); ++i) {
    const double c1 = (rho_[i + 1] - rho_[i]) / (s_[i + 1] - s_[i]);
    const double c0 = rho_[i] - c1 * s_[i];
    const double ta = std::log(s_[i]);
    const double tb = std::log(s_[i + 1]);
    total += c0 * exp_poly_integral(0, q + 1.0, ta, tb) +
             c1 * exp_poly_integral(0, q + 2.0, ta, tb);
    if (std::abs(total) >= kHuge) return std::complex<double>(kHuge, 0.0);
  }
  return total;
}

double FragmentationKernel::log_moment(double q) const {
  if (monomial_) {
    if (q <= -gamma_) throw DomainError("log moment diverges for q <= -gamma");
    const double d = q + gamma_;
    return -1.0 / (d * d);
  }
  return tab_weighted_integral(1, q, 0.0, 1.0);
}

std::complex<double> FragmentationKernel::log_moment(
    std::complex<double> q) const {
  if (monomial_) {
    const std::complex<double> d = q + gamma_;
    return -1.0 / (d * d);
  }
  std::complex<double> total(0.0);
  for (std::size_t i = 0; i + 1 < s_.size(); ++i) {
    const double c1 = (rho_[i + 1] - rho_[i]) / (s_[i + 1] - s_[i]);
    const double c0 = rho_[i] - c1 * s_[i];
    const double ta = std::log(s_[i]);
    const double tb = std::log(s_[i + 1]);
    total += c0 * exp_poly_integral(1, q + 1.0, ta, tb) +
             c1 * exp_poly_integral(1, q + 2.0, ta, tb);
  }
  return total;
}

double FragmentationKernel::log2_moment(double q) const {
  if (monomial_) {
    if (q <= -gamma_) throw DomainError("log2 moment diverges for q <= -gamma");
    const double d = q + gamma_;
    return 2.0 / (d * d * d);
  }
  return tab_weighted_integral(2, q, 0.0, 1.0);
}

double FragmentationKernel::partial_moment(double q, double lo,
                                           double hi) const {
  hi = std::min(hi, 1.0);
  if (!(hi > lo) || hi <= 0.0) return 0.0;
  if (monomial_) {
    const double p = q + gamma_;
    if (lo <= 0.0) {
      if (p <= 0.0) throw DomainError("partial moment diverges at 0");
      return std::pow(hi, p) / p;
    }
    return exp_poly_integral(0, p, std::log(lo), std::log(hi));
  }
  return tab_weighted_integral(0, q, std::max(lo, 0.0), hi);
}

std::pair<double, double> FragmentationKernel::total_rates() const {
  return {moment(1.0), moment(0.0)};
}

double FragmentationKernel::lambda_star() const {
  return moment(0.0) - moment(1.0);
}

double FragmentationKernel::sample_jump(JumpKind kind, double u) const {
  if (monomial_) {
    const double power = (kind == JumpKind::XType) ? gamma_ + 1.0 : gamma_;
    return std::log(u) / power;
  }
  const std::vector<double>& cdf =
      (kind == JumpKind::XType) ? cdf_x_ : cdf_y_;
  const int k = (kind == JumpKind::XType) ? 1 : 0;
  const double target = u * cdf.back();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
  std::size_t i = (it == cdf.begin()) ? 0 : (it - cdf.begin() - 1);
  i = std::min(i, cdf.size() - 2);

  const double sa = s_[i];
  const double sb = s_[i + 1];
  const double c1 = (rho_[i + 1] - rho_[i]) / (sb - sa);
  const double c0 = rho_[i] - c1 * sa;
  const double resid = target - cdf[i];
  // F(x) = \int_{sa}^{x} s^k (c0 + c1 s) ds, increasing on [sa, sb].
  auto mass = [&](double x) {
    if (k == 0) {
      return c0 * (x - sa) + 0.5 * c1 * (x * x - sa * sa);
    }
    return 0.5 * c0 * (x * x - sa * sa) + c1 * (x * x * x - sa * sa * sa) / 3.0;
  };
  double lo = sa, hi = sb, x = 0.5 * (sa + sb);
  for (int iter = 0; iter < 100; ++iter) {
    const double f = mass(x) - resid;
    if (std::abs(f) <= 1e-16 * cdf.back()) break;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double slope = std::pow(x, k) * (c0 + c1 * x);
    double next = (slope > 0.0) ? x - f / slope : 0.5 * (lo + hi);
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-16 * sb) {
      x = next;
      break;
    }
    x = next;
  }
  return std::log(x);
}

}  // namespace gfpl
