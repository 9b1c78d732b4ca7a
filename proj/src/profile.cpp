// SPDX-License-Identifier: Apache-2.0
#include "gfpl/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gfpl/errors.hpp"
#include "gfpl/laplace.hpp"

namespace gfpl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 16-point Gauss-Legendre rule on [-1, 1], positive half.
constexpr double kGlNode[8] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr double kGlWeight[8] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

template <typename F>
double gauss16(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = half * kGlNode[i];
    sum += kGlWeight[i] * (f(mid - dx) + f(mid + dx));
  }
  return half * sum;
}

template <typename F>
double gauss16_composite(const F& f, double a, double b, double max_step) {
  const int n = std::max(1, static_cast<int>(std::ceil((b - a) / max_step)));
  const double h = (b - a) / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    sum += gauss16(f, a + i * h, a + (i + 1) * h);
  }
  return sum;
}

// Stable evaluator of Psi~_+(q) / (a_+ Psi~_-(q) (q - beta_+)), written as
// (1 + (a_+ - a_-)/B(q)) / (a_+ (q - beta_+)) with B = Psi~_-(q)/q, so the
// zero of Psi~_- at the origin cancels and huge |moment| values on inversion
// contours degrade gracefully to the drift-dominated limit.
class MtildeTransform {
 public:
  MtildeTransform(const ModelParams& params, const FragmentationKernel& kernel)
      : params_(params),
        kernel_(kernel),
        eta_plus_(Family::Eta, params.a_plus, kernel),
        eta_minus_(Family::Eta, params.a_minus, kernel) {
    beta_plus_ = eta_plus_.right_inverse(0.0);
    if (!(beta_plus_ > 0.0)) {
      throw RegimeError("downside transform needs a positive tail rate");
    }
    dminus0_ = eta_minus_.derivative(0.0);
    ddminus0_ = eta_minus_.second_derivative(0.0);
    const double dp = eta_plus_.derivative(beta_plus_);
    const double ddp = eta_plus_.second_derivative(beta_plus_);
    u0_ = dp / beta_plus_;
    u1_ = 0.5 * (ddp / beta_plus_ - 2.0 * dp / (beta_plus_ * beta_plus_));
  }

  double beta_plus() const { return beta_plus_; }

  template <typename S>
  S eval(S q) const {
    const S dq = q - beta_plus_;
    const S b = psi_minus_over_q(q);
    if (std::abs(dq) < 1e-7) {
      return (u0_ + dq * u1_) / (params_.a_plus * b);
    }
    const S one(1.0);
    return (one + (params_.a_plus - params_.a_minus) / b) /
           (params_.a_plus * dq);
  }

 private:
  template <typename S>
  S psi_minus_over_q(S q) const {
    if (std::abs(q) < 1e-5) return S(dminus0_) + 0.5 * q * ddminus0_;
    const S psi = params_.a_minus * q + kernel_.moment(S(q)) - mass0();
    return psi / q;
  }

  double mass0() const { return kernel_.moment(0.0); }

  ModelParams params_;
  FragmentationKernel kernel_;
  LaplaceExponent eta_plus_;
  LaplaceExponent eta_minus_;
  double beta_plus_ = 0.0;
  double dminus0_ = 0.0;
  double ddminus0_ = 0.0;
  double u0_ = 0.0;
  double u1_ = 0.0;
};

void require_strict(const ModelParams& params,
                    const FragmentationKernel& kernel, const char* what) {
  const double c_low = -kernel.log_moment(0.0);
  const double tol = 1e-12 * std::max(1.0, c_low);
  if (!(params.a_plus < c_low - tol) || !(params.a_minus > c_low + tol)) {
    throw RegimeError(std::string(what) + " needs the strict regime");
  }
}

}  // namespace

ScaleFunction::ScaleFunction(LaplaceExponent exponent, int nodes)
    : exponent_(std::move(exponent)), nodes_(nodes) {
  if (exponent_.family() != Family::Eta) {
    throw ConfigError("scale functions are defined for Eta-family exponents");
  }
  shift_ = exponent_.right_inverse(0.0) + 1.0;
}

double ScaleFunction::operator()(double x) const {
  if (x < 0.0) return 0.0;
  if (x == 0.0) return 1.0 / exponent_.drift();
  const auto transform = [this](std::complex<double> q) {
    return 1.0 / exponent_.value(q);
  };
  return invert_checked(transform, x, 1e-5, nodes_, shift_);
}

double scale_function(const LaplaceExponent& exponent, double x) {
  return ScaleFunction(exponent)(x);
}

double two_sided_exit(const LaplaceExponent& exponent, double x, double a) {
  if (!(a > 0.0) || x < 0.0 || x > a) {
    throw DomainError("two-sided exit needs 0 <= x <= a");
  }
  if (x == a) return 1.0;
  const ScaleFunction w(exponent);
  return w(x) / w(a);
}

double mtilde_transform(const ModelParams& params,
                        const FragmentationKernel& kernel, double q) {
  const MtildeTransform transform(params, kernel);
  const auto beta_minus = cramer_root(params, kernel);
  if (beta_minus && q <= -*beta_minus) {
    throw DomainError("transform argument must exceed -beta_minus");
  }
  if (!beta_minus) {
    const LaplaceExponent eta_minus(Family::Eta, params.a_minus, kernel);
    if (q <= eta_minus.domain_min()) {
      throw DomainError("transform argument outside the finiteness domain");
    }
  }
  return transform.eval(q);
}

double mtilde_numeric(const ModelParams& params,
                      const FragmentationKernel& kernel, double y) {
  if (y < 0.0) throw DomainError("the downside density needs y >= 0");
  if (y == 0.0) return 1.0 / params.a_minus;
  const MtildeTransform transform(params, kernel);
  return invert_checked(
      [&](std::complex<double> q) { return transform.eval(q); }, y);
}

double cramer_constant(const ModelParams& params,
                       const FragmentationKernel& kernel) {
  if (params.linear()) return 0.0;
  require_strict(params, kernel, "the Cramer constant");
  const auto beta_minus = cramer_root(params, kernel);
  if (!beta_minus) throw RegimeError("no Cramer root in the domain");
  const LaplaceExponent eta_plus(Family::Eta, params.a_plus, kernel);
  const LaplaceExponent eta_minus(Family::Eta, params.a_minus, kernel);
  const double beta_plus = eta_plus.right_inverse(0.0);
  const double slope = eta_minus.derivative(-*beta_minus);
  return -(params.a_minus - params.a_plus) * *beta_minus /
         (params.a_plus * slope * (*beta_minus + beta_plus));
}

CramerFit cramer_fit(const ModelParams& params,
                     const FragmentationKernel& kernel, double y_lo,
                     double y_hi, int points) {
  // Least squares of log m~ against y.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < points; ++i) {
    const double y = y_lo + (y_hi - y_lo) * i / (points - 1);
    const double v = std::log(mtilde_numeric(params, kernel, y));
    sx += y;
    sy += v;
    sxx += y * y;
    sxy += y * v;
  }
  const double n = points;
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  return {-slope, std::exp(intercept)};
}

double total_mass(const ModelParams& params,
                  const FragmentationKernel& kernel) {
  require_strict(params, kernel, "the total occupation mass");
  return -L_prime_at_lambda(params, kernel);
}

ProfileDensity ProfileDensity::build(const ModelParams& params,
                                     const FragmentationKernel& kernel,
                                     const ProfileOptions& options) {
  const RegimeReport report = malthus(params, kernel);
  if (report.regime != Regime::StrictMalthusian) {
    throw RegimeError("the normalized profile needs the strict regime");
  }

  ProfileDensity p;
  p.params_ = params;
  p.lambda_star_ = report.lambda_star;
  p.beta_plus_ = *report.beta_plus;
  p.beta_minus_ = report.beta_minus;
  p.mass_ = -*report.L_prime_at_lambda;
  if (p.beta_minus_) p.cramer_c_ = cramer_constant(params, kernel);
  p.closed_form_body_ = kernel.is_monomial() && !options.force_numeric_body;
  p.switch_y_ = kInf;
  if (p.closed_form_body_) return p;

  const double h = options.grid_step;
  p.grid_step_ = h;
  const int n = static_cast<int>(std::ceil(options.y_max / h));
  const MtildeTransform transform(params, kernel);
  p.table_.resize(n + 1);
  p.table_[0] = 1.0 / params.a_minus;

  const int window = std::max(1, static_cast<int>(
                                     std::lround(options.crossover_window / h)));
  int agree_run = 0;
  int stop = n;
  for (int k = 1; k <= n; ++k) {
    const double y = k * h;
    p.table_[k] = invert_checked(
        [&](std::complex<double> q) { return transform.eval(q); }, y);
    if (p.cramer_c_) {
      const double asym = *p.cramer_c_ * std::exp(-*p.beta_minus_ * y);
      const bool agrees =
          std::abs(p.table_[k] / asym - 1.0) <= options.crossover_rel_tol;
      agree_run = agrees ? agree_run + 1 : 0;
      if (agree_run >= window) {
        stop = k;
        break;
      }
    }
  }
  p.table_.resize(stop + 1);
  // Beyond the table the asymptote takes over whenever the root exists,
  // verified by the crossover scan when it ended early.
  p.switch_y_ = p.cramer_c_ ? stop * h : kInf;

  // Right-to-left cumulative integral of the table for the CDF.
  p.tail_int_.assign(p.table_.size(), 0.0);
  double beyond = 0.0;
  if (p.cramer_c_) {
    beyond = *p.cramer_c_ * std::exp(-*p.beta_minus_ * stop * h) /
             *p.beta_minus_;
  }
  p.tail_int_.back() = beyond;
  for (int k = static_cast<int>(p.table_.size()) - 2; k >= 0; --k) {
    p.tail_int_[k] =
        p.tail_int_[k + 1] + 0.5 * h * (p.table_[k] + p.table_[k + 1]);
  }
  return p;
}

std::optional<double> ProfileDensity::c2() const {
  if (!cramer_c_) return std::nullopt;
  return *cramer_c_ / mass_;
}

std::optional<double> ProfileDensity::c3() const {
  if (!closed_form_body_) return std::nullopt;
  return c1();
}

double ProfileDensity::mtilde(double y) const {
  if (y < 0.0) throw DomainError("the downside density needs y >= 0");
  if (closed_form_body_) {
    return std::exp(-*beta_minus_ * y) / params_.a_minus;
  }
  const double y_end = grid_step_ * (table_.size() - 1);
  if (y > y_end) {
    if (!cramer_c_) {
      throw RegimeError("no asymptote available beyond the inversion table");
    }
    return *cramer_c_ * std::exp(-*beta_minus_ * y);
  }
  const int k = std::min(static_cast<int>(y / grid_step_),
                         static_cast<int>(table_.size()) - 2);
  const double f = y / grid_step_ - k;
  // The table is positive and smooth; interpolate its logarithm.
  return std::exp((1.0 - f) * std::log(table_[k]) +
                  f * std::log(table_[k + 1]));
}

double ProfileDensity::mbar(double y) const {
  if (y >= 0.0) return std::exp(-beta_plus_ * y) / params_.a_plus;
  return mtilde(-y);
}

double ProfileDensity::density_tail(double x) const {
  if (!(x >= 1.0)) throw DomainError("the power tail starts at x = 1");
  return c1() / params_.a_plus * std::pow(x, -(1.0 + beta_plus_));
}

double ProfileDensity::nu(double x) const {
  if (!(x > 0.0)) throw DomainError("the profile lives on x > 0");
  if (x >= 1.0) return density_tail(x);
  return mtilde(-std::log(x)) / (x * mass_);
}

double ProfileDensity::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) {
    return 1.0 - c1() / (params_.a_plus * beta_plus_) *
                     std::pow(x, -beta_plus_);
  }
  const double y = -std::log(x);
  double from_y;  // \int_y^inf m~
  if (closed_form_body_) {
    from_y = std::exp(-*beta_minus_ * y) / (params_.a_minus * *beta_minus_);
  } else {
    const double y_end = grid_step_ * (table_.size() - 1);
    if (y >= y_end) {
      from_y = cramer_c_
                   ? *cramer_c_ * std::exp(-*beta_minus_ * y) / *beta_minus_
                   : 0.0;
    } else {
      const int k = std::min(static_cast<int>(y / grid_step_),
                             static_cast<int>(table_.size()) - 2);
      const double yk = k * grid_step_;
      const double partial = 0.5 * (y - yk) * (table_[k] + mtilde(y));
      from_y = tail_int_[k] - partial;
    }
  }
  return from_y / mass_;
}

ProfileBranch ProfileDensity::branch_at(double x) const {
  if (x >= 1.0) return ProfileBranch::Tail;
  if (closed_form_body_) return ProfileBranch::Body;
  return (-std::log(x) <= switch_y_) ? ProfileBranch::Body
                                     : ProfileBranch::Asymptote;
}

namespace detail {

double occupation_exit_form(const ModelParams& params,
                            const FragmentationKernel& kernel, double y,
                            bool upper_branch,
                            const std::function<double(double)>& w) {
  if (!(y > 0.0)) throw DomainError("the exit form needs y > 0");
  const LaplaceExponent eta_plus(Family::Eta, params.a_plus, kernel);
  const double beta_plus = eta_plus.right_inverse(0.0);
  if (!(beta_plus > 0.0)) {
    throw RegimeError("the exit decomposition needs a positive tail rate");
  }

  const auto pi_tilde = [&](double z) {
    const double s = std::exp(z);
    return s * kernel.density(s);
  };
  // Inner integral over the landing height h = y + x + z in (0, y).
  const auto inner = [&](double x) {
    return gauss16_composite(
        [&](double h) { return pi_tilde(h - y - x) * w(h); }, 0.0, y, 0.25);
  };
  const double x_max = 30.0 / beta_plus;
  const double dbl =
      gauss16_composite([&](double x) { return std::exp(-beta_plus * x) * inner(x); },
                        0.0, x_max, 0.5);

  if (upper_branch) {
    return 1.0 / (params.a_plus * (params.a_plus * w(y) - dbl));
  }
  return w(y) - dbl / params.a_plus;
}

}  // namespace detail

}  // namespace gfpl
