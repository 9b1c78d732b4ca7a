// SPDX-License-Identifier: Apache-2.0
#ifndef GFPL_KERNEL_HPP
#define GFPL_KERNEL_HPP

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

namespace gfpl {

// Piecewise-linear growth rate c(x) = a_minus * x below x = 1 and
// a_plus * x at and above it. Equality of the two slopes is accepted so the
// linear-growth reduction can be evaluated; operations that need genuine
// refraction reject it.
struct ModelParams {
  double a_minus = 0.0;
  double a_plus = 0.0;

  ModelParams() = default;
  ModelParams(double am, double ap);

  bool linear() const { return a_minus == a_plus; }
};

enum class JumpKind {
  XType,  // size ratio drawn with density s*rho(s)/K
  YType,  // size ratio drawn with density rho(s)/r_tilde
};

// Homogeneous dislocation rate density rho on (0,1) together with its moment
// functionals M(q) = \int_0^1 s^q rho(s) ds and the log-weighted variants.
// Immutable after construction; safe to share between threads.
class FragmentationKernel {
 public:
  static FragmentationKernel monomial(double gamma, double epsilon = 0.5);
  static FragmentationKernel tabulated(std::vector<double> s,
                                       std::vector<double> rho,
                                       double epsilon);

  bool is_monomial() const { return monomial_; }
  double gamma() const;
  double epsilon() const { return epsilon_; }

  // rho(s); zero outside the tabulated support.
  double density(double s) const;

  // M(q). Monomial: 1/(q+gamma), diverges for q <= -gamma.
  double moment(double q) const;
  // Analytic continuation used by contour integration; clamps magnitudes
  // above ~1e300 instead of overflowing.
  std::complex<double> moment(std::complex<double> q) const;

  // \int s^q log(s) rho(s) ds. log_moment(0) is the condition integral.
  double log_moment(double q = 0.0) const;
  std::complex<double> log_moment(std::complex<double> q) const;

  // \int s^q log^2(s) rho(s) ds.
  double log2_moment(double q) const;

  // \int_lo^hi s^q rho(s) ds over a subinterval of (0,1].
  double partial_moment(double q, double lo, double hi) const;

  // (K, r_tilde) = (moment(1), moment(0)).
  std::pair<double, double> total_rates() const;

  // moment(0) - moment(1) = \int (1-s) rho(s) ds > 0.
  double lambda_star() const;

  // Inverse-CDF draw of the log size ratio z = log S < 0; u in (0,1).
  double sample_jump(JumpKind kind, double u) const;

 private:
  FragmentationKernel() = default;
  void validate() const;
  double tab_weighted_integral(int log_power, double shift, double lo,
                               double hi) const;

  bool monomial_ = true;
  double gamma_ = 1.0;
  double epsilon_ = 0.5;

  // Tabulated form: node positions and density values, piecewise linear
  // in between and zero outside [s_.front(), s_.back()].
  std::vector<double> s_;
  std::vector<double> rho_;
  // Per-kind cumulative segment masses for inverse-CDF sampling.
  std::vector<double> cdf_x_;
  std::vector<double> cdf_y_;

  struct MomentCache {
    std::mutex mutex;
    std::map<double, double> values;
  };
  // Shared between copies; hits only ever reproduce recomputable values.
  std::shared_ptr<MomentCache> cache_;
};

}  // namespace gfpl

#endif  // GFPL_KERNEL_HPP
