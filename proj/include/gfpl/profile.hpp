// SPDX-License-Identifier: Apache-2.0
#ifndef GFPL_PROFILE_HPP
#define GFPL_PROFILE_HPP

#include <functional>
#include <optional>
#include <vector>

#include "gfpl/kernel.hpp"
#include "gfpl/spectral.hpp"

namespace gfpl {

// Scale function of an Eta-family exponent, evaluated by numeric inversion
// of 1/Psi~ with a contour shifted right of the largest real zero. Talbot is
// the production method; Gaver-Stehfest guards every value.
class ScaleFunction {
 public:
  explicit ScaleFunction(LaplaceExponent exponent, int nodes = 32);

  double operator()(double x) const;
  const LaplaceExponent& exponent() const { return exponent_; }

 private:
  LaplaceExponent exponent_;
  int nodes_;
  double shift_;
};

double scale_function(const LaplaceExponent& exponent, double x);

// P(reach a before passing below 0 | start x) = W(x)/W(a), 0 <= x <= a.
double two_sided_exit(const LaplaceExponent& exponent, double x, double a);

// Laplace transform of the downside occupation density:
//   Psi~_+(q) / (a_+ Psi~_-(q) (q - beta_+)),
// extended continuously through the removable points q = 0 and q = beta_+.
double mtilde_transform(const ModelParams& params,
                        const FragmentationKernel& kernel, double q);

// Pointwise numeric inversion of the transform (Talbot with a
// Gaver-Stehfest cross-check); the exact limit 1/a_- at y = 0.
double mtilde_numeric(const ModelParams& params,
                      const FragmentationKernel& kernel, double y);

// Constant of the exponential downside asymptote m~(y) ~ C e^{-beta_- y}.
double cramer_constant(const ModelParams& params,
                       const FragmentationKernel& kernel);

// Least-squares fit of rate and prefactor of the downside tail from numeric
// inversion on [y_lo, y_hi]; independent route to beta_- and C.
struct CramerFit {
  double rate = 0.0;
  double constant = 0.0;
};
CramerFit cramer_fit(const ModelParams& params,
                     const FragmentationKernel& kernel, double y_lo = 5.0,
                     double y_hi = 10.0, int points = 51);

// <m, 1> = -L'(lambda); strict regime only.
double total_mass(const ModelParams& params, const FragmentationKernel& kernel);

enum class ProfileBranch { Body, Tail, Asymptote };

struct ProfileOptions {
  bool force_numeric_body = false;
  double grid_step = 0.0025;
  double y_max = 12.0;
  double crossover_rel_tol = 0.005;
  double crossover_window = 1.0;
};

// The stationary profile: exact power tail on [1, inf), a body on (0,1)
// that is closed-form for monomial kernels and a numeric inversion table
// otherwise, with the exponential asymptote taking over at the crossover.
class ProfileDensity {
 public:
  static ProfileDensity build(const ModelParams& params,
                              const FragmentationKernel& kernel,
                              const ProfileOptions& options = {});

  double lambda_star() const { return lambda_star_; }
  double beta_plus() const { return beta_plus_; }
  std::optional<double> beta_minus() const { return beta_minus_; }
  std::optional<double> cramer_C() const { return cramer_c_; }
  double total_mass() const { return mass_; }
  double c1() const { return 1.0 / mass_; }
  std::optional<double> c2() const;
  // Monomial closed-form normalization; equals c1 when defined.
  std::optional<double> c3() const;
  bool closed_form_body() const { return closed_form_body_; }
  double switch_y() const { return switch_y_; }

  // Occupation density of the driving log-size process: exact exponential
  // above 0, body route below.
  double mbar(double y) const;
  // m~(y) = mbar(-y) for y >= 0.
  double mtilde(double y) const;

  double nu(double x) const;
  double density_tail(double x) const;
  double cdf(double x) const;
  ProfileBranch branch_at(double x) const;

 private:
  ModelParams params_;
  double lambda_star_ = 0.0;
  double beta_plus_ = 0.0;
  std::optional<double> beta_minus_;
  std::optional<double> cramer_c_;
  double mass_ = 0.0;
  bool closed_form_body_ = true;
  double switch_y_ = 0.0;

  // Numeric body table on a uniform y-grid.
  double grid_step_ = 0.0;
  std::vector<double> table_;      // m~(k h)
  std::vector<double> tail_int_;   // \int_{k h}^{inf} m~(y) dy
};

namespace detail {

// Occupation density assembled from the exit-probability decomposition
// (double integral over the pre-jump height and the jump size). Slow; kept
// as an independent cross-check of the closed routes. `w` evaluates the
// scale function of the matching branch.
double occupation_exit_form(const ModelParams& params,
                            const FragmentationKernel& kernel, double y,
                            bool upper_branch,
                            const std::function<double(double)>& w);

}  // namespace detail

}  // namespace gfpl

#endif  // GFPL_PROFILE_HPP
