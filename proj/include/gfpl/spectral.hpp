// SPDX-License-Identifier: Apache-2.0
#ifndef GFPL_SPECTRAL_HPP
#define GFPL_SPECTRAL_HPP

#include <complex>
#include <optional>
#include <string>

#include "gfpl/kernel.hpp"

namespace gfpl {

// Two families of spectrally negative drivers:
//   Xi:  Psi(q)  = a q + M(q+1) - M(1)   (jump integrand (s^q - 1) s rho)
//   Eta: Psi~(q) = a q + M(q)   - M(0)   (jump integrand (s^q - 1) rho)
enum class Family { Xi, Eta };

struct ExponentInfimum {
  bool attained = false;  // false: infimum only approached at the left edge
  double q_min = 0.0;     // argmin when attained, else the left endpoint
  double value = 0.0;
};

// Laplace exponent of a drift + compound Poisson process with only negative
// jumps. Pure function of (family, drift, kernel); safe for concurrent use.
class LaplaceExponent {
 public:
  LaplaceExponent(Family family, double drift, FragmentationKernel kernel);

  Family family() const { return family_; }
  double drift() const { return drift_; }
  const FragmentationKernel& kernel() const { return kernel_; }

  // Open left endpoint of the finiteness domain.
  double domain_min() const { return domain_min_; }

  double value(double q) const;
  std::complex<double> value(std::complex<double> q) const;
  double derivative(double q) const;
  double second_derivative(double q) const;

  ExponentInfimum infimum() const;

  // Largest root of Psi(q) = theta, restricted to [argmin, inf).
  double right_inverse(double theta) const;

 private:
  Family family_;
  double drift_;
  double domain_min_;
  double jump_mass_;  // M(1) for Xi, M(0) for Eta
  FragmentationKernel kernel_;
};

enum class Regime {
  StrictMalthusian,
  BoundaryLow,
  BoundaryHigh,
  FailsLow,
  FailsHigh,
};

enum class RecurrenceClass {
  DriftsToPlusInfinity,
  DriftsToMinusInfinity,
  NullRecurrent,
  PositiveRecurrent,
};

std::string to_string(Regime r);
std::string to_string(RecurrenceClass r);

struct RegimeReport {
  double lambda_star = 0.0;
  double condition_low = 0.0;  // -\int log(s) rho(s) ds
  Regime regime = Regime::StrictMalthusian;
  std::optional<double> beta_plus;
  std::optional<double> beta_minus;
  // Finite in the strict regime; -inf at a boundary; absent otherwise.
  std::optional<double> L_prime_at_lambda;
  RecurrenceClass recurrence_class = RecurrenceClass::PositiveRecurrent;
};

// Convenience constructors for the four driving processes.
LaplaceExponent make_exponent(Family family, bool plus_branch,
                              const ModelParams& params,
                              const FragmentationKernel& kernel);

// max( inf Psi_- + a_-, inf Psi_+ + a_+ ); below it L is infinite.
double q_star(const ModelParams& params, const FragmentationKernel& kernel);

struct LEvaluation {
  double value = 0.0;          // +inf encodes divergence
  bool below_q_star = false;
  bool at_q_star = false;      // value is then the right limit, if finite
  bool finite_at_q_star = false;
};

LEvaluation evaluate_L(const ModelParams& params,
                       const FragmentationKernel& kernel, double q);

// Excursion transform L(q); +inf for q below q_star.
double L(const ModelParams& params, const FragmentationKernel& kernel,
         double q);

// Slope of L at the Malthus exponent; strict regime only.
double L_prime_at_lambda(const ModelParams& params,
                         const FragmentationKernel& kernel);

// Positive root of Psi~_-(-beta) = 0, when a sign change exists in domain.
std::optional<double> cramer_root(const ModelParams& params,
                                  const FragmentationKernel& kernel);

RecurrenceClass classify_recurrence(const ModelParams& params,
                                    const FragmentationKernel& kernel,
                                    Family family);

// Malthus exponent, regime classification and the associated constants.
RegimeReport malthus(const ModelParams& params,
                     const FragmentationKernel& kernel);

}  // namespace gfpl

#endif  // GFPL_SPECTRAL_HPP
