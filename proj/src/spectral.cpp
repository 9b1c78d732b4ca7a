// SPDX-License-Identifier: Apache-2.0
#include "gfpl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gfpl/errors.hpp"

namespace gfpl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double shift_for(Family family) { return family == Family::Xi ? 1.0 : 0.0; }

}  // namespace

LaplaceExponent::LaplaceExponent(Family family, double drift,
                                 FragmentationKernel kernel)
    : family_(family), drift_(drift), kernel_(std::move(kernel)) {
  if (!(drift > 0.0)) throw ConfigError("drift must be positive");
  const double eps =
      kernel_.is_monomial() ? kernel_.gamma() : kernel_.epsilon();
  domain_min_ = (family_ == Family::Xi) ? -1.0 - eps : -eps;
  jump_mass_ = kernel_.moment(shift_for(family_));
}

double LaplaceExponent::value(double q) const {
  if (q == 0.0) return 0.0;
  if (!(q > domain_min_)) {
    throw DomainError("Laplace exponent evaluated outside its domain");
  }
  return drift_ * q + kernel_.moment(q + shift_for(family_)) - jump_mass_;
}

std::complex<double> LaplaceExponent::value(std::complex<double> q) const {
  return drift_ * q + kernel_.moment(q + shift_for(family_)) - jump_mass_;
}

double LaplaceExponent::derivative(double q) const {
  if (!(q > domain_min_)) {
    throw DomainError("Laplace exponent derivative outside its domain");
  }
  return drift_ + kernel_.log_moment(q + shift_for(family_));
}

double LaplaceExponent::second_derivative(double q) const {
  if (!(q > domain_min_)) {
    throw DomainError("Laplace exponent curvature outside its domain");
  }
  return kernel_.log2_moment(q + shift_for(family_));
}

ExponentInfimum LaplaceExponent::infimum() const {
  const double edge = domain_min_ + 1e-9 * std::max(1.0, std::abs(domain_min_));
  if (derivative(edge) >= 0.0) {
    // Convexity: the exponent increases on the whole domain.
    return {false, domain_min_, value(edge)};
  }
  double lo = edge;
  double hi = std::max(edge + 1.0, 1.0);
  while (derivative(hi) <= 0.0) hi = 2.0 * hi + 1.0;

  double q = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double d = derivative(q);
    if (d > 0.0) {
      hi = q;
    } else {
      lo = q;
    }
    const double dd = second_derivative(q);
    double next = (dd > 0.0) ? q - d / dd : 0.5 * (lo + hi);
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - q) <= 1e-15 * std::max(1.0, std::abs(q))) {
      q = next;
      break;
    }
    q = next;
  }
  return {true, q, value(q)};
}

double LaplaceExponent::right_inverse(double theta) const {
  const ExponentInfimum inf = infimum();
  const double tol = 1e-12 * std::max(1.0, std::abs(theta));
  if (theta < inf.value - tol) {
    throw DomainError("right inverse requested below the infimum");
  }
  if (theta <= inf.value) {
    return inf.attained
               ? inf.q_min
               : domain_min_ + 1e-9 * std::max(1.0, std::abs(domain_min_));
  }
  double lo = inf.attained
                  ? inf.q_min
                  : domain_min_ + 1e-9 * std::max(1.0, std::abs(domain_min_));
  double hi = std::max(lo + 1.0, 1.0);
  while (value(hi) < theta) hi = 2.0 * hi + 1.0;

  double q = 0.5 * (lo + hi);
  const double atol = 1e-13 * std::max(1.0, std::abs(theta));
  for (int iter = 0; iter < 200; ++iter) {
    const double f = value(q) - theta;
    if (std::abs(f) <= atol) return q;
    if (f > 0.0) {
      hi = q;
    } else {
      lo = q;
    }
    const double d = derivative(q);
    double next = (d > 0.0) ? q - f / d : 0.5 * (lo + hi);
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    q = next;
  }
  if (std::abs(value(q) - theta) <= 1e-10 * std::max(1.0, std::abs(theta))) {
    return q;
  }
  throw NoConvergence("right inverse did not converge");
}

LaplaceExponent make_exponent(Family family, bool plus_branch,
                              const ModelParams& params,
                              const FragmentationKernel& kernel) {
  return LaplaceExponent(family, plus_branch ? params.a_plus : params.a_minus,
                         kernel);
}

double q_star(const ModelParams& params, const FragmentationKernel& kernel) {
  const auto inf_minus =
      make_exponent(Family::Xi, false, params, kernel).infimum();
  const auto inf_plus =
      make_exponent(Family::Xi, true, params, kernel).infimum();
  return std::max(inf_minus.value + params.a_minus,
                  inf_plus.value + params.a_plus);
}

LEvaluation evaluate_L(const ModelParams& params,
                       const FragmentationKernel& kernel, double q) {
  LEvaluation out;
  if (params.linear()) {
    // Linear growth: both branches coincide and the excursion transform
    // reduces to 1 - Psi'(Phi(q - a)) / a.
    const LaplaceExponent psi(Family::Xi, params.a_plus, kernel);
    const auto inf = psi.infimum();
    const double qs = inf.value + params.a_plus;
    out.finite_at_q_star = inf.attained;
    if (q < qs - 1e-14 * std::max(1.0, std::abs(qs))) {
      out.value = kInf;
      out.below_q_star = true;
      return out;
    }
    out.value = 1.0 - psi.derivative(psi.right_inverse(q - params.a_plus)) /
                          params.a_plus;
    return out;
  }

  const LaplaceExponent psi_minus(Family::Xi, params.a_minus, kernel);
  const LaplaceExponent psi_plus(Family::Xi, params.a_plus, kernel);
  const auto inf_minus = psi_minus.infimum();
  const auto inf_plus = psi_plus.infimum();
  const double qs = std::max(inf_minus.value + params.a_minus,
                             inf_plus.value + params.a_plus);
  out.finite_at_q_star = inf_minus.attained && inf_plus.attained;

  const double tol = 1e-12 * std::max(1.0, std::abs(qs));
  double q_eval = q;
  if (q < qs - tol) {
    out.value = kInf;
    out.below_q_star = true;
    return out;
  }
  if (q <= qs + tol) {
    out.at_q_star = true;
    if (!out.finite_at_q_star) {
      out.value = kInf;
      return out;
    }
    q_eval = qs + 1e-9 * std::max(1.0, std::abs(qs));
  }

  const double phi_minus = psi_minus.right_inverse(q_eval - params.a_minus);
  const double phi_plus = psi_plus.right_inverse(q_eval - params.a_plus);
  const double denom = phi_plus - phi_minus;
  // The denominator vanishes only together with 1 + phi_minus, at the
  // boundary case, where the limit equals one.
  if (std::abs(denom) < 1e-9) {
    out.value = 1.0;
    return out;
  }
  out.value = 1.0 - (params.a_minus - params.a_plus) * (1.0 + phi_minus) /
                        (params.a_plus * denom);
  return out;
}

double L(const ModelParams& params, const FragmentationKernel& kernel,
         double q) {
  return evaluate_L(params, kernel, q).value;
}

double L_prime_at_lambda(const ModelParams& params,
                         const FragmentationKernel& kernel) {
  if (params.linear()) {
    throw RegimeError("slope formula degenerates for linear growth");
  }
  const double c_low = -kernel.log_moment(0.0);
  const double tol = 1e-12 * std::max(1.0, c_low);
  if (!(params.a_plus < c_low - tol) || !(params.a_minus > c_low + tol)) {
    throw RegimeError("L'(lambda) is finite only in the strict regime");
  }
  const LaplaceExponent psi_minus(Family::Xi, params.a_minus, kernel);
  const LaplaceExponent psi_plus(Family::Xi, params.a_plus, kernel);
  const double dmin = psi_minus.derivative(-1.0);
  const double phi = psi_plus.right_inverse(psi_plus.value(-1.0));
  return -(params.a_minus - params.a_plus) /
         (params.a_plus * dmin * (phi + 1.0));
}

std::optional<double> cramer_root(const ModelParams& params,
                                  const FragmentationKernel& kernel) {
  const LaplaceExponent psi(Family::Eta, params.a_minus, kernel);
  const auto inf = psi.infimum();
  // Psi~_- dips below zero on (q_min, 0) exactly when its slope at the
  // origin is positive; otherwise no positive root exists.
  if (!inf.attained || !(inf.q_min < 0.0) || !(inf.value < 0.0)) {
    return std::nullopt;
  }
  if (!(psi.derivative(0.0) > 0.0)) return std::nullopt;

  double lo = -inf.q_min;  // g(lo) = Psi~(q_min) < 0
  double hi = -psi.domain_min() * (1.0 - 1e-9);
  auto g = [&](double beta) { return psi.value(-beta); };
  if (!(g(hi) > 0.0)) return std::nullopt;

  double beta = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = g(beta);
    if (f > 0.0) {
      hi = beta;
    } else {
      lo = beta;
    }
    const double d = -psi.derivative(-beta);
    double next = (d != 0.0) ? beta - f / d : 0.5 * (lo + hi);
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - beta) <= 1e-15 * std::max(1.0, beta)) {
      beta = next;
      break;
    }
    beta = next;
  }
  return beta;
}

RecurrenceClass classify_recurrence(const ModelParams& params,
                                    const FragmentationKernel& kernel,
                                    Family family) {
  const LaplaceExponent plus(family, params.a_plus, kernel);
  const LaplaceExponent minus(family, params.a_minus, kernel);
  const double dp = plus.derivative(0.0);
  const double dm = minus.derivative(0.0);
  const double tol = 1e-12 * std::max({1.0, params.a_plus, params.a_minus});
  const int sp = (dp > tol) ? 1 : (dp < -tol ? -1 : 0);
  const int sm = (dm > tol) ? 1 : (dm < -tol ? -1 : 0);

  if (sp > 0 && sm > 0) return RecurrenceClass::DriftsToPlusInfinity;
  if (sp < 0 && sm < 0) return RecurrenceClass::DriftsToMinusInfinity;
  if (sp < 0 && sm > 0) return RecurrenceClass::PositiveRecurrent;
  // Remaining reachable patterns have a recurrent branch: (0,+), (-,0), (0,0).
  return RecurrenceClass::NullRecurrent;
}

RegimeReport malthus(const ModelParams& params,
                     const FragmentationKernel& kernel) {
  RegimeReport report;
  report.lambda_star = kernel.lambda_star();
  report.condition_low = -kernel.log_moment(0.0);

  const double tol = 1e-12 * std::max(1.0, report.condition_low);
  const bool low_strict = params.a_plus < report.condition_low - tol;
  const bool low_equal = std::abs(params.a_plus - report.condition_low) <= tol;
  const bool high_strict = params.a_minus > report.condition_low + tol;
  const bool high_equal =
      std::abs(params.a_minus - report.condition_low) <= tol;

  if (low_strict && high_strict) {
    report.regime = Regime::StrictMalthusian;
  } else if (low_equal && (high_strict || high_equal)) {
    report.regime = Regime::BoundaryLow;
  } else if (high_equal && low_strict) {
    report.regime = Regime::BoundaryHigh;
  } else if (!low_strict && !low_equal) {
    report.regime = Regime::FailsLow;
  } else {
    report.regime = Regime::FailsHigh;
  }

  if (low_strict) {
    const LaplaceExponent eta_plus(Family::Eta, params.a_plus, kernel);
    report.beta_plus = eta_plus.right_inverse(0.0);
  }
  report.beta_minus = cramer_root(params, kernel);

  if (report.regime == Regime::StrictMalthusian) {
    report.L_prime_at_lambda = L_prime_at_lambda(params, kernel);
  } else if (report.regime == Regime::BoundaryLow ||
             report.regime == Regime::BoundaryHigh) {
    report.L_prime_at_lambda = -kInf;
  }
  report.recurrence_class = classify_recurrence(params, kernel, Family::Eta);
  return report;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::StrictMalthusian:
      return "StrictMalthusian";
    case Regime::BoundaryLow:
      return "BoundaryLow";
    case Regime::BoundaryHigh:
      return "BoundaryHigh";
    case Regime::FailsLow:
      return "FailsLow";
    default:
      return "FailsHigh";
  }
}

std::string to_string(RecurrenceClass r) {
  switch (r) {
    case RecurrenceClass::DriftsToPlusInfinity:
      return "drifts to +infinity";
    case RecurrenceClass::DriftsToMinusInfinity:
      return "drifts to -infinity";
    case RecurrenceClass::NullRecurrent:
      return "null recurrent";
    default:
      return "positive recurrent";
  }
}

}  // namespace gfpl
