// SPDX-License-Identifier: Apache-2.0
#include "gfpl/laplace.hpp"

#include <cmath>
#include <vector>

#include "gfpl/errors.hpp"

namespace gfpl {

double talbot_invert(const ComplexTransform& transform, double t, int nodes,
                     double shift) {
  if (!(t > 0.0)) throw DomainError("inversion needs t > 0");
  const int m = nodes;
  const double r = 2.0 * m / (5.0 * t);

  // theta = 0 endpoint contributes half the real sample at s = shift + r.
  double sum = 0.5 * std::exp(r * t) * transform({shift + r, 0.0}).real();
  for (int k = 1; k < m; ++k) {
    const double theta = k * M_PI / m;
    const double cot = std::cos(theta) / std::sin(theta);
    const std::complex<double> s(r * theta * cot, r * theta);
    const double sigma = theta + (theta * cot - 1.0) * cot;
    const std::complex<double> weight(1.0, sigma);
    const std::complex<double> term =
        std::exp(s * t) * transform(s + shift) * weight;
    sum += term.real();
  }
  return std::exp(shift * t) * (r / m) * sum;
}

namespace {

// Stehfest weights for an even number of terms, exact in long double.
std::vector<long double> stehfest_weights(int n) {
  const int half = n / 2;
  auto fact = [](int k) {
    long double f = 1.0L;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  std::vector<long double> zeta(n + 1, 0.0L);
  for (int k = 1; k <= n; ++k) {
    long double sum = 0.0L;
    const int j_lo = (k + 1) / 2;
    const int j_hi = std::min(k, half);
    for (int j = j_lo; j <= j_hi; ++j) {
      long double term = std::pow((long double)j, half) * fact(2 * j);
      term /= fact(half - j) * fact(j) * fact(j - 1) * fact(k - j) *
              fact(2 * j - k);
      sum += term;
    }
    zeta[k] = ((k + half) % 2 == 0 ? 1.0L : -1.0L) * sum;
  }
  return zeta;
}

}  // namespace

double gaver_stehfest_invert(const RealTransform& transform, double t,
                             int terms, double shift) {
  if (!(t > 0.0)) throw DomainError("inversion needs t > 0");
  if (terms % 2 != 0) throw ConfigError("Gaver-Stehfest needs an even count");
  static thread_local std::vector<long double> weights;
  static thread_local int cached_terms = 0;
  if (cached_terms != terms) {
    weights = stehfest_weights(terms);
    cached_terms = terms;
  }
  const long double ln2_over_t = std::log(2.0L) / t;
  long double sum = 0.0L;
  for (int k = 1; k <= terms; ++k) {
    const double q = static_cast<double>(k * ln2_over_t) + shift;
    sum += weights[k] * static_cast<long double>(transform(q));
  }
  return static_cast<double>(std::exp((long double)shift * t) * ln2_over_t *
                             sum);
}

double invert_checked(const ComplexTransform& transform, double t,
                      double rel_tol, int nodes, double shift) {
  const double talbot = talbot_invert(transform, t, nodes, shift);
  const double gs = gaver_stehfest_invert(
      [&](double q) { return transform({q, 0.0}).real(); }, t, 14, shift);
  const double scale = std::max({std::abs(talbot), std::abs(gs), 1e-300});
  if (std::abs(talbot - gs) > rel_tol * scale) {
    throw InversionError("Talbot and Gaver-Stehfest disagree");
  }
  return talbot;
}

}  // namespace gfpl
