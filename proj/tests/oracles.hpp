// SPDX-License-Identifier: Apache-2.0
//
// Test-side reference implementations, independent of the library's
// evaluation paths: adaptive quadrature, finite differences, grid search,
// and the chi-squared tail via the regularized incomplete gamma function.
#ifndef GFPL_TESTS_ORACLES_HPP
#define GFPL_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

// Adaptive Simpson with Richardson correction.
inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-12, int depth = 30) {
  std::function<double(double, double, double, double, double, double, int)>
      rec = [&](double x0, double x2, double f0, double f1, double f2,
                double whole, int d) -> double {
    const double x1 = 0.5 * (x0 + x2);
    const double lm = 0.5 * (x0 + x1), rm = 0.5 * (x1 + x2);
    const double flm = f(lm), frm = f(rm);
    const double left = (x1 - x0) / 6.0 * (f0 + 4.0 * flm + f1);
    const double right = (x2 - x1) / 6.0 * (f1 + 4.0 * frm + f2);
    if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
      return left + right + (left + right - whole) / 15.0;
    }
    return rec(x0, x1, f0, flm, f1, left, d - 1) +
           rec(x1, x2, f1, frm, f2, right, d - 1);
  };
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return rec(a, m, fa, f(0.5 * (a + m)), fm,
             (m - a) / 6.0 * (fa + 4.0 * f(0.5 * (a + m)) + fm), depth) +
         rec(m, b, fm, f(0.5 * (m + b)), fb,
             (b - m) / 6.0 * (fm + 4.0 * f(0.5 * (m + b)) + fb), depth);
}

// Central five-point derivative.
inline double derivative(const std::function<double(double)>& f, double x,
                         double h = 1e-4) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) /
         (12.0 * h);
}

// Coarse-to-fine grid minimization of a smooth univariate function.
inline std::pair<double, double> grid_minimize(
    const std::function<double(double)>& f, double lo, double hi,
    int rounds = 60) {
  double best_x = lo, best_v = f(lo);
  for (int round = 0; round < rounds; ++round) {
    const int n = 64;
    for (int i = 0; i <= n; ++i) {
      const double x = lo + (hi - lo) * i / n;
      const double v = f(x);
      if (v < best_v) {
        best_v = v;
        best_x = x;
      }
    }
    const double width = (hi - lo) / n;
    lo = best_x - width;
    hi = best_x + width;
  }
  return {best_x, best_v};
}

// Regularized upper incomplete gamma Q(a, x), series/continued fraction.
inline double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) return std::nan("");
  if (x == 0.0) return 1.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    // P by series, Q = 1 - P.
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    const double p = sum * std::exp(-x + a * std::log(x) - lg);
    return 1.0 - p;
  }
  // Lentz continued fraction for Q.
  double b = x + 1.0 - a;
  double c = 1e300;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - lg) * h;
}

// Chi-squared upper tail probability.
inline double chi2_pvalue(double stat, int dof) {
  return gamma_q(0.5 * dof, 0.5 * stat);
}

// Uniform-density tabulated kernel on [inset, 1 - inset].
struct UniformTable {
  std::vector<double> s;
  std::vector<double> rho;
};

inline UniformTable uniform_table(int nodes, double inset) {
  UniformTable t;
  t.s.resize(nodes);
  t.rho.assign(nodes, 1.0);
  for (int i = 0; i < nodes; ++i) {
    t.s[i] = inset + (1.0 - 2.0 * inset) * i / (nodes - 1);
  }
  return t;
}

// Closed-form scale function of a monomial Eta-family exponent:
// W(x) = g^2/(a g^2 - 1) + e^{r x} / (a (1 - a g^2)), r = (1 - a g^2)/(a g).
inline double monomial_scale_function(double a, double gamma, double x) {
  if (x < 0.0) return 0.0;
  const double ag2 = a * gamma * gamma;
  const double r = (1.0 - ag2) / (a * gamma);
  return gamma * gamma / (ag2 - 1.0) + std::exp(r * x) / (a * (1.0 - ag2));
}

}  // namespace oracles

#endif  // GFPL_TESTS_ORACLES_HPP
