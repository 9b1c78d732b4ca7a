// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gfpl/errors.hpp"
#include "gfpl/spectral.hpp"
#include "oracles.hpp"

using namespace gfpl;

namespace {

const FragmentationKernel kG1 = FragmentationKernel::monomial(1.0);
const ModelParams kCanonical{2.0, 0.5};  // strict regime, gamma = 1

FragmentationKernel near_uniform() {
  auto t = oracles::uniform_table(11, 1e-6);
  return FragmentationKernel::tabulated(t.s, t.rho, 0.9);
}

}  // namespace

TEST_CASE("exponent values in closed form") {
  const LaplaceExponent eta2(Family::Eta, 2.0, kG1);
  CHECK(eta2.value(1.0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(eta2.value(0.0) == 0.0);
  const LaplaceExponent xi_half(Family::Xi, 0.5, kG1);
  CHECK(xi_half.value(0.0) == 0.0);
  CHECK(xi_half.value(1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  // q (q+1) / (2 (q+2)) on a grid
  for (double q : {-1.5, -0.3, 0.4, 2.0}) {
    CHECK(xi_half.value(q) ==
          doctest::Approx(q * (q + 1.0) / (2.0 * (q + 2.0))).epsilon(1e-12));
  }
  CHECK_THROWS_AS(xi_half.value(-2.0), DomainError);

  const LaplaceExponent eta_tab(Family::Eta, 2.0, near_uniform());
  CHECK(eta_tab.value(0.0) == 0.0);
  CHECK(eta_tab.value(1.0) == doctest::Approx(1.5).epsilon(1e-5));
  CHECK_THROWS_AS(eta_tab.value(-0.95), DomainError);
}

TEST_CASE("exponent values match quadrature for tabulated kernels") {
  const auto k = near_uniform();
  const LaplaceExponent xi(Family::Xi, 1.3, k);
  for (double q : {-0.8, 0.5, 1.7}) {
    const double ref =
        1.3 * q + oracles::integrate(
                      [&](double s) {
                        return (std::pow(s, q) - 1.0) * s * k.density(s);
                      },
                      1e-7, 1.0 - 1e-7);
    CHECK(xi.value(q) == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("derivatives in closed form and against finite differences") {
  const LaplaceExponent xi2(Family::Xi, 2.0, kG1);
  CHECK(xi2.derivative(-1.0) == doctest::Approx(1.0).epsilon(1e-13));
  const LaplaceExponent eta2(Family::Eta, 2.0, kG1);
  CHECK(eta2.derivative(-0.5) == doctest::Approx(-2.0).epsilon(1e-13));
  const LaplaceExponent eta_half(Family::Eta, 0.5, kG1);
  CHECK(eta_half.derivative(0.0) == doctest::Approx(-0.5).epsilon(1e-13));

  for (const auto& exp :
       {xi2, eta2, LaplaceExponent(Family::Eta, 1.1, near_uniform())}) {
    for (double q : {-0.4, 0.3, 1.2}) {
      const double fd = oracles::derivative(
          [&](double x) { return exp.value(x); }, q);
      CHECK(exp.derivative(q) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("Eta exponent is the shifted Xi exponent") {
  for (const auto& kernel : {kG1, near_uniform()}) {
    for (double drift : {0.5, 2.0}) {
      const LaplaceExponent xi(Family::Xi, drift, kernel);
      const LaplaceExponent eta(Family::Eta, drift, kernel);
      for (double q : {0.2, 0.9, 1.7, 3.0}) {
        CHECK(eta.value(q) - (xi.value(q - 1.0) - xi.value(-1.0)) ==
              doctest::Approx(0.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("right inverse returns the largest root") {
  const LaplaceExponent xi2(Family::Xi, 2.0, kG1);
  CHECK(xi2.right_inverse(-1.5) == doctest::Approx(-1.0).epsilon(1e-10));
  // drifts upward at 0: Phi(0) = 0
  CHECK(xi2.right_inverse(0.0) == doctest::Approx(0.0));
  const LaplaceExponent eta_half(Family::Eta, 0.5, kG1);
  CHECK(eta_half.right_inverse(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(xi2.right_inverse(-5.0), DomainError);
}

TEST_CASE("right inverse round trips") {
  const LaplaceExponent xi(Family::Xi, 1.7, kG1);
  const auto inf = xi.infimum();
  for (double theta : {inf.value + 0.01, -0.5, 0.0, 0.7, 4.0}) {
    const double q = xi.right_inverse(theta);
    CHECK(q >= inf.q_min - 1e-12);
    CHECK(xi.value(q) == doctest::Approx(theta).epsilon(1e-10));
  }
  for (double q : {inf.q_min + 0.05, 0.0, 1.3}) {
    CHECK(xi.right_inverse(xi.value(q)) == doctest::Approx(q).epsilon(1e-9));
  }
}

TEST_CASE("infimum against grid minimization") {
  const LaplaceExponent a2(Family::Xi, 2.0, kG1);
  auto inf = a2.infimum();
  CHECK(inf.attained);
  CHECK(inf.q_min == doctest::Approx(-2.0 + 1.0 / std::sqrt(2.0)).epsilon(1e-9));
  CHECK(inf.value == doctest::Approx(-1.6715728752538097).epsilon(1e-9));

  const LaplaceExponent ah(Family::Xi, 0.5, kG1);
  inf = ah.infimum();
  CHECK(inf.attained);
  CHECK(inf.q_min == doctest::Approx(-2.0 + std::sqrt(2.0)).epsilon(1e-9));
  CHECK(inf.value == doctest::Approx(-0.0857864376269049).epsilon(1e-9));

  const auto grid = oracles::grid_minimize(
      [&](double q) { return ah.value(q); }, -1.95, 3.0);
  CHECK(inf.q_min == doctest::Approx(grid.first).epsilon(1e-6));
  CHECK(inf.value == doctest::Approx(grid.second).epsilon(1e-9));
}

TEST_CASE("monotone exponent is flagged at the domain edge") {
  // Tabulated kernel with interior support, capped domain, dominant drift.
  const auto t = oracles::uniform_table(7, 0.2);
  const auto inner = FragmentationKernel::tabulated(t.s, t.rho, 0.9);
  const LaplaceExponent eta(Family::Eta, 3.0, inner);
  REQUIRE(eta.derivative(eta.domain_min() + 1e-9) > 0.0);
  const auto inf = eta.infimum();
  CHECK_FALSE(inf.attained);
  CHECK(inf.q_min == eta.domain_min());
}

TEST_CASE("q_star combines the two infima") {
  CHECK(q_star(kCanonical, kG1) ==
        doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-9));
  // equal drifts reduce to one branch
  const ModelParams linear(0.8, 0.8);
  const LaplaceExponent xi(Family::Xi, 0.8, kG1);
  CHECK(q_star(linear, kG1) ==
        doctest::Approx(xi.infimum().value + 0.8).epsilon(1e-12));
  // gamma = 2 case against grid minimization
  const auto g2 = FragmentationKernel::monomial(2.0);
  const ModelParams p2(1.0, 0.1);
  const LaplaceExponent xm(Family::Xi, 1.0, g2);
  const LaplaceExponent xp(Family::Xi, 0.1, g2);
  const auto gm = oracles::grid_minimize([&](double q) { return xm.value(q); },
                                         -2.95, 4.0);
  const auto gp = oracles::grid_minimize([&](double q) { return xp.value(q); },
                                         -2.95, 4.0);
  CHECK(q_star(p2, g2) ==
        doctest::Approx(std::max(gm.second + 1.0, gp.second + 0.1))
            .epsilon(1e-8));
}

TEST_CASE("L at the Malthus exponent and below q_star") {
  CHECK(L(kCanonical, kG1, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
  const auto below = evaluate_L(kCanonical, kG1, q_star(kCanonical, kG1) - 0.01);
  CHECK(std::isinf(below.value));
  CHECK(below.below_q_star);
  // finite, decreasing, convex above q*
  double prev = L(kCanonical, kG1, 0.45);
  for (double q : {0.5, 0.6, 0.8, 1.2}) {
    const double cur = L(kCanonical, kG1, q);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("L linear-growth reduction") {
  const double a = 0.8;
  const ModelParams linear(a, a);
  const LaplaceExponent psi(Family::Xi, a, kG1);
  for (double q : {0.6, 1.0, 2.0}) {
    const double expected =
        1.0 - psi.derivative(psi.right_inverse(q - a)) / a;
    CHECK(L(linear, kG1, q) == doctest::Approx(expected).epsilon(1e-12));
  }
  // The general two-branch formula approaches the linear value as the
  // refraction gap closes.
  const double gap = L(ModelParams(a + 1e-4, a), kG1, 1.0);
  CHECK(gap == doctest::Approx(L(linear, kG1, 1.0)).epsilon(1e-3));
}

TEST_CASE("L slightly above lambda_star stays below one in every regime") {
  for (const auto& params :
       {kCanonical, ModelParams(2.0, 1.0), ModelParams(0.9, 0.5)}) {
    CHECK(L(params, kG1, kG1.lambda_star() + 0.05) < 1.0);
  }
}

TEST_CASE("slope of L at the Malthus exponent") {
  CHECK(L_prime_at_lambda(kCanonical, kG1) ==
        doctest::Approx(-3.0).epsilon(1e-10));
  // matches the monomial mass identity 1/(a- b-) + 1/(a+ b+) = 1 + 2
  // and a finite-difference slope of L.
  const double fd = oracles::derivative(
      [&](double q) { return L(kCanonical, kG1, q); }, 0.5, 1e-5);
  CHECK(L_prime_at_lambda(kCanonical, kG1) ==
        doctest::Approx(fd).epsilon(1e-6));
  CHECK_THROWS_AS(L_prime_at_lambda(ModelParams(0.8, 0.8), kG1), RegimeError);
  CHECK_THROWS_AS(L_prime_at_lambda(ModelParams(2.0, 1.0), kG1), RegimeError);
}

TEST_CASE("Cramer root closed forms") {
  CHECK(*cramer_root(kCanonical, kG1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_FALSE(cramer_root(ModelParams(1.0, 0.5), kG1).has_value());
  const auto g2 = FragmentationKernel::monomial(2.0);
  CHECK(*cramer_root(ModelParams(1.0, 0.2), g2) ==
        doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("recurrence classification") {
  CHECK(classify_recurrence(kCanonical, kG1, Family::Eta) ==
        RecurrenceClass::PositiveRecurrent);
  CHECK(classify_recurrence(ModelParams(2.0, 1.0), kG1, Family::Eta) ==
        RecurrenceClass::NullRecurrent);
  // Xi family with both branches drifting upward.
  CHECK(classify_recurrence(ModelParams(2.0, 0.5), kG1, Family::Xi) ==
        RecurrenceClass::DriftsToPlusInfinity);
  CHECK(classify_recurrence(ModelParams(0.2, 0.1), kG1, Family::Eta) ==
        RecurrenceClass::DriftsToMinusInfinity);
}

TEST_CASE("malthus regime report") {
  const RegimeReport strict = malthus(kCanonical, kG1);
  CHECK(strict.regime == Regime::StrictMalthusian);
  CHECK(strict.lambda_star == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(strict.condition_low == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(*strict.beta_plus == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*strict.beta_minus == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(*strict.L_prime_at_lambda == doctest::Approx(-3.0).epsilon(1e-10));
  CHECK(strict.recurrence_class == RecurrenceClass::PositiveRecurrent);

  const RegimeReport boundary = malthus(ModelParams(2.0, 1.0), kG1);
  CHECK(boundary.regime == Regime::BoundaryLow);
  CHECK(boundary.L_prime_at_lambda.has_value());
  CHECK(std::isinf(*boundary.L_prime_at_lambda));

  const RegimeReport fails_high = malthus(ModelParams(0.9, 0.5), kG1);
  CHECK(fails_high.regime == Regime::FailsHigh);
  CHECK_FALSE(fails_high.L_prime_at_lambda.has_value());

  const RegimeReport fails_low = malthus(ModelParams(3.0, 1.5), kG1);
  CHECK(fails_low.regime == Regime::FailsLow);
  CHECK_FALSE(fails_low.beta_plus.has_value());

  const RegimeReport boundary_high = malthus(ModelParams(1.0, 0.5), kG1);
  CHECK(boundary_high.regime == Regime::BoundaryHigh);
}

TEST_CASE("change-of-measure identity for beta_plus") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    const double gamma = 1.0 + 2.0 * u01(gen);
    const auto kernel = FragmentationKernel::monomial(gamma);
    const double g2 = gamma * gamma;
    const ModelParams params((1.1 + u01(gen)) / g2, (0.2 + 0.6 * u01(gen)) / g2);
    const LaplaceExponent psi_plus(Family::Xi, params.a_plus, kernel);
    const LaplaceExponent eta_plus(Family::Eta, params.a_plus, kernel);
    const double lhs = psi_plus.right_inverse(psi_plus.value(-1.0)) + 1.0;
    const double rhs = eta_plus.right_inverse(0.0);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("convexity of the exponents") {
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> u(-0.8, 4.0);
  const LaplaceExponent xi(Family::Xi, 1.2, kG1);
  for (int rep = 0; rep < 200; ++rep) {
    double q1 = u(gen), q2 = u(gen), q3 = u(gen);
    if (q1 > q2) std::swap(q1, q2);
    if (q2 > q3) std::swap(q2, q3);
    if (q1 > q2) std::swap(q1, q2);
    if (q3 - q1 < 1e-6) continue;
    const double f = (q2 - q1) / (q3 - q1);
    CHECK(xi.value(q2) <=
          (1.0 - f) * xi.value(q1) + f * xi.value(q3) + 1e-12);
  }
}
