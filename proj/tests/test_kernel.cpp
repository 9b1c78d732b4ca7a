// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <thread>

#include "gfpl/errors.hpp"
#include "gfpl/kernel.hpp"
#include "gfpl/rng.hpp"
#include "oracles.hpp"

using gfpl::FragmentationKernel;
using gfpl::JumpKind;

namespace {

FragmentationKernel uniform_kernel(int nodes = 1001, double inset = 1e-10,
                                   double epsilon = 0.9) {
  auto t = oracles::uniform_table(nodes, inset);
  return FragmentationKernel::tabulated(t.s, t.rho, epsilon);
}

}  // namespace

TEST_CASE("monomial moments in closed form") {
  const auto g1 = FragmentationKernel::monomial(1.0);
  const auto g2 = FragmentationKernel::monomial(2.0);
  CHECK(g1.moment(1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(g2.moment(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(g1.moment(-1.0), gfpl::DomainError);
  CHECK_THROWS_AS(g1.moment(-1.5), gfpl::DomainError);
}

TEST_CASE("tabulated uniform density reproduces exact moments") {
  const auto k = uniform_kernel();
  CHECK(k.moment(1.0) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(k.moment(0.0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(k.log_moment(0.0) == doctest::Approx(-1.0).epsilon(1e-8));
  const auto rates = k.total_rates();
  CHECK(rates.first == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(rates.second == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("log moments in closed form") {
  CHECK(FragmentationKernel::monomial(1.0).log_moment(0.0) ==
        doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(FragmentationKernel::monomial(2.0).log_moment(0.0) ==
        doctest::Approx(-0.25).epsilon(1e-14));
}

TEST_CASE("total rates and lambda_star") {
  const auto g1 = FragmentationKernel::monomial(1.0);
  const auto g2 = FragmentationKernel::monomial(2.0);
  CHECK(g1.total_rates().first == doctest::Approx(0.5));
  CHECK(g1.total_rates().second == doctest::Approx(1.0));
  CHECK(g2.total_rates().first == doctest::Approx(1.0 / 3.0));
  CHECK(g2.total_rates().second == doctest::Approx(0.5));
  CHECK(g1.lambda_star() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(g2.lambda_star() == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(FragmentationKernel::monomial(3.0).lambda_star() ==
        doctest::Approx(1.0 / 12.0).epsilon(1e-14));
}

TEST_CASE("lambda_star equals r_tilde - K exactly") {
  for (const auto& k :
       {FragmentationKernel::monomial(1.5), uniform_kernel(101, 1e-6)}) {
    const auto rates = k.total_rates();
    CHECK(k.lambda_star() == rates.second - rates.first);
  }
}

TEST_CASE("moments match adaptive quadrature") {
  const auto g = FragmentationKernel::monomial(2.5);
  for (double q : {-1.2, -0.5, 0.0, 0.7, 1.0, 3.0}) {
    const double ref = oracles::integrate(
        [&](double s) { return std::pow(s, q) * g.density(s); }, 1e-14, 1.0);
    CHECK(g.moment(q) == doctest::Approx(ref).epsilon(1e-8));
  }
  // Peaked tabulated density.
  std::vector<double> s{0.1, 0.3, 0.5, 0.7, 0.9};
  std::vector<double> rho{0.0, 2.0, 5.0, 1.0, 0.5};
  const auto k = FragmentationKernel::tabulated(s, rho, 0.5);
  for (double q : {-0.4, 0.0, 1.0, 2.5}) {
    const double ref = oracles::integrate(
        [&](double x) { return std::pow(x, q) * k.density(x); }, 0.1, 0.9);
    CHECK(k.moment(q) == doctest::Approx(ref).epsilon(1e-8));
    const double lref = oracles::integrate(
        [&](double x) { return std::pow(x, q) * std::log(x) * k.density(x); },
        0.1, 0.9);
    CHECK(k.log_moment(q) == doctest::Approx(lref).epsilon(1e-8));
  }
}

TEST_CASE("partial moments agree with quadrature and add up") {
  const auto g = FragmentationKernel::monomial(1.0);
  const double whole = g.partial_moment(1.0, 0.0, 1.0);
  CHECK(whole == doctest::Approx(g.moment(1.0)).epsilon(1e-13));
  CHECK(g.partial_moment(1.0, 0.2, 0.7) ==
        doctest::Approx((0.49 - 0.04) / 2.0).epsilon(1e-12));

  const auto k = uniform_kernel(51, 1e-3, 0.5);
  const double ref = oracles::integrate(
      [&](double x) { return k.density(x) / x; }, 0.25, 0.75);
  CHECK(k.partial_moment(-1.0, 0.25, 0.75) ==
        doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("moment is decreasing and log-convex in q") {
  for (const auto& k :
       {FragmentationKernel::monomial(1.0), uniform_kernel(101, 1e-6)}) {
    double prev = k.moment(-0.4);
    for (int i = 1; i <= 30; ++i) {
      const double q = -0.4 + 0.2 * i;
      const double cur = k.moment(q);
      CHECK(cur < prev);
      prev = cur;
    }
    for (int i = 0; i < 28; ++i) {
      const double q = -0.4 + 0.2 * i;
      const double a = std::log(k.moment(q));
      const double b = std::log(k.moment(q + 0.2));
      const double c = std::log(k.moment(q + 0.4));
      CHECK(b <= 0.5 * (a + c) + 1e-12);
    }
  }
}

TEST_CASE("jump sampling closed forms") {
  const auto g1 = FragmentationKernel::monomial(1.0);
  const auto g2 = FragmentationKernel::monomial(2.0);
  CHECK(g1.sample_jump(JumpKind::XType, 0.25) ==
        doctest::Approx(std::log(0.5)).epsilon(1e-14));
  CHECK(g1.sample_jump(JumpKind::YType, 0.5) ==
        doctest::Approx(std::log(0.5)).epsilon(1e-14));
  CHECK(g2.sample_jump(JumpKind::YType, 0.25) ==
        doctest::Approx(std::log(0.5)).epsilon(1e-14));
}

TEST_CASE("empirical jump CDF matches the analytic law") {
  // sup-norm distance of the empirical CDF over a grid of probe points.
  const auto check_kernel = [](const FragmentationKernel& k, JumpKind kind,
                               const std::function<double(double)>& cdf) {
    gfpl::PathRng rng(2024, 7);
    const int n = 1000000;
    std::vector<double> draws(n);
    for (int i = 0; i < n; ++i) {
      draws[i] = std::exp(k.sample_jump(kind, rng.uniform()));
    }
    std::sort(draws.begin(), draws.end());
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double s = (i + 0.5) / 200.0;
      const double emp =
          std::lower_bound(draws.begin(), draws.end(), s) - draws.begin();
      worst = std::max(worst, std::abs(emp / n - cdf(s)));
    }
    CHECK(worst < 0.005);
  };
  const auto g2 = FragmentationKernel::monomial(2.0);
  check_kernel(g2, JumpKind::XType,
               [](double s) { return std::pow(s, 3.0); });
  check_kernel(g2, JumpKind::YType, [](double s) { return s * s; });

  const auto u = uniform_kernel(101, 1e-6);
  check_kernel(u, JumpKind::XType, [](double s) { return s * s; });
  check_kernel(u, JumpKind::YType, [](double s) { return s; });
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(FragmentationKernel::monomial(0.5), gfpl::ConfigError);
  CHECK_THROWS_AS(FragmentationKernel::monomial(1.0, 1.5), gfpl::ConfigError);
  CHECK_THROWS_AS(FragmentationKernel::monomial(1.0, 0.0), gfpl::ConfigError);
  CHECK_THROWS_AS(FragmentationKernel::tabulated({0.5}, {1.0}, 0.5),
                  gfpl::ConfigError);
  CHECK_THROWS_AS(FragmentationKernel::tabulated({0.5, 0.4}, {1.0, 1.0}, 0.5),
                  gfpl::ConfigError);
  CHECK_THROWS_AS(FragmentationKernel::tabulated({0.0, 0.5}, {1.0, 1.0}, 0.5),
                  gfpl::ConfigError);
  CHECK_THROWS_AS(FragmentationKernel::tabulated({0.4, 0.5}, {-1.0, 1.0}, 0.5),
                  gfpl::ConfigError);
  CHECK_THROWS_AS(FragmentationKernel::tabulated({0.4, 0.5}, {0.0, 0.0}, 0.5),
                  gfpl::ConfigError);
  CHECK_THROWS_AS(FragmentationKernel::tabulated({0.4, 0.5}, {1.0, 1.0}, 0.0),
                  gfpl::ConfigError);
}

TEST_CASE("concurrent reads of a shared kernel agree") {
  const auto k = uniform_kernel(201, 1e-6);
  const double expected = k.moment(0.35);
  std::vector<std::thread> pool;
  std::vector<double> got(8);
  for (int w = 0; w < 8; ++w) {
    pool.emplace_back([&, w] {
      double v = 0.0;
      for (int i = 0; i < 50; ++i) v = k.moment(0.35);
      got[w] = v;
    });
  }
  for (auto& th : pool) th.join();
  for (double v : got) CHECK(v == expected);
}
