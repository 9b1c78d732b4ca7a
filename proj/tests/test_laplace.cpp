// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "gfpl/errors.hpp"
#include "gfpl/laplace.hpp"

using gfpl::gaver_stehfest_invert;
using gfpl::invert_checked;
using gfpl::talbot_invert;

using Cx = std::complex<double>;

TEST_CASE("decaying exponential") {
  const auto f = [](Cx q) { return 1.0 / (q + 2.0); };
  for (double t : {0.01, 0.1, 1.0, 5.0, 10.0}) {
    const double exact = std::exp(-2.0 * t);
    CHECK(talbot_invert(f, t) == doctest::Approx(exact).epsilon(1e-9));
    CHECK(gaver_stehfest_invert([](double q) { return 1.0 / (q + 2.0); }, t) ==
          doctest::Approx(exact).epsilon(1e-6));
    CHECK(invert_checked(f, t) == doctest::Approx(exact).epsilon(1e-9));
  }
}

TEST_CASE("ramp and oscillation") {
  const auto ramp = [](Cx q) { return 1.0 / (q * q); };
  CHECK(talbot_invert(ramp, 3.0) == doctest::Approx(3.0).epsilon(1e-10));
  const auto osc = [](Cx q) { return 1.0 / (q * q + 1.0); };
  for (double t : {0.5, 2.0, 6.0}) {
    CHECK(talbot_invert(osc, t) == doctest::Approx(std::sin(t)).epsilon(1e-7));
  }
}

TEST_CASE("growing exponential with a shifted contour") {
  const auto f = [](Cx q) { return 1.0 / (q - 3.0); };
  const auto fr = [](double q) { return 1.0 / (q - 3.0); };
  for (double t : {0.5, 2.0, 4.0}) {
    const double exact = std::exp(3.0 * t);
    CHECK(talbot_invert(f, t, 32, 4.0) ==
          doctest::Approx(exact).epsilon(1e-9));
    CHECK(gaver_stehfest_invert(fr, t, 14, 4.0) ==
          doctest::Approx(exact).epsilon(1e-6));
  }
}

TEST_CASE("cross-check flags an inconsistent transform") {
  // A transform whose real-axis restriction disagrees with the contour
  // values: the checker must notice.
  const auto broken = [](Cx q) {
    if (q.imag() == 0.0) return Cx(1.0) / (q + 1.0);
    return Cx(1.0) / (q + 2.0);
  };
  CHECK_THROWS_AS(invert_checked(broken, 1.0), gfpl::InversionError);
}

TEST_CASE("inversion requires positive time") {
  const auto f = [](Cx q) { return 1.0 / (q + 1.0); };
  CHECK_THROWS_AS(talbot_invert(f, 0.0), gfpl::DomainError);
  CHECK_THROWS_AS(talbot_invert(f, -1.0), gfpl::DomainError);
}
