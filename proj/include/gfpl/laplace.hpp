// SPDX-License-Identifier: Apache-2.0
#ifndef GFPL_LAPLACE_HPP
#define GFPL_LAPLACE_HPP

#include <complex>
#include <functional>

namespace gfpl {

using ComplexTransform = std::function<std::complex<double>(std::complex<double>)>;
using RealTransform = std::function<double(double)>;

// Fixed-Talbot inversion of F at t > 0. All singularities of F must lie in
// { Re q < shift }; the result is f(t).
double talbot_invert(const ComplexTransform& transform, double t,
                     int nodes = 32, double shift = 0.0);

// Gaver-Stehfest inversion with `terms` (even) weights, accumulated in long
// double. Needs F on the real axis right of `shift` only.
double gaver_stehfest_invert(const RealTransform& transform, double t,
                             int terms = 14, double shift = 0.0);

// Talbot value cross-checked against Gaver-Stehfest; throws InversionError
// when the two disagree by more than rel_tol relative to the larger scale.
double invert_checked(const ComplexTransform& transform, double t,
                      double rel_tol = 1e-5, int nodes = 32,
                      double shift = 0.0);

}  // namespace gfpl

#endif  // GFPL_LAPLACE_HPP
