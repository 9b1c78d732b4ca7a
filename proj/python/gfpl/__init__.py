# SPDX-License-Identifier: Apache-2.0
"""Long-time asymptotics of the critical growth-fragmentation equation with
piecewise-linear growth: spectral constants, the stationary profile, exact
event-driven Monte Carlo of the driving refracted processes and a
finite-volume solver, all backed by the C++ core."""

from gfpl._core import (
    Estimate,
    Family,
    FragmentationKernel,
    GfplError,
    JumpKind,
    LaplaceExponent,
    LEstimate,
    L,
    L_prime_at_lambda,
    ModelParams,
    ProfileDensity,
    classify,
    cramer_constant,
    cramer_root,
    estimate_L,
    feynman_kac_indicator,
    mtilde_numeric,
    occupation_masses,
    pde_profile,
    q_star,
    scale_function,
    semigroup_growth,
    total_mass,
    two_sided_exit,
)

__all__ = [
    "Estimate",
    "Family",
    "FragmentationKernel",
    "GfplError",
    "JumpKind",
    "LaplaceExponent",
    "LEstimate",
    "L",
    "L_prime_at_lambda",
    "ModelParams",
    "ProfileDensity",
    "classify",
    "cramer_constant",
    "cramer_root",
    "estimate_L",
    "feynman_kac_indicator",
    "mtilde_numeric",
    "occupation_masses",
    "pde_profile",
    "q_star",
    "scale_function",
    "semigroup_growth",
    "total_mass",
    "two_sided_exit",
]

__version__ = "0.1.0"
