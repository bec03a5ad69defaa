"""Isotropic volume functions of convex bodies, separability rank tests, and
the exact polynomial identities behind them."""

from .polyalg import MultiPoly, RationalFunc, divide_exact, grad_dot, laplacian, partial, total_degree, is_homogeneous
from .calculus import (
    GradedElement,
    JetPoly,
    dual_quadric_divisible,
    graded_laplacian,
    grading_preserved,
    load_octic,
    q_polynomial,
    q_tilde,
    substitute_jets,
)
from .valuation import INFINITY, laplacian_valuation_drop, product_formula_check, v_inf, vp
from .algext import (
    MinPolyData,
    PerfectPowerError,
    charpoly,
    charpoly_of_power,
    coeff_homogeneity_check,
    companion,
    minpoly_of_root_body,
    power_sums,
    structural_form_check,
    valuation_growth,
)
from .body import Ball, Body, Ellipsoid, PolyRoot, RadialPerturbation, convexity_probe, fixture, load_body, parse_body
from .sections import (
    Frame,
    ball_volume_oracle,
    derivative_probe,
    ellipsoid_section_oracle,
    isotropic_volume,
    ovall_coefficients,
    parallel_section,
)
from .separability import RankReport, SepMatrix, build_sep_matrix, numerical_rank, random_subspaces, rank_growth_curve

__version__ = "0.1.0"
