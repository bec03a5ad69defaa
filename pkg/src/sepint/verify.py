"""Self-check suites run by ``sepint verify``.

Each suite returns a list of :class:`Check` records.  All randomness is drawn
from ``random.Random(seed)`` or seeded numpy generators, so two runs with the
same seed produce identical records.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import algext, calculus, sections, separability
from .body import fixture
from .polyalg import MultiPoly, RationalFunc, laplacian
from .valuation import INFINITY, laplacian_valuation_drop, product_formula_check, v_inf, vp

__all__ = [
    "Check",
    "SUITES",
    "BASELINES",
    "random_poly",
    "run_suite",
]

# Regression values measured at quadrature resolution 32 and 40 (identical
# singular values to 3 digits), seed 0, tol 1e-7.
BASELINES = {
    "ellipsoid125_rank_30x30": 2,
    "l4ball3_rank_curve": [(8, 6), (16, 7), (24, 7)],
}


@dataclass
class Check:
    name: str
    passed: bool
    measured: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "status": "pass" if self.passed else "fail", "measured": self.measured}


def random_poly(rng: random.Random, nvars: int, max_deg: int, n_terms: int, coeff_range: int = 5) -> MultiPoly:
    """Sparse polynomial with small nonzero integer coefficients (never zero)."""
    terms = {}
    while not terms:
        for _ in range(n_terms):
            deg = rng.randint(0, max_deg)
            e = [0] * nvars
            for _ in range(deg):
                e[rng.randrange(nvars)] += 1
            c = rng.choice([c for c in range(-coeff_range, coeff_range + 1) if c])
            terms[tuple(e)] = terms.get(tuple(e), 0) + c
        terms = {e: c for e, c in terms.items() if c}
    return MultiPoly(terms, nvars)


def _unit(i: int, d: int) -> tuple[int, ...]:
    return tuple(int(j == i) for j in range(d))


def _apply_partials(f: MultiPoly, alpha) -> MultiPoly:
    for i, a in enumerate(alpha):
        for _ in range(a):
            f = f.partial(i)
    return f


# -- symbolic ---------------------------------------------------------------


def check_jet_polynomials(rng: random.Random, n_polys: int = 3) -> list[Check]:
    """Jet polynomials against direct differentiation, d = 2, |alpha| <= 4."""
    mismatches, leading_bad, cases = [], [], 0
    polys = [random_poly(rng, 2, 2, 3) for _ in range(n_polys)]
    for order in range(1, 5):
        for alpha in calculus.multi_indices(2, order):
            Q = calculus.q_polynomial(alpha)
            if Q.coeff_of_m(order) != calculus.gradient_power(alpha) or Q.m_degree() != order:
                leading_bad.append(list(alpha))
            for f in polys:
                for m in (order, order + 2):
                    cases += 1
                    lhs = _apply_partials(f**m, alpha)
                    rhs = calculus.substitute_jets(Q, f, m) * f ** (m - order)
                    if lhs != rhs:
                        mismatches.append([list(alpha), m])
    return [
        Check("jet_polynomial_oracle", not mismatches, {"cases": cases, "mismatches": mismatches}),
        Check("jet_polynomial_leading_term", not leading_bad, {"bad_alpha": leading_bad}),
    ]


def check_graded_laplacian(rng: random.Random, n_cases: int = 50) -> Check:
    bad = []
    for case in range(n_cases):
        d = rng.randint(1, 3)
        g = random_poly(rng, d, 2, 3)
        h = random_poly(rng, d, 2, 3)
        nu = rng.randint(2, 3)
        lhs = calculus.graded_laplacian(g, h, nu) * RationalFunc(h**nu)
        rhs = RationalFunc(laplacian(g * h**nu))
        if lhs != rhs:
            bad.append(case)
    return Check("graded_laplacian_identity", not bad, {"cases": n_cases, "failures": bad})


def check_grading(rng: random.Random, n_cases: int = 6) -> Check:
    bad = []
    for case in range(n_cases):
        h = random_poly(rng, 2, 2, 3)
        g = random_poly(rng, 2, 2, 2)
        m = rng.randint(1, 3)
        i = rng.randrange(2 * m)
        if not calculus.grading_preserved(g, h, m, i):
            bad.append(case)
    return Check("grading_preserved", not bad, {"cases": n_cases, "failures": bad})


def check_dual_quadric() -> list[Check]:
    x, y, z = MultiPoly.variables(3)
    quadric = x**2 + y**2 + z**2
    # divisibility survives rational similarities (A A^T = c I), not general linear maps
    similarity = quadric.linear_change([[3, 4, 0], [-4, 3, 0], [0, 0, 5]])
    stretched = quadric.linear_change([[2, 0, 0], [0, 1, 0], [0, 0, 1]])
    cubic = x**3 + y**3 + z**3
    octic = calculus.load_octic()
    return [
        Check("quadric_dual_quadric_divisible", calculus.dual_quadric_divisible(quadric), {}),
        Check("quadric_divisible_after_similarity", calculus.dual_quadric_divisible(similarity), {}),
        Check("stretched_quadric_not_divisible", not calculus.dual_quadric_divisible(stretched), {}),
        Check("cubic_not_dual_quadric_divisible", not calculus.dual_quadric_divisible(cubic), {}),
        Check(
            "eq15_dual_quadric_divisible",
            octic.is_homogeneous(8) and calculus.dual_quadric_divisible(octic),
            {"terms": len(octic), "degree": octic.total_degree()},
        ),
    ]


def suite_symbolic(seed: int) -> list[Check]:
    rng = random.Random(seed)
    return check_jet_polynomials(rng) + [check_graded_laplacian(rng), check_grading(rng)] + check_dual_quadric()


# -- valuation --------------------------------------------------------------


def _irreducible_pool() -> list[MultiPoly]:
    x, y = MultiPoly.variables(2)
    return [x + 1, y - 2, x**2 + y**2 + 1, x * y - 3, x**2 - 2 * y + 5]


def _random_factored(rng: random.Random, pool) -> tuple[Fraction, list[tuple[MultiPoly, int]]]:
    u = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 4))
    chosen = rng.sample(range(len(pool)), rng.randint(0, 3))
    return u, [(pool[i], rng.randint(-2, 3)) for i in chosen]


def _build(u, factors, nvars=2) -> RationalFunc:
    num = MultiPoly.constant(u, nvars)
    den = MultiPoly.constant(1, nvars)
    for p, e in factors:
        if e >= 0:
            num = num * p**e
        else:
            den = den * p ** (-e)
    return RationalFunc(num, den)


def _axiom_failures(v: Callable, f: RationalFunc, g: RationalFunc) -> list[int]:
    """Indices of valuation axioms (1)-(7) violated on the pair (f, g)."""
    one = RationalFunc(MultiPoly.constant(1, f.nvars))
    zero = RationalFunc(MultiPoly.zero(f.nvars))
    vf, vg = v(f), v(g)
    out = []
    if v(zero) is not INFINITY or vf is INFINITY or vg is INFINITY:
        out.append(1)
    if v(f * g) != vf + vg:
        out.append(2)
    s = f + g
    vs = v(s)
    if not vs >= min(vf, vg):
        out.append(3)
    if v(one) != 0:
        out.append(4)
    if v(f.inverse()) != -vf:
        out.append(5)
    if v(-f) != vf:
        out.append(6)
    if vf < vg and vs != vf:
        out.append(7)
    return out


def check_valuation_axioms(rng: random.Random, n_cases: int = 100) -> list[Check]:
    pool = _irreducible_pool()
    bad_p, bad_inf, rep_bad = [], [], []
    for case in range(n_cases):
        f = _build(*_random_factored(rng, pool))
        g = _build(*_random_factored(rng, pool))
        p = pool[rng.randrange(len(pool))]
        if _axiom_failures(lambda r: vp(r, p), f, g):
            bad_p.append(case)
        if _axiom_failures(v_inf, f, g):
            bad_inf.append(case)
        c = random_poly(rng, 2, 2, 2)
        if vp(RationalFunc(f.num * c, f.den * c), p) != vp(f, p):
            rep_bad.append(case)
    return [
        Check("vp_axioms_1_to_7", not bad_p, {"cases": n_cases, "failures": bad_p}),
        Check("v_inf_axioms_1_to_7", not bad_inf, {"cases": n_cases, "failures": bad_inf}),
        Check("vp_representation_independent", not rep_bad, {"cases": n_cases, "failures": rep_bad}),
    ]


def check_product_formula(rng: random.Random, n_cases: int = 50) -> Check:
    pool = _irreducible_pool()
    bad = []
    for case in range(n_cases):
        u, factors = _random_factored(rng, pool)
        if not product_formula_check(u, factors, nvars=2):
            bad.append(case)
    return Check("product_formula", not bad, {"cases": n_cases, "failures": bad})


def check_laplacian_drop() -> list[Check]:
    x, y = MultiPoly.variables(2)
    generic = x**2 + y**3 + 1
    quadric = x**2 + y**2
    g = x + 2 * y + 3
    drops_generic = [laplacian_valuation_drop(g * generic**nu, generic) for nu in (2, 3)]
    drops_quadric = [laplacian_valuation_drop(quadric**nu, quadric) for nu in (2, 3)]
    return [
        Check("laplacian_drop_generic_is_2", drops_generic == [2, 2], {"drops": drops_generic}),
        Check("laplacian_drop_quadric_is_1", drops_quadric == [1, 1], {"drops": drops_quadric}),
    ]


def suite_valuation(seed: int) -> list[Check]:
    rng = random.Random(seed)
    return check_valuation_axioms(rng) + [check_product_formula(rng)] + check_laplacian_drop()


# -- algext -----------------------------------------------------------------


def power_root_fixtures() -> list[tuple[str, MultiPoly, int]]:
    x, y = MultiPoly.variables(2)
    a, b, c = MultiPoly.variables(3)
    return [
        ("x^2+2y^2", x**2 + 2 * y**2, 2),
        ("x^4+y^4", x**4 + y**4, 4),
        ("x^4+3x^2y^2+y^4", x**4 + 3 * x**2 * y**2 + y**4, 4),
        ("x^6+y^6", x**6 + y**6, 6),
        ("x^4+y^4+z^4", a**4 + b**4 + c**4, 4),
    ]


def check_charpoly_companion(rng: random.Random, n_cases: int = 6) -> Check:
    bad = []
    for case in range(n_cases):
        m = 1 + case % 3
        coeffs = [RationalFunc(random_poly(rng, 2, 2, 2), random_poly(rng, 2, 1, 2)) for _ in range(m)]
        mp = algext.MinPolyData(m, tuple(coeffs))
        if algext.charpoly(algext.companion(mp)) != list(coeffs):
            bad.append(case)
    return Check("charpoly_companion_equals_mu", not bad, {"cases": n_cases, "failures": bad})


def check_root_fixtures() -> list[Check]:
    homog_bad, struct_bad, trace_bad, slope_bad = [], [], [], []
    slopes = {}
    for name, h, two_m in power_root_fixtures():
        mp = algext.minpoly_of_root_body(h, two_m)
        if not algext.coeff_homogeneity_check(mp):
            homog_bad.append(name)
        try:
            P = algext.structural_form_check(mp)
            if not (P.is_homogeneous(2 * mp.m) and P == h):
                struct_bad.append(name)
        except ValueError:
            struct_bad.append(name)
        C = algext.companion(mp)
        ps = algext.power_sums(mp, 4)
        for s in range(1, 4):
            chi = algext.charpoly_of_power(C, s)
            if chi[mp.m - 1] != -ps[s - 1]:
                trace_bad.append([name, s])
        if mp.nvars == 2:
            # C^m = h^-1 I, so on multiples of m the growth is exactly linear
            s_list = list(range(mp.m, algext.MAX_POWER + 1, mp.m))[:3]
            vals = algext.valuation_growth(C, h, s_list)
            slope = algext.growth_slope(vals, s_list)
            slopes[name] = str(slope)
            if slope != Fraction(vp(mp.coeffs[0], h), mp.m):
                slope_bad.append(name)
    return [
        Check("coeff_homogeneity", not homog_bad, {"failures": homog_bad}),
        Check("structural_reconstruction", not struct_bad, {"failures": struct_bad}),
        Check("newton_trace_consistency", not trace_bad, {"failures": trace_bad}),
        Check("valuation_growth_slope", not slope_bad, {"slopes": slopes, "failures": slope_bad}),
    ]


def check_negative_controls() -> list[Check]:
    x, y = MultiPoly.variables(2)
    perfect = (x**2 + y**2) ** 2
    try:
        algext.minpoly_of_root_body(perfect, 4)
        rejected_h = False
    except algext.PerfectPowerError:
        rejected_h = True
    forged = algext.MinPolyData(2, (-RationalFunc(MultiPoly.constant(1, 2), perfect), RationalFunc(MultiPoly.zero(2))))
    try:
        algext.structural_form_check(forged)
        rejected_form = False
    except algext.PerfectPowerError:
        rejected_form = True
    corrupted = algext.MinPolyData(2, (-RationalFunc(MultiPoly.constant(1, 2), x**4 + y**3), RationalFunc(MultiPoly.zero(2))))
    try:
        algext.structural_form_check(corrupted)
        rejected_inhom = False
    except algext.PerfectPowerError:
        rejected_inhom = False
    except ValueError:
        rejected_inhom = True
    return [
        Check("perfect_power_h_rejected", rejected_h, {}),
        Check("structural_perfect_power_rejected", rejected_form, {}),
        Check("structural_inhomogeneous_rejected", rejected_inhom, {}),
    ]


def suite_algext(seed: int) -> list[Check]:
    rng = random.Random(seed)
    return [check_charpoly_companion(rng)] + check_root_fixtures() + check_negative_controls()


# -- geometry ---------------------------------------------------------------

BALL_CASES = [(2, 1), (3, 1), (3, 2), (4, 1)]
BALL_TS = [0.2, 0.5, 0.8]


def check_ball_oracle(seed: int, resolution: int) -> Check:
    worst = 0.0
    for d, k in BALL_CASES:
        b = fixture(f"ball{d}")
        H = separability.random_subspaces(d, k, 1, seed)[0]
        got = sections.isotropic_volume(b, H, np.array(BALL_TS), resolution)
        for t, v in zip(BALL_TS, got):
            ref = sections.ball_volume_oracle(d, k, 1.0, t)
            worst = max(worst, abs(v - ref) / ref)
    return Check("ball_oracle_agreement", worst <= 1e-6, {"max_rel_error": worst, "threshold": 1e-6})


def check_ellipsoid_oracle(seed: int, resolution: int) -> Check:
    b = fixture("ellipsoid125")
    Q = np.array(b.Q, dtype=float)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(5):
        xi = rng.standard_normal(3)
        xi /= np.linalg.norm(xi)
        for t in (0.0, 0.2, 0.4):
            ref = sections.ellipsoid_section_oracle(Q, xi, t)
            got = sections.parallel_section(b, xi, t, resolution)
            worst = max(worst, abs(got - ref) / ref)
    return Check("ellipsoid_section_oracle_agreement", worst <= 1e-6, {"max_rel_error": worst, "threshold": 1e-6})


def check_taylor(resolution: int) -> list[Check]:
    b = fixture("ball3")
    H = np.array([[1.0, 0.0, 0.0]])
    d1 = sections.derivative_probe(b, H, 1, 0.05, resolution)
    d3 = sections.derivative_probe(b, H, 3, 0.05, resolution)
    err1 = abs(d1 - 2 * math.pi) / (2 * math.pi)
    err3 = abs(d3 + 4 * math.pi) / (4 * math.pi)
    coeffs = sections.ovall_coefficients(1, [math.pi, -2 * math.pi]).coeffs
    ref = (2 * math.pi, -2 * math.pi / 3)
    cerr = max(abs(c - r) / abs(r) for c, r in zip(coeffs, ref))
    return [
        Check("taylor_derivative_probe", err1 <= 1e-2 and err3 <= 1e-2, {"order1": d1, "order3": d3, "rel_errors": [err1, err3]}),
        Check("ovall_coefficients_closed_form", cerr <= 1e-12, {"coeffs": list(coeffs), "max_rel_error": cerr}),
    ]


def suite_geometry(seed: int, resolution: int = sections.DEFAULT_RESOLUTION) -> list[Check]:
    return [check_ball_oracle(seed, resolution), check_ellipsoid_oracle(seed, resolution)] + check_taylor(resolution)


# -- separability -----------------------------------------------------------


def suite_separability(
    seed: int,
    resolution: int = sections.DEFAULT_RESOLUTION,
    tol: float = separability.DEFAULT_TOL,
    threads: int = 1,
) -> list[Check]:
    ball = separability.rank_growth_curve(fixture("ball3"), 1, [5, 10, 20], seed, tol, resolution, threads)
    ell = separability.build_sep_matrix(fixture("ellipsoid125"), 1, 30, 30, seed, resolution, threads)
    ell_rank = separability.numerical_rank(ell, tol).rank
    l4 = separability.rank_growth_curve(fixture("l4ball3"), 1, [8, 16, 24], seed, tol, resolution, threads)
    ranks = [r for _, r in l4]
    baseline = [list(p) for p in BASELINES["l4ball3_rank_curve"]]
    return [
        Check("ball_rank_one", all(r == 1 for _, r in ball), {"curve": [list(p) for p in ball]}),
        Check(
            "ellipsoid_rank_bounded",
            ell_rank <= 3 and ell_rank == BASELINES["ellipsoid125_rank_30x30"],
            {"rank": ell_rank, "bound": 3, "baseline": BASELINES["ellipsoid125_rank_30x30"]},
        ),
        Check("l4_rank_matches_baseline", [list(p) for p in l4] == baseline, {"curve": [list(p) for p in l4], "baseline": baseline}),
        Check(
            "l4_rank_strictly_increasing",
            all(b > a for a, b in zip(ranks, ranks[1:])) and ranks[-1] >= 8,
            {"ranks": ranks, "required_final": 8},
        ),
    ]


SUITES = ("symbolic", "valuation", "algext", "geometry", "separability")


def run_suite(
    name: str,
    seed: int = 0,
    resolution: int = sections.DEFAULT_RESOLUTION,
    tol: float = separability.DEFAULT_TOL,
    threads: int = 1,
) -> dict[str, list[Check]]:
    """Run one suite (or ``all``); returns ``{suite_name: checks}`` in a fixed order."""
    if name == "all":
        names = SUITES
    elif name in SUITES:
        names = (name,)
    else:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES + ('all',)}")
    out = {}
    for n in names:
        if n == "geometry":
            out[n] = suite_geometry(seed, resolution)
        elif n == "separability":
            out[n] = suite_separability(seed, resolution, tol, threads)
        else:
            out[n] = globals()[f"suite_{n}"](seed)
    return out
