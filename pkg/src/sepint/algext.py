"""Minimal polynomials of ``zeta = ||x||^-2`` over Q(x) and their companion matrices.

Eigenvalues are never formed.  Statements about them are checked through
symmetric functions: characteristic polynomial coefficients are sums of
principal minors, and power sums come from Newton's identities.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .polyalg import MultiPoly, RationalFunc, divide_exact, is_homogeneous, total_degree
from .valuation import INFINITY, vp

__all__ = [
    "MinPolyData",
    "CompanionMatrix",
    "PerfectPowerError",
    "minpoly_of_root_body",
    "companion",
    "charpoly",
    "charpoly_of_power",
    "power_sums",
    "valuation_growth",
    "growth_slope",
    "coeff_homogeneity_check",
    "structural_form_check",
    "perfect_root",
]

MAX_DEGREE = 4
MAX_POWER = 8


class PerfectPowerError(ValueError):
    """Raised when a polynomial assumed not to be a perfect power is one."""


@dataclass(frozen=True)
class MinPolyData:
    """Monic ``lambda^m + coeffs[m-1] lambda^(m-1) + ... + coeffs[0]`` over Q(x)."""

    m: int
    coeffs: tuple[RationalFunc, ...]
    base_h: MultiPoly | None = None
    two_m: int | None = None

    def __post_init__(self):
        if len(self.coeffs) != self.m:
            raise ValueError(f"need {self.m} coefficients, got {len(self.coeffs)}")
        if self.coeffs[0].is_zero():
            raise ValueError("constant coefficient must be nonzero (reducible otherwise)")

    @property
    def nvars(self) -> int:
        return self.coeffs[0].nvars


CompanionMatrix = list  # m x m nested list of RationalFunc


def perfect_root(h: MultiPoly, k: int) -> MultiPoly | None:
    """Return ``r`` with ``r**k == h`` when one exists over Q (up to the monic scaling).

    ``h`` is first made monic in its leading term; a real k-th root of a monic
    rational polynomial has rational coefficients, so the term-by-term
    extraction below is complete.  Returns the root of the monic ``h``.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if h.is_zero():
        return MultiPoly.zero(h.nvars)
    lt_e, lt_c = h.leading_term()
    h = h * (1 / lt_c)
    if any(e % k for e in lt_e):
        return None
    if k == 1:
        return h
    n = h.nvars
    r0_e = tuple(e // k for e in lt_e)
    r = MultiPoly({r0_e: 1}, n)
    lead = MultiPoly({r0_e: 1}, n) ** (k - 1) * k
    lead_e, lead_c = lead.leading_term()
    # each step fixes one more term of r; r has at most as many terms as h^(1/k) can
    for _ in range(len(h) * (total_degree(h) + 1) + 1):
        res = h - r**k
        if res.is_zero():
            return r
        e, c = res.leading_term()
        qe = tuple(a - b for a, b in zip(e, lead_e))
        if any(v < 0 for v in qe) or sum(e) < sum(lead_e):
            return None
        cand = r + MultiPoly({qe: c / lead_c}, n)
        if (h - cand**k).is_zero():
            return cand
        # the new term must be strictly smaller than the leading root term
        if sum(qe) > sum(r0_e) or (sum(qe) == sum(r0_e) and qe >= r0_e):
            return None
        r = cand
    return None


def _is_perfect_power(h: MultiPoly, two_m: int) -> bool:
    return any(perfect_root(h, k) is not None for k in range(2, two_m + 1) if two_m % k == 0)


def minpoly_of_root_body(h: MultiPoly, two_m: int) -> MinPolyData:
    """Minimal polynomial ``lambda^m - 1/h`` of ``zeta = h^(-1/m)`` for the body ``h <= 1``."""
    if two_m <= 0 or two_m % 2:
        raise ValueError("two_m must be a positive even integer")
    if h.is_zero() or not is_homogeneous(h, two_m):
        raise ValueError(f"h must be homogeneous of degree {two_m}")
    if _is_perfect_power(h, two_m):
        raise PerfectPowerError("h is a perfect power")
    m = two_m // 2
    n = h.nvars
    zero = RationalFunc(MultiPoly.zero(n))
    mu0 = -RationalFunc(MultiPoly.constant(1, n), h)
    return MinPolyData(m, (mu0,) + (zero,) * (m - 1), base_h=h, two_m=two_m)


def companion(mp: MinPolyData) -> CompanionMatrix:
    """Ones on the subdiagonal, ``-coeffs`` in the last column."""
    m, n = mp.m, mp.nvars
    zero = RationalFunc(MultiPoly.zero(n))
    one = RationalFunc(MultiPoly.constant(1, n))
    C = [[zero for _ in range(m)] for _ in range(m)]
    for i in range(1, m):
        C[i][i - 1] = one
    for i in range(m):
        C[i][m - 1] = -mp.coeffs[i]
    return C


def mat_mul(A: CompanionMatrix, B: CompanionMatrix) -> CompanionMatrix:
    m, n = len(A), len(B[0])
    nv = A[0][0].nvars
    out = []
    for i in range(m):
        row = []
        for j in range(n):
            acc = RationalFunc(MultiPoly.zero(nv))
            for k in range(len(B)):
                if A[i][k].is_zero() or B[k][j].is_zero():
                    continue
                acc = acc + A[i][k] * B[k][j]
            row.append(acc)
        out.append(row)
    return out


def mat_pow(C: CompanionMatrix, s: int) -> CompanionMatrix:
    if s < 1:
        raise ValueError("s must be positive")
    out = C
    for _ in range(s - 1):
        out = mat_mul(out, C)
    return out


def det(M: CompanionMatrix) -> RationalFunc:
    """Cofactor expansion along the first row."""
    n = len(M)
    if n == 1:
        return M[0][0]
    nv = M[0][0].nvars
    acc = RationalFunc(MultiPoly.zero(nv))
    for j in range(n):
        if M[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * det(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def charpoly(M: CompanionMatrix) -> list[RationalFunc]:
    """Coefficients ``c_0..c_{m-1}`` of the monic ``det(lambda I - M)``.

    The coefficient of ``lambda^(m-j)`` is ``(-1)^j`` times the sum of the
    principal ``j x j`` minors.
    """
    m = len(M)
    nv = M[0][0].nvars
    coeffs = [RationalFunc(MultiPoly.zero(nv)) for _ in range(m)]
    for j in range(1, m + 1):
        acc = RationalFunc(MultiPoly.zero(nv))
        for idx in combinations(range(m), j):
            acc = acc + det([[M[a][b] for b in idx] for a in idx])
        coeffs[m - j] = acc if j % 2 == 0 else -acc
    return coeffs


def charpoly_of_power(C: CompanionMatrix, s: int) -> list[RationalFunc]:
    """Characteristic polynomial coefficients of ``C**s`` (constant term first)."""
    if s < 1:
        raise ValueError("s must be positive")
    if len(C) > MAX_DEGREE:
        raise ValueError(f"matrix size capped at {MAX_DEGREE}")
    return charpoly(mat_pow(C, s))


def power_sums(mp: MinPolyData, s_max: int) -> list[RationalFunc]:
    """Power sums ``p_1..p_{s_max}`` of the roots of ``mu`` via Newton's identities."""
    m, a = mp.m, mp.coeffs
    nv = mp.nvars
    p: list[RationalFunc] = []
    for s in range(1, s_max + 1):
        acc = RationalFunc(MultiPoly.zero(nv))
        for j in range(1, min(s - 1, m) + 1):
            acc = acc + a[m - j] * p[s - j - 1]
        if s <= m:
            acc = acc + a[m - s] * s
        p.append(-acc)
    return p


def _matrix_vp(M: CompanionMatrix, p: MultiPoly):
    return min((vp(e, p) for row in M for e in row), default=INFINITY)


def valuation_growth(C: CompanionMatrix, p: MultiPoly, s_list: Sequence[int]) -> list:
    """Min-entry p-adic valuations of ``C**s`` for each ``s`` in ``s_list``."""
    if any(s < 1 or s > MAX_POWER for s in s_list):
        raise ValueError(f"powers must lie in 1..{MAX_POWER}")
    powers = {}
    cur, cur_s = C, 1
    for s in sorted(set(s_list)):
        while cur_s < s:
            cur, cur_s = mat_mul(cur, C), cur_s + 1
        powers[s] = cur
    return [_matrix_vp(powers[s], p) for s in s_list]


def growth_slope(values: Sequence[int], s_list: Sequence[int]) -> Fraction:
    """Least-squares slope of ``values`` against ``s`` in exact arithmetic."""
    n = len(s_list)
    if n < 2:
        raise ValueError("need at least two points")
    sx = sum(Fraction(s) for s in s_list)
    sy = sum(Fraction(v) for v in values)
    sxx = sum(Fraction(s) ** 2 for s in s_list)
    sxy = sum(Fraction(s) * v for s, v in zip(s_list, values))
    return (n * sxy - sx * sy) / (n * sxx - sx * sx)


def coeff_homogeneity_check(mp: MinPolyData) -> bool:
    """Each nonzero ``mu_{m-i}`` is homogeneous of degree ``-2i``."""
    for i in range(1, mp.m + 1):
        c = mp.coeffs[mp.m - i]
        if c.is_zero():
            continue
        if not (is_homogeneous(c.num) and is_homogeneous(c.den)):
            return False
        if total_degree(c.num) - total_degree(c.den) != -2 * i:
            return False
    return True


def structural_form_check(mp: MinPolyData, r=1) -> MultiPoly:
    """Return the homogeneous degree-``2m`` polynomial ``(r^m mu_0)^-1``.

    The overall sign is a unit and is fixed so the leading coefficient is
    positive.  Raises ``ValueError`` when the reciprocal is not a polynomial,
    not homogeneous of degree ``2m``, or is a perfect power.
    """
    r = Fraction(r)
    if r <= 0:
        raise ValueError("r must be positive")
    m = mp.m
    scaled = mp.coeffs[0] * (r**m)
    recip = scaled.inverse()
    if not recip.is_polynomial():
        q = divide_exact(recip.num, recip.den)
        if q is None:
            raise ValueError("(r^m mu_0)^-1 is not a polynomial")
        P = q
    else:
        P = recip.as_poly()
    if P.leading_term()[1] < 0:
        P = -P
    if not is_homogeneous(P, 2 * m):
        raise ValueError(f"(r^m mu_0)^-1 is not homogeneous of degree {2 * m}")
    if _is_perfect_power(P, 2 * m):
        raise PerfectPowerError("(r^m mu_0)^-1 is a perfect power")
    return P
