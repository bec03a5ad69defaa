"""Valuations on the field of rational functions Q(x).

``vp`` is the order of divisibility by a (caller-asserted irreducible)
polynomial ``p``; ``v_inf`` is the degree valuation ``deg den - deg num``.
Both send zero to :data:`INFINITY`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from numbers import Rational
from typing import Sequence, Union

from .polyalg import MultiPoly, RationalFunc, as_rational, divide_exact, total_degree

__all__ = [
    "INFINITY",
    "Infinity",
    "ValuationValue",
    "vp",
    "v_inf",
    "poly_vp",
    "product_formula_check",
    "laplacian_valuation_drop",
]


@total_ordering
class Infinity:
    """The valuation of zero.  Larger than every integer; absorbs addition."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"

    def __str__(self) -> str:
        return "inf"

    def __eq__(self, other) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("valuation-infinity")

    def __lt__(self, other) -> bool:
        if other is self or isinstance(other, (int, Rational)):
            return False
        return NotImplemented

    def __gt__(self, other) -> bool:
        if other is self:
            return False
        if isinstance(other, (int, Rational)):
            return True
        return NotImplemented

    def __add__(self, other):
        if other is self or isinstance(other, (int, Rational)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        raise ArithmeticError("-INFINITY is not a valuation value")

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("INFINITY - INFINITY is undefined")
        if isinstance(other, (int, Rational)):
            return self
        return NotImplemented

    def __rsub__(self, other):
        raise ArithmeticError("finite - INFINITY is not a valuation value")


INFINITY = Infinity()

ValuationValue = Union[int, Infinity]


def _check_p(p: MultiPoly) -> None:
    if p.is_zero() or p.is_constant():
        raise ValueError("p must be a nonconstant polynomial")


def poly_vp(f: MultiPoly, p: MultiPoly) -> ValuationValue:
    """Largest ``nu`` with ``p**nu | f``."""
    _check_p(p)
    if f.is_zero():
        return INFINITY
    nu = 0
    while True:
        q = divide_exact(f, p)
        if q is None:
            return nu
        f, nu = q, nu + 1


def vp(f, p: MultiPoly) -> ValuationValue:
    """p-adic valuation of a polynomial or rational function."""
    _check_p(p)
    f = as_rational(f, p.nvars)
    if f.is_zero():
        return INFINITY
    return poly_vp(f.num, p) - poly_vp(f.den, p)


def v_inf(f, nvars: int | None = None) -> ValuationValue:
    """Degree valuation ``deg(den) - deg(num)``."""
    if isinstance(f, (int, Rational)):
        return INFINITY if f == 0 else 0
    f = as_rational(f, nvars)
    if f.is_zero():
        return INFINITY
    return total_degree(f.den) - total_degree(f.num)


def product_formula_check(u, factors: Sequence[tuple[MultiPoly, int]], nvars: int | None = None) -> bool:
    """Rebuild ``f = u * prod p_i**nu_i`` and test both valuation identities.

    Checks ``v_inf(f) == -sum nu_i deg p_i`` and ``vp(f, p_i) == nu_i`` for
    every factor.  Exponents may be negative.  The ``p_i`` are assumed to be
    pairwise non-associate irreducibles.
    """
    u = Fraction(u)
    if u == 0:
        raise ValueError("the unit u must be nonzero")
    if factors:
        nvars = factors[0][0].nvars
    elif nvars is None:
        nvars = 1
    num = MultiPoly.constant(u, nvars)
    den = MultiPoly.constant(1, nvars)
    expected_inf = 0
    for p, nu in factors:
        _check_p(p)
        if nu >= 0:
            num = num * p**nu
        else:
            den = den * p ** (-nu)
        expected_inf -= nu * total_degree(p)
    f = RationalFunc(num, den)
    if v_inf(f) != expected_inf:
        return False
    return all(vp(f, p) == nu for p, nu in factors)


def laplacian_valuation_drop(f, p: MultiPoly) -> int:
    """``vp(f) - vp(Lap f)``; 2 for generic ``p`` once ``vp(f)`` is outside {0, 1}."""
    _check_p(p)
    f = as_rational(f, p.nvars)
    if f.is_zero():
        raise ValueError("f must be nonzero")
    lap = f.laplacian()
    if lap.is_zero():
        raise ValueError("Laplacian of f vanishes; drop undefined")
    return vp(f, p) - vp(lap, p)
