"""Differential calculus of powers.

Jet polynomials express derivatives of ``f**m`` through the jets
``u_beta = d^beta f`` with coefficients that are polynomials in a formal
exponent ``m``:

    d^alpha (f**m) = Q_alpha(m; u) * f**(m - |alpha|)
    Laplacian^i (f**m) = Qtilde_i(m; u) * f**(m - 2 i)

The module also hosts the Laplacian of ``g * h**nu`` written as a coefficient
times ``h**nu`` (the graded Laplacian), the grading check built on it, and the
test ``p | grad p . grad p``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from pathlib import Path
from typing import Iterator, Sequence

from .polyalg import (
    MultiPoly,
    RationalFunc,
    as_rational,
    divide_exact,
    grad_dot,
    laplacian,
    partial,
)

__all__ = [
    "JetPoly",
    "GradedElement",
    "q_polynomial",
    "q_tilde",
    "substitute_jets",
    "graded_laplacian",
    "grading_preserved",
    "dual_quadric_divisible",
    "load_octic",
]

# A jet monomial is a sorted tuple of (beta, power) pairs; beta is a multi-index.
JetMonomial = tuple[tuple[tuple[int, ...], int], ...]


def _mono_mul(a: JetMonomial, b: JetMonomial) -> JetMonomial:
    acc = dict(a)
    for beta, e in b:
        acc[beta] = acc.get(beta, 0) + e
    return tuple(sorted(acc.items()))


class JetPoly:
    """Polynomial in jet variables ``u_beta`` with coefficients in ``Q[m]``.

    Stored as ``{(jet_monomial, m_power): Fraction}``.  ``dim`` is the length
    of every multi-index ``beta``.
    """

    __slots__ = ("terms", "dim")

    def __init__(self, terms: dict[tuple[JetMonomial, int], Fraction], dim: int):
        self.terms = {k: Fraction(v) for k, v in terms.items() if v}
        self.dim = dim

    @classmethod
    def one(cls, dim: int) -> "JetPoly":
        return cls({((), 0): Fraction(1)}, dim)

    @classmethod
    def jet(cls, beta: Sequence[int]) -> "JetPoly":
        beta = tuple(beta)
        return cls({(((beta, 1),), 0): Fraction(1)}, len(beta))

    @classmethod
    def m(cls, dim: int) -> "JetPoly":
        return cls({((), 1): Fraction(1)}, dim)

    def __add__(self, other: "JetPoly") -> "JetPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return JetPoly(out, self.dim)

    def __neg__(self) -> "JetPoly":
        return JetPoly({k: -v for k, v in self.terms.items()}, self.dim)

    def __sub__(self, other: "JetPoly") -> "JetPoly":
        return self + (-other)

    def __mul__(self, other) -> "JetPoly":
        if isinstance(other, (int, Rational)):
            return JetPoly({k: v * other for k, v in self.terms.items()}, self.dim)
        out: dict[tuple[JetMonomial, int], Fraction] = {}
        for (m1, k1), v1 in self.terms.items():
            for (m2, k2), v2 in other.terms.items():
                key = (_mono_mul(m1, m2), k1 + k2)
                out[key] = out.get(key, 0) + v1 * v2
        return JetPoly(out, self.dim)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, JetPoly):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __repr__(self) -> str:
        return f"JetPoly({self.to_text()})"

    def shift_m(self, c) -> "JetPoly":
        """Multiply by ``(m - c)``."""
        return self * (JetPoly.m(self.dim) + JetPoly.one(self.dim) * (-Fraction(c)))

    def d(self, i: int) -> "JetPoly":
        """Total derivative along axis ``i``: ``u_beta -> u_{beta + e_i}``."""
        out: dict[tuple[JetMonomial, int], Fraction] = {}
        for (mono, k), v in self.terms.items():
            for idx, (beta, e) in enumerate(mono):
                rest = dict(mono)
                if e == 1:
                    del rest[beta]
                else:
                    rest[beta] = e - 1
                nb = beta[:i] + (beta[i] + 1,) + beta[i + 1:]
                rest[nb] = rest.get(nb, 0) + 1
                key = (tuple(sorted(rest.items())), k)
                out[key] = out.get(key, 0) + v * e
        return JetPoly(out, self.dim)

    def m_degree(self) -> int:
        return max((k for (_, k) in self.terms), default=0)

    def coeff_of_m(self, k: int) -> "JetPoly":
        """The jet polynomial multiplying ``m**k``."""
        return JetPoly({(mono, 0): v for (mono, kk), v in self.terms.items() if kk == k}, self.dim)

    def jets(self) -> set[tuple[int, ...]]:
        return {beta for (mono, _) in self.terms for beta, _ in mono}

    def specialize_m(self, m_value) -> "JetPoly":
        m_value = Fraction(m_value)
        out: dict[tuple[JetMonomial, int], Fraction] = {}
        for (mono, k), v in self.terms.items():
            out[(mono, 0)] = out.get((mono, 0), 0) + v * m_value**k
        return JetPoly(out, self.dim)

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (mono, k), v in sorted(self.terms.items(), key=lambda kv: (-kv[0][1], kv[0][0])):
            fac = [f"m^{k}" if k > 1 else "m"] if k else []
            fac += [
                f"u{''.join(map(str, b))}" + (f"^{e}" if e > 1 else "")
                for b, e in mono
            ]
            parts.append(f"{v}" + ("*" + "*".join(fac) if fac else ""))
        return " + ".join(parts)


def _unit(i: int, dim: int) -> tuple[int, ...]:
    return tuple(1 if j == i else 0 for j in range(dim))


def _step(Q: JetPoly, i: int, order: int) -> JetPoly:
    """d_i (Q f^(m-order)) = step(Q) f^(m-order-1)."""
    u0 = JetPoly.jet((0,) * Q.dim)
    ui = JetPoly.jet(_unit(i, Q.dim))
    return u0 * Q.d(i) + (ui * Q).shift_m(order)


@lru_cache(maxsize=None)
def _q_cached(alpha: tuple[int, ...]) -> JetPoly:
    if not any(alpha):
        return JetPoly.one(len(alpha))
    # peel the last nonzero axis; order of peeling does not change the result
    i = max(j for j, a in enumerate(alpha) if a)
    prev = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:]
    return _step(_q_cached(prev), i, sum(prev))


def q_polynomial(alpha: Sequence[int]) -> JetPoly:
    """Jet polynomial ``Q_alpha`` with ``d^alpha f^m = Q_alpha f^(m-|alpha|)``.

    Built from ``Q_0 = 1`` by the product-rule recursion
    ``Q_{alpha+e_i} = u_0 d_i Q_alpha + (m - |alpha|) u_{e_i} Q_alpha``.
    """
    alpha = tuple(int(a) for a in alpha)
    if any(a < 0 for a in alpha):
        raise ValueError("multi-index entries must be non-negative")
    return _q_cached(alpha)


@lru_cache(maxsize=None)
def _q_tilde_cached(i: int, dim: int) -> JetPoly:
    Q = JetPoly.one(dim)
    order = 0
    for _ in range(i):
        acc = JetPoly({}, dim)
        for j in range(dim):
            acc = acc + _step(_step(Q, j, order), j, order + 1)
        Q, order = acc, order + 2
    return Q


def q_tilde(i: int, dim: int) -> JetPoly:
    """Jet polynomial with ``Laplacian^i f^m = Qtilde_i f^(m - 2i)`` in ``dim`` variables."""
    if i < 0:
        raise ValueError("i must be non-negative")
    return _q_tilde_cached(int(i), int(dim))


def _derivative(f: MultiPoly, beta: tuple[int, ...], cache: dict) -> MultiPoly:
    if beta in cache:
        return cache[beta]
    if not any(beta):
        cache[beta] = f
        return f
    i = max(j for j, a in enumerate(beta) if a)
    prev = beta[:i] + (beta[i] - 1,) + beta[i + 1:]
    out = partial(_derivative(f, prev, cache), i)
    cache[beta] = out
    return out


def substitute_jets(Q: JetPoly, f: MultiPoly, m_value) -> MultiPoly:
    """Evaluate ``Q`` at ``u_beta = d^beta f`` and ``m = m_value``.

    ``m_value`` may be any exact rational; the polynomial identity holds for
    every exponent, only the interpretation of ``f^(m - |alpha|)`` changes.
    """
    if Q.dim != f.nvars:
        raise ValueError(f"jet dimension {Q.dim} does not match {f.nvars} variables")
    mv = Fraction(m_value)
    cache: dict = {}
    out = MultiPoly.zero(f.nvars)
    for (mono, k), v in Q.terms.items():
        term = MultiPoly.constant(v * mv**k, f.nvars)
        if not term:
            continue
        for beta, e in mono:
            term = term * _derivative(f, beta, cache) ** e
        out = out + term
    return out


def multi_indices(dim: int, order: int) -> Iterator[tuple[int, ...]]:
    """All multi-indices of ``dim`` entries with ``|alpha| == order``."""
    if dim == 1:
        yield (order,)
        return
    for a in range(order, -1, -1):
        for rest in multi_indices(dim - 1, order - a):
            yield (a,) + rest


def gradient_power(alpha: Sequence[int]) -> JetPoly:
    """``(grad f)^alpha`` as a jet monomial."""
    dim = len(alpha)
    out = JetPoly.one(dim)
    for i, a in enumerate(alpha):
        for _ in range(a):
            out = out * JetPoly.jet(_unit(i, dim))
    return out


def gradient_norm_power(i: int, dim: int) -> JetPoly:
    """``(sum_j u_{e_j}^2)^i``."""
    sq = JetPoly({}, dim)
    for j in range(dim):
        u = JetPoly.jet(_unit(j, dim))
        sq = sq + u * u
    out = JetPoly.one(dim)
    for _ in range(i):
        out = out * sq
    return out


# -- graded Laplacian ------------------------------------------------------


def graded_laplacian(g, h: MultiPoly, nu) -> RationalFunc:
    """Coefficient ``R`` with ``Laplacian(g h^nu) = R h^nu``.

    ``R = Lap g + 2 nu (grad g . grad h)/h + nu g Lap h / h
    + nu (nu - 1) g (grad h . grad h)/h^2``.
    """
    if h.is_zero():
        raise ZeroDivisionError("h must be nonzero")
    g = as_rational(g, h.nvars)
    nu = Fraction(nu)
    H = RationalFunc(h)
    inv_h = H.inverse()
    gh = RationalFunc(grad_dot(h, h))
    out = g.laplacian()
    if nu:
        out = out + g.grad_dot(H) * inv_h * (2 * nu)
        out = out + g * RationalFunc(laplacian(h)) * inv_h * nu
        if nu != 1:
            out = out + g * gh * inv_h * inv_h * (nu * (nu - 1))
    return out


@dataclass(frozen=True)
class GradedElement:
    """``coeff * h^(grade/(2m))``, an element of the graded piece ``A_grade``.

    ``base`` is the polynomial ``h`` with ``zeta^(2m) = h``; that ``h`` is not a
    perfect power is the caller's responsibility.
    """

    coeff: RationalFunc
    grade: int
    base: MultiPoly
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be positive")
        object.__setattr__(self, "grade", self.grade % (2 * self.m))

    @property
    def nu(self) -> Fraction:
        return Fraction(self.grade, 2 * self.m)

    def laplacian(self) -> "GradedElement":
        return GradedElement(graded_laplacian(self.coeff, self.base, self.nu), self.grade, self.base, self.m)


def _laplacian_via_jets(g: RationalFunc, h: MultiPoly, nu: Fraction) -> list[RationalFunc]:
    """Expand Lap(g h^nu) as c0 h^nu + c1 h^(nu-1) + c2 h^(nu-2) through jet polynomials.

    Uses d_j h^nu = Q_{e_j}(nu) h^(nu-1) and Lap h^nu = Qtilde_1(nu) h^(nu-2);
    the product rule supplies the cross term.
    """
    d = h.nvars
    c0 = g.laplacian()
    c1 = RationalFunc(MultiPoly.zero(d))
    for j in range(d):
        dj = RationalFunc(substitute_jets(q_polynomial(_unit(j, d)), h, nu))
        c1 = c1 + g.partial(j) * dj * 2
    c2 = g * RationalFunc(substitute_jets(q_tilde(1, d), h, nu))
    return [c0, c1, c2]


def grading_preserved(g, h: MultiPoly, m: int, i: int) -> bool:
    """Check that the Laplacian maps ``g h^(i/2m)`` into the same graded piece.

    The product-rule expansion through jet polynomials yields powers
    ``h^(nu)``, ``h^(nu-1)``, ``h^(nu-2)``; all share the residue ``i`` mod
    ``2m``, so the sum folds into one rational coefficient of ``h^nu``.  The
    check re-expands this way and compares with :func:`graded_laplacian`.
    """
    if m < 1:
        raise ValueError("m must be positive")
    g = as_rational(g, h.nvars)
    if g.is_zero():
        return True
    nu = Fraction(i % (2 * m), 2 * m)
    c0, c1, c2 = _laplacian_via_jets(g, h, nu)
    H = RationalFunc(h)
    folded = c0 + c1 / H + c2 / (H * H)
    return folded == graded_laplacian(g, h, nu)


def dual_quadric_divisible(p: MultiPoly) -> bool:
    """True iff ``p`` divides ``grad p . grad p``."""
    if p.is_zero():
        raise ValueError("p must be nonzero")
    return divide_exact(grad_dot(p, p), p) is not None


_DATA = Path(__file__).with_name("data")


def load_octic() -> MultiPoly:
    """The degree-8 quaternary form dual to the intersection of two quadrics."""
    return MultiPoly.parse((_DATA / "octic.txt").read_text(), nvars=4)
