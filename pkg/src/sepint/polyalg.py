"""Exact sparse multivariate polynomials and rational functions over Q.

Polynomials are stored as a mapping from exponent tuples to
:class:`fractions.Fraction` coefficients.  Terms are iterated in graded
lexicographic order (largest first), which is also the order used by
:func:`divide_exact`.

The text format is a sum of terms ``c * x0^a0 * x1^a1 ...`` where ``c`` is an
exact rational written ``p/q``.  Variable names default to ``x0, x1, ...``;
other names can be passed to :meth:`MultiPoly.parse` and
:meth:`MultiPoly.to_text`.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "MultiPoly",
    "RationalFunc",
    "divide_exact",
    "grad_dot",
    "laplacian",
    "partial",
    "total_degree",
    "is_homogeneous",
    "PolyParseError",
]


class PolyParseError(ValueError):
    """Raised when polynomial text cannot be parsed."""


def _grlex_key(exps: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    return (sum(exps), exps)


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c.strip())
    raise TypeError(f"exact rational coefficient required, got {type(c).__name__}")


class MultiPoly:
    """Immutable sparse polynomial in ``nvars`` variables with rational coefficients.

    Parameters
    ----------
    terms : mapping
        Exponent tuple -> coefficient.  Zero coefficients are dropped.
    nvars : int
        Number of variables.  Every exponent tuple must have this length.
    """

    __slots__ = ("_terms", "_nvars", "_hash")

    def __init__(self, terms: Mapping[tuple[int, ...], object] | None = None, nvars: int = 1):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise ValueError(f"exponent {exps} does not have length {nvars}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = _as_fraction(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if not clean[exps]:
                    del clean[exps]
        self._terms = dict(sorted(clean.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True))
        self._nvars = nvars
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, nvars: int) -> "MultiPoly":
        # trusted constructor: terms already nonzero Fractions with valid keys
        obj = cls.__new__(cls)
        obj._terms = dict(sorted(terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True))
        obj._nvars = nvars
        obj._hash = None
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls._raw({}, nvars)

    @classmethod
    def constant(cls, c, nvars: int) -> "MultiPoly":
        c = _as_fraction(c)
        return cls._raw({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def variable(cls, i: int, nvars: int) -> "MultiPoly":
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        exps = [0] * nvars
        exps[i] = 1
        return cls._raw({tuple(exps): Fraction(1)}, nvars)

    @classmethod
    def variables(cls, nvars: int) -> tuple["MultiPoly", ...]:
        return tuple(cls.variable(i, nvars) for i in range(nvars))

    # -- basic properties -------------------------------------------------

    @property
    def nvars(self) -> int:
        return self._nvars

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self._nvars, Fraction(0))

    def leading_term(self) -> tuple[tuple[int, ...], Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return next(iter(self._terms.items()))

    def total_degree(self) -> int:
        return total_degree(self)

    def is_homogeneous(self, deg: int | None = None) -> bool:
        return is_homogeneous(self, deg)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other._nvars != self._nvars:
                raise ValueError(f"dimension mismatch: {self._nvars} vs {other._nvars} variables")
            return other
        if isinstance(other, (int, Rational)):
            return MultiPoly.constant(other, self._nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly._raw(out, self._nvars)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({e: -c for e, c in self._terms.items()}, self._nvars)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, MultiPoly):
            c = Fraction(other)
            if not c:
                return MultiPoly.zero(self._nvars)
            return MultiPoly._raw({e: v * c for e, v in self._terms.items()}, self._nvars)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly._raw({e: c for e, c in out.items() if c}, self._nvars)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers need a non-negative integer exponent")
        result = MultiPoly.constant(1, self._nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, MultiPoly):
            if not other:
                raise ZeroDivisionError("division of polynomial by zero")
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, MultiPoly):
            return RationalFunc(self, other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self._nvars == other._nvars and self._terms == other._terms
        if isinstance(other, (int, Rational)):
            return self == MultiPoly.constant(other, self._nvars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._nvars, frozenset(self._terms.items())))
        return self._hash

    # -- calculus and evaluation -----------------------------------------

    def partial(self, i: int) -> "MultiPoly":
        return partial(self, i)

    def __call__(self, *point):
        """Evaluate exactly at rational arguments (or at a single sequence)."""
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = tuple(point[0])
        if len(point) != self._nvars:
            raise ValueError(f"expected {self._nvars} coordinates, got {len(point)}")
        total = Fraction(0) if all(isinstance(p, (int, Rational)) for p in point) else 0.0
        for e, c in self._terms.items():
            term = c
            for x, a in zip(point, e):
                if a:
                    term = term * x**a
            total = total + term
        return total

    def compose(self, substitutions: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute polynomial ``substitutions[i]`` for variable ``i``."""
        if len(substitutions) != self._nvars:
            raise ValueError("need one substitution per variable")
        if not substitutions:
            return self
        n = substitutions[0].nvars
        powers: list[dict[int, MultiPoly]] = [{0: MultiPoly.constant(1, n)} for _ in substitutions]

        def pw(i, a):
            cache = powers[i]
            if a not in cache:
                cache[a] = pw(i, a - 1) * substitutions[i]
            return cache[a]

        out = MultiPoly.zero(n)
        for e, c in self._terms.items():
            term = MultiPoly.constant(c, n)
            for i, a in enumerate(e):
                if a:
                    term = term * pw(i, a)
            out = out + term
        return out

    def linear_change(self, matrix) -> "MultiPoly":
        """Return ``f(A x)`` for a square matrix ``A`` of exact rationals."""
        n = self._nvars
        xs = MultiPoly.variables(n)
        subs = []
        for row in matrix:
            if len(row) != n:
                raise ValueError("matrix must be square of size nvars")
            s = MultiPoly.zero(n)
            for a, x in zip(row, xs):
                s = s + x * _as_fraction(a)
            subs.append(s)
        return self.compose(subs)

    def to_numpy(self) -> tuple[np.ndarray, np.ndarray]:
        """Coefficients (float) and exponent matrix for vectorised evaluation."""
        if not self._terms:
            return np.zeros(0), np.zeros((0, self._nvars), dtype=int)
        exps = np.array(list(self._terms.keys()), dtype=int).reshape(len(self._terms), self._nvars)
        coefs = np.array([float(c) for c in self._terms.values()])
        return coefs, exps

    # -- text -------------------------------------------------------------

    def to_text(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"x{i}" for i in range(self._nvars)]
        if not self._terms:
            return "0"
        pieces = []
        for e, c in self._terms.items():
            factors = []
            for name, a in zip(names, e):
                if a == 1:
                    factors.append(name)
                elif a > 1:
                    factors.append(f"{name}^{a}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = str(mag) + "*" + "*".join(factors)
            pieces.append(("-" if c < 0 else "+", body))
        sign, body = pieces[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"MultiPoly({self.to_text()!r}, nvars={self._nvars})"

    @classmethod
    def parse(cls, text: str, nvars: int | None = None, names: Sequence[str] | None = None) -> "MultiPoly":
        """Parse the text format.

        With ``names`` given, only those identifiers are accepted and
        ``nvars = len(names)``.  Otherwise identifiers must look like ``x<i>``
        and ``nvars`` defaults to one more than the largest index seen.
        """
        return _parse(text, nvars, names)


_TERM_SPLIT = re.compile(r"(?<![\^*/])([+-])")
_FACTOR = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(?:(?:\^|\*\*)(\d+))?$")
_NUMBER = re.compile(r"^\d+(?:/\d+)?$")


def _parse(text: str, nvars: int | None, names: Sequence[str] | None) -> MultiPoly:
    s = re.sub(r"\s+", "", text)
    if not s:
        raise PolyParseError("empty polynomial text")
    s = s.replace("**", "^")
    index: dict[str, int] | None = None
    if names is not None:
        index = {n: i for i, n in enumerate(names)}
        nvars = len(names)
    # split into signed terms
    parts = _TERM_SPLIT.split(s)
    signed: list[tuple[int, str]] = []
    sign = 1
    if parts[0] == "":
        parts = parts[1:]
    else:
        parts = ["+"] + parts
    for i in range(0, len(parts), 2):
        sg, body = parts[i], parts[i + 1] if i + 1 < len(parts) else ""
        if not body:
            raise PolyParseError(f"dangling sign in {text!r}")
        sign = -1 if sg == "-" else 1
        signed.append((sign, body))
    raw_terms: list[tuple[Fraction, dict[int, int]]] = []
    max_idx = -1
    for sign, body in signed:
        coef = Fraction(sign)
        powers: dict[int, int] = {}
        for factor in body.split("*"):
            if not factor:
                raise PolyParseError(f"empty factor in {body!r}")
            if _NUMBER.match(factor):
                coef *= Fraction(factor)
                continue
            m = _FACTOR.match(factor)
            if not m:
                raise PolyParseError(f"cannot parse factor {factor!r}")
            name, power = m.group(1), int(m.group(2) or 1)
            if index is not None:
                if name not in index:
                    raise PolyParseError(f"unknown variable {name!r}")
                idx = index[name]
            else:
                vm = re.fullmatch(r"x(\d+)", name)
                if not vm:
                    raise PolyParseError(f"variable {name!r} is not of the form x<i>")
                idx = int(vm.group(1))
            max_idx = max(max_idx, idx)
            powers[idx] = powers.get(idx, 0) + power
        raw_terms.append((coef, powers))
    if nvars is None:
        nvars = max_idx + 1 if max_idx >= 0 else 1
    if max_idx >= nvars:
        raise PolyParseError(f"variable index {max_idx} exceeds nvars={nvars}")
    acc: dict[tuple[int, ...], Fraction] = {}
    for coef, powers in raw_terms:
        e = [0] * nvars
        for i, a in powers.items():
            e[i] = a
        key = tuple(e)
        acc[key] = acc.get(key, Fraction(0)) + coef
    return MultiPoly(acc, nvars)


# -- module-level operations ----------------------------------------------


def partial(f: MultiPoly, i: int) -> MultiPoly:
    """Formal partial derivative with respect to variable ``i``."""
    if not 0 <= i < f.nvars:
        raise IndexError(f"axis {i} out of range for {f.nvars} variables")
    out = {}
    for e, c in f.items():
        a = e[i]
        if a:
            ne = e[:i] + (a - 1,) + e[i + 1:]
            out[ne] = c * a
    return MultiPoly._raw(out, f.nvars)


def laplacian(f: MultiPoly) -> MultiPoly:
    out = MultiPoly.zero(f.nvars)
    for i in range(f.nvars):
        out = out + partial(partial(f, i), i)
    return out


def grad_dot(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Sum over i of d_i f * d_i g."""
    if f.nvars != g.nvars:
        raise ValueError(f"dimension mismatch: {f.nvars} vs {g.nvars} variables")
    out = MultiPoly.zero(f.nvars)
    for i in range(f.nvars):
        out = out + partial(f, i) * partial(g, i)
    return out


def total_degree(f: MultiPoly) -> int:
    if f.is_zero():
        raise ValueError("the zero polynomial has no total degree")
    return max(sum(e) for e, _ in f.items())


def is_homogeneous(f: MultiPoly, deg: int | None = None) -> bool:
    """True when every term has total degree ``deg`` (any common degree if None).

    The zero polynomial counts as homogeneous of every degree.
    """
    degs = {sum(e) for e, _ in f.items()}
    if not degs:
        return True
    if len(degs) > 1:
        return False
    return deg is None or degs.pop() == deg


def _monomial_quotient(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...] | None:
    q = tuple(x - y for x, y in zip(a, b))
    return None if any(v < 0 for v in q) else q


def divide_exact(f: MultiPoly, p: MultiPoly) -> MultiPoly | None:
    """Return ``q`` with ``f == p*q`` or ``None`` when ``p`` does not divide ``f``.

    Single-divisor multivariate division in graded lexicographic order.  For
    one divisor the remainder vanishes exactly when ``f`` lies in the ideal
    generated by ``p``.
    """
    if f.nvars != p.nvars:
        raise ValueError(f"dimension mismatch: {f.nvars} vs {p.nvars} variables")
    if p.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if f.is_zero():
        return MultiPoly.zero(f.nvars)
    lt_e, lt_c = p.leading_term()
    p_terms = list(p.items())
    rem = dict(f.items())
    quot: dict[tuple[int, ...], Fraction] = {}
    deg_p = sum(lt_e)
    while rem:
        e = max(rem, key=_grlex_key)
        # once the leading remainder term drops below deg(p) nothing divides
        if sum(e) < deg_p:
            return None
        qe = _monomial_quotient(e, lt_e)
        if qe is None:
            return None
        qc = rem[e] / lt_c
        quot[qe] = qc
        for pe, pc in p_terms:
            ne = tuple(a + b for a, b in zip(pe, qe))
            v = rem.get(ne, 0) - qc * pc
            if v:
                rem[ne] = v
            else:
                rem.pop(ne, None)
    return MultiPoly._raw(quot, f.nvars)


# -- rational functions ---------------------------------------------------


class RationalFunc:
    """Quotient ``num/den`` of polynomials, kept unreduced.

    Equality is cross-multiplication equality.  Only cheap simplifications are
    applied (constant denominators are absorbed, exact polynomial quotients are
    detected, denominators are made monic).
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None):
        if den is None:
            den = MultiPoly.constant(1, num.nvars)
        if isinstance(num, (int, Rational)):
            num = MultiPoly.constant(num, den.nvars)
        if isinstance(den, (int, Rational)):
            den = MultiPoly.constant(den, num.nvars)
        if num.nvars != den.nvars:
            raise ValueError("numerator and denominator dimensions differ")
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            den = MultiPoly.constant(1, num.nvars)
        elif den.is_constant():
            num = num * (1 / den.constant_term())
            den = MultiPoly.constant(1, num.nvars)
        else:
            q = divide_exact(num, den) if len(num) >= len(den) else None
            if q is not None:
                num, den = q, MultiPoly.constant(1, num.nvars)
            else:
                lc = den.leading_term()[1]
                if lc != 1:
                    num, den = num * (1 / lc), den * (1 / lc)
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "RationalFunc":
        return cls(p)

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> MultiPoly:
        if not self.den.is_constant():
            q = divide_exact(self.num, self.den)
            if q is None:
                raise ValueError("rational function is not a polynomial")
            return q
        return self.num * (1 / self.den.constant_term())

    def _coerce(self, other) -> "RationalFunc":
        if isinstance(other, RationalFunc):
            if other.nvars != self.nvars:
                raise ValueError("dimension mismatch")
            return other
        if isinstance(other, MultiPoly):
            return RationalFunc(other)
        if isinstance(other, (int, Rational)):
            return RationalFunc(MultiPoly.constant(other, self.nvars))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.num, self.den, other.num, other.den
        if b == d:
            return RationalFunc(a + c, b)
        q = divide_exact(d, b)
        if q is not None:
            return RationalFunc(a * q + c, d)
        q = divide_exact(b, d)
        if q is not None:
            return RationalFunc(a + c * q, b)
        return RationalFunc(a * d + c * b, b * d)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunc(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return RationalFunc(MultiPoly.zero(self.nvars))
        # cancel a denominator against the other numerator when it divides
        a, b, c, d = self.num, self.den, other.num, other.den
        if not d.is_constant():
            q = divide_exact(a, d)
            if q is not None:
                a, d = q, MultiPoly.constant(1, self.nvars)
        if not b.is_constant():
            q = divide_exact(c, b)
            if q is not None:
                c, b = q, MultiPoly.constant(1, self.nvars)
        return RationalFunc(a * c, b * d)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunc":
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse")
        return RationalFunc(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("integer exponent required")
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunc(self.num**n, self.den**n)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        raise TypeError("RationalFunc equality is by cross-multiplication; not hashable")

    def partial(self, i: int) -> "RationalFunc":
        n, d = self.num, self.den
        if d.is_constant():
            return RationalFunc(partial(n, i), d)
        return RationalFunc(partial(n, i) * d - n * partial(d, i), d * d)

    def laplacian(self) -> "RationalFunc":
        out = RationalFunc(MultiPoly.zero(self.nvars))
        for i in range(self.nvars):
            out = out + self.partial(i).partial(i)
        return out

    def grad_dot(self, other: "RationalFunc") -> "RationalFunc":
        other = self._coerce(other)
        out = RationalFunc(MultiPoly.zero(self.nvars))
        for i in range(self.nvars):
            out = out + self.partial(i) * other.partial(i)
        return out

    def to_text(self, names: Sequence[str] | None = None) -> str:
        if self.den.is_constant():
            return self.num.to_text(names)
        return f"({self.num.to_text(names)})/({self.den.to_text(names)})"

    def __repr__(self) -> str:
        return f"RationalFunc({self.to_text()!r})"


def as_rational(x, nvars: int | None = None) -> RationalFunc:
    """Coerce a polynomial, rational function or number to :class:`RationalFunc`."""
    if isinstance(x, RationalFunc):
        return x
    if isinstance(x, MultiPoly):
        return RationalFunc(x)
    if nvars is None:
        raise ValueError("nvars needed to lift a scalar")
    return RationalFunc(MultiPoly.constant(x, nvars))


def poly_sum(polys: Iterable[MultiPoly], nvars: int) -> MultiPoly:
    out = MultiPoly.zero(nvars)
    for p in polys:
        out = out + p
    return out
