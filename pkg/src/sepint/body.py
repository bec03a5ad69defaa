"""Origin-symmetric convex bodies described by their Minkowski functional.

Four models are provided: :class:`Ball`, :class:`Ellipsoid`,
:class:`PolyRoot` (``{h <= 1}`` for a positive even form ``h``) and
:class:`RadialPerturbation` (radial function ``1 + eps * phi``).  All
numerics are double precision and vectorised over a leading batch axis.

Fixtures serialise as ``key: value`` records, one per line (or separated by
``|`` when given inline)::

    model: ellipsoid
    id: ell-125
    d: 3
    Q: diag(1, 2, 5)
"""

from __future__ import annotations

import math
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy.optimize import minimize

from .polyalg import MultiPoly, is_homogeneous, total_degree

__all__ = [
    "Body",
    "Ball",
    "Ellipsoid",
    "PolyRoot",
    "RadialPerturbation",
    "FixtureError",
    "minkowski",
    "radial",
    "inradius",
    "convexity_probe",
    "parse_body",
    "load_body",
    "dump_body",
    "fixture",
    "sphere_sample",
]

UNIT_TOL = 1e-12


class FixtureError(ValueError):
    """Malformed body fixture."""


def _compile(poly: MultiPoly):
    coefs, exps = poly.to_numpy()
    return coefs, exps


def _eval_poly(coefs: np.ndarray, exps: np.ndarray, x: np.ndarray) -> np.ndarray:
    # x: (..., d) -> (...)
    out = np.zeros(x.shape[:-1])
    for c, e in zip(coefs, exps):
        term = np.full(x.shape[:-1], c)
        for i, a in enumerate(e):
            # repeated products keep (-x)^a == +-x^a exact; numpy's ** does not
            for _ in range(a):
                term = term * x[..., i]
        out = out + term
    return out


class Body:
    """Base class.  Subclasses implement :meth:`_gauge` on nonzero points."""

    d: int
    fixture_id: str = ""

    def minkowski(self, x) -> np.ndarray | float:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.d:
            raise ValueError(f"points must have {self.d} coordinates")
        scalar = x.ndim == 1
        x2 = np.atleast_2d(x)
        nrm = np.linalg.norm(x2, axis=-1)
        out = np.zeros(x2.shape[:-1])
        nz = nrm > 0
        if np.any(nz):
            out[nz] = self._gauge(x2[nz])
        return float(out[0]) if scalar else out.reshape(x.shape[:-1])

    def _gauge(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def radial(self, theta) -> np.ndarray | float:
        theta = np.asarray(theta, dtype=float)
        if np.any(np.abs(np.linalg.norm(np.atleast_2d(theta), axis=-1) - 1) > UNIT_TOL):
            raise ValueError("radial() expects unit vectors")
        return 1.0 / self.minkowski(theta)

    def ray_exit(self, c: np.ndarray, dirs: np.ndarray) -> np.ndarray | None:
        """Closed-form exit distances from interior ``c`` along ``dirs``, if available."""
        return None

    def inradius(self) -> float:
        return _sampled_inradius(self)

    def circumradius(self) -> float:
        return _sampled_circumradius(self)

    def to_record(self) -> dict[str, str]:
        raise NotImplementedError


class Ball(Body):
    def __init__(self, d: int, radius: float = 1.0, fixture_id: str = ""):
        if d < 1 or radius <= 0:
            raise ValueError("need d >= 1 and radius > 0")
        self.d, self.R, self.fixture_id = int(d), float(radius), fixture_id

    def _gauge(self, x):
        return np.linalg.norm(x, axis=-1) / self.R

    def ray_exit(self, c, dirs):
        # |c + r u| = R with |u| = 1
        b = dirs @ c
        cc = c @ c - self.R**2
        return -b + np.sqrt(b * b - cc)

    def inradius(self):
        return self.R

    def circumradius(self):
        return self.R

    def to_record(self):
        return {"model": "ball", "id": self.fixture_id, "d": str(self.d), "radius": repr(self.R)}

    def __repr__(self):
        return f"Ball(d={self.d}, radius={self.R})"


class Ellipsoid(Body):
    """``{x : x^T Q x <= 1}`` for a symmetric positive-definite rational ``Q``."""

    def __init__(self, Q, fixture_id: str = ""):
        Qx = [[Fraction(v) for v in row] for row in Q]
        d = len(Qx)
        if any(len(row) != d for row in Qx):
            raise ValueError("Q must be square")
        if any(Qx[i][j] != Qx[j][i] for i in range(d) for j in range(d)):
            raise ValueError("Q must be symmetric")
        self.Q_exact = Qx
        self.Q = np.array([[float(v) for v in row] for row in Qx])
        evals = np.linalg.eigvalsh(self.Q)
        if evals.min() <= 0:
            raise ValueError("Q must be positive definite")
        self.d, self.fixture_id = d, fixture_id
        self._evals = evals

    def _gauge(self, x):
        return np.sqrt(np.einsum("...i,ij,...j->...", x, self.Q, x))

    def ray_exit(self, c, dirs):
        a = np.einsum("ni,ij,nj->n", dirs, self.Q, dirs)
        b = dirs @ (self.Q @ c)
        cc = c @ self.Q @ c - 1.0
        return (-b + np.sqrt(b * b - a * cc)) / a

    def inradius(self):
        return float(1.0 / math.sqrt(self._evals.max()))

    def circumradius(self):
        return float(1.0 / math.sqrt(self._evals.min()))

    def to_record(self):
        rows = "; ".join(", ".join(str(v) for v in row) for row in self.Q_exact)
        return {"model": "ellipsoid", "id": self.fixture_id, "d": str(self.d), "Q": rows}

    def __repr__(self):
        return f"Ellipsoid(d={self.d})"


class PolyRoot(Body):
    """``{x : h(x) <= 1}`` with ``h`` a positive-definite form of even degree ``2m``."""

    def __init__(self, h: MultiPoly, fixture_id: str = ""):
        if h.is_zero() or not is_homogeneous(h):
            raise ValueError("h must be a nonzero homogeneous polynomial")
        deg = total_degree(h)
        if deg % 2:
            raise ValueError("h must have even degree")
        self.h, self.d, self.two_m = h, h.nvars, deg
        self.fixture_id = fixture_id
        self._coefs, self._exps = _compile(h)

    def _gauge(self, x):
        vals = _eval_poly(self._coefs, self._exps, x)
        if np.any(vals <= 0):
            raise ValueError("h is not positive away from the origin")
        return vals ** (1.0 / self.two_m)

    def to_record(self):
        return {"model": "polyroot", "id": self.fixture_id, "d": str(self.d), "h": self.h.to_text()}

    def __repr__(self):
        return f"PolyRoot(h={self.h.to_text()!r})"


class RadialPerturbation(Body):
    """Star body with radial function ``1 + eps * phi(theta)`` on the unit sphere.

    ``phi`` is an even polynomial evaluated at unit vectors.  Convexity is not
    automatic; see :func:`convexity_probe`.
    """

    def __init__(self, phi: MultiPoly, eps: float, fixture_id: str = ""):
        if eps < 0:
            raise ValueError("eps must be non-negative")
        if any(sum(e) % 2 for e, _ in phi.items()):
            raise ValueError("phi must be even")
        self.phi, self.eps, self.d = phi, float(eps), phi.nvars
        self.fixture_id = fixture_id
        self._coefs, self._exps = _compile(phi)

    def _rho(self, theta):
        rho = 1.0 + self.eps * _eval_poly(self._coefs, self._exps, theta)
        if np.any(rho <= 0):
            raise ValueError("radial function must stay positive")
        return rho

    def _gauge(self, x):
        r = np.linalg.norm(x, axis=-1)
        return r / self._rho(x / r[..., None])

    def to_record(self):
        return {
            "model": "radial",
            "id": self.fixture_id,
            "d": str(self.d),
            "phi": self.phi.to_text(),
            "eps": repr(self.eps),
        }

    def __repr__(self):
        return f"RadialPerturbation(eps={self.eps}, phi={self.phi.to_text()!r})"


# -- functional interface ----------------------------------------------------


def minkowski(b: Body, x):
    return b.minkowski(x)


def radial(b: Body, theta):
    return b.radial(theta)


def inradius(b: Body) -> float:
    """Largest ``r`` with ``B(r)`` inside ``b``; exact for balls and ellipsoids."""
    return b.inradius()


def sphere_sample(d: int, n: int) -> np.ndarray:
    """Deterministic, roughly uniform points on the sphere (``n`` rows)."""
    if d == 1:
        return np.array([[1.0], [-1.0]])
    if d == 2:
        a = np.linspace(0, 2 * np.pi, n, endpoint=False)
        return np.stack([np.cos(a), np.sin(a)], axis=1)
    if d == 3:
        i = np.arange(n) + 0.5
        z = 1 - 2 * i / n
        phi = np.pi * (3 - math.sqrt(5)) * i
        r = np.sqrt(1 - z * z)
        return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)
    g = np.random.default_rng(20240617).standard_normal((n, d))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _polish(fun, starts: np.ndarray) -> float:
    best = np.inf
    for s in starts:
        res = minimize(lambda y: fun(y / np.linalg.norm(y)), s, method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 4000})
        best = min(best, float(res.fun), float(fun(s)))
    return best


def _sampled_inradius(b: Body, n: int = 20000) -> float:
    pts = sphere_sample(b.d, n)
    vals = 1.0 / b.minkowski(pts)
    order = np.argsort(vals)[:8]
    return _polish(lambda y: 1.0 / b.minkowski(y), pts[order])


def _sampled_circumradius(b: Body, n: int = 20000) -> float:
    pts = sphere_sample(b.d, n)
    vals = b.minkowski(pts)
    order = np.argsort(vals)[:8]
    return 1.0 / _polish(lambda y: b.minkowski(y), pts[order])


def convexity_probe(b: Body, n_samples: int = 10_000, seed: int = 0) -> bool:
    """Midpoint test ``||(x+y)/2|| <= (||x|| + ||y||)/2 + 1e-10`` on random pairs.

    Half of the pairs are boundary points in nearby directions, where
    concavities of a star body show up first.
    """
    rng = np.random.default_rng(seed)
    d = b.d
    n1 = n_samples // 2
    x = rng.standard_normal((n1, d)) * rng.uniform(0.1, 2.0, (n1, 1))
    y = rng.standard_normal((n1, d)) * rng.uniform(0.1, 2.0, (n1, 1))
    n2 = n_samples - n1
    u = rng.standard_normal((n2, d))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    v = u + rng.uniform(0.01, 0.5, (n2, 1)) * rng.standard_normal((n2, d))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    x = np.concatenate([x, u / b.minkowski(u)[:, None]])
    y = np.concatenate([y, v / b.minkowski(v)[:, None]])
    lhs = b.minkowski(0.5 * (x + y))
    rhs = 0.5 * (b.minkowski(x) + b.minkowski(y)) + 1e-10
    return bool(np.all(lhs <= rhs))


# -- fixtures ----------------------------------------------------------------


def _parse_matrix(text: str, d: int | None) -> list[list[Fraction]]:
    t = text.strip()
    if t.startswith("diag(") and t.endswith(")"):
        vals = [Fraction(v.strip()) for v in t[5:-1].split(",")]
        n = len(vals)
        return [[vals[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    rows = [[Fraction(v.strip()) for v in row.split(",")] for row in t.split(";") if row.strip()]
    return rows


def parse_body(text: str) -> Body:
    """Build a body from a fixture record (file contents or ``|``-separated inline form)."""
    record: dict[str, str] = {}
    lines = text.replace("|", "\n").splitlines()
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise FixtureError(f"expected 'key: value', got {line!r}")
        key, value = line.split(":", 1)
        record[key.strip().lower()] = value.strip()
    try:
        model = record["model"].lower()
        fid = record.get("id", "")
        if model == "ball":
            return Ball(int(record["d"]), float(record.get("radius", "1")), fid)
        if model == "ellipsoid":
            Q = _parse_matrix(record["q"], None)
            if "d" in record and int(record["d"]) != len(Q):
                raise FixtureError("d does not match Q")
            return Ellipsoid(Q, fid)
        if model == "polyroot":
            d = int(record["d"]) if "d" in record else None
            return PolyRoot(MultiPoly.parse(record["h"], nvars=d), fid)
        if model == "radial":
            d = int(record["d"]) if "d" in record else None
            return RadialPerturbation(MultiPoly.parse(record["phi"], nvars=d), float(record["eps"]), fid)
    except FixtureError:
        raise
    except (KeyError, ValueError, ZeroDivisionError) as exc:
        raise FixtureError(f"bad fixture: {exc}") from exc
    raise FixtureError(f"unknown model {record.get('model')!r}")


def load_body(path) -> Body:
    return parse_body(Path(path).read_text())


def dump_body(b: Body) -> str:
    return "".join(f"{k}: {v}\n" for k, v in b.to_record().items() if v != "")


_FIXTURES = Path(__file__).with_name("data") / "fixtures"


def fixture(name: str) -> Body:
    """Load a shipped fixture by name (``ball3``, ``ellipsoid125``, ``l4ball3``, ...)."""
    return load_body(_FIXTURES / f"{name}.body")
