"""Parallel section functions and isotropic volume functions.

For a frame ``xi`` (k orthonormal rows) the parallel section function
``A(t)`` is the (d-k)-volume of the body cut by the affine plane
``span(xi)^perp + t @ xi``.  The isotropic volume function ``V_H(t)`` is the
volume of the part of the body within distance ``t`` of ``H^perp``; it is
obtained by integrating ``A`` over the k-ball of radius ``t`` in polar
coordinates.

All quadrature is deterministic: Gauss-Legendre in the radius, equispaced
nodes on circles and product Gauss-Gegenbauer rules on higher spheres.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import beta as beta_fn
from scipy.special import betainc, roots_gegenbauer, roots_legendre

from .body import Body

__all__ = [
    "DEFAULT_RESOLUTION",
    "Frame",
    "ExpansionCoeffs",
    "sphere_rule",
    "ball_volume",
    "parallel_section",
    "isotropic_volume",
    "ball_volume_oracle",
    "ellipsoid_section_oracle",
    "ovall_coefficients",
    "derivative_probe",
]

DEFAULT_RESOLUTION = 24
ROOT_TOL = 1e-13


def ball_volume(k: int) -> float:
    """Volume of the unit ball in ``k`` dimensions."""
    return math.pi ** (k / 2) / math.gamma(k / 2 + 1)


class Frame:
    """``k`` orthonormal row vectors in ``R^d`` (``k < d``)."""

    def __init__(self, vectors, tol: float = 1e-12):
        v = np.atleast_2d(np.asarray(vectors, dtype=float))
        k, d = v.shape
        if not 1 <= k < d:
            raise ValueError(f"need 1 <= k < d, got k={k}, d={d}")
        if np.max(np.abs(v @ v.T - np.eye(k))) > tol:
            raise ValueError("frame is not orthonormal")
        self.vectors = v
        self.vectors.setflags(write=False)
        self.k, self.d = k, d
        # orthonormal basis of the complement, rows
        q, _ = np.linalg.qr(np.concatenate([v.T, np.eye(d)], axis=1))
        comp = q[:, k:d].T
        # re-orthogonalise against the frame for numerical hygiene
        comp = comp - (comp @ v.T) @ v
        comp, _ = np.linalg.qr(comp.T)
        self.complement = comp.T[: d - k]

    def digest(self) -> str:
        return hashlib.sha256(np.ascontiguousarray(self.vectors).tobytes()).hexdigest()[:16]

    def __repr__(self):
        return f"Frame(k={self.k}, d={self.d}, digest={self.digest()})"


def _as_frame(xi) -> Frame:
    return xi if isinstance(xi, Frame) else Frame(xi)


@lru_cache(maxsize=None)
def _sphere_rule_cached(n: int, resolution: int) -> tuple[np.ndarray, np.ndarray]:
    if n == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if n == 2:
        m = 2 * resolution
        a = 2 * np.pi * np.arange(m) / m
        return np.stack([np.cos(a), np.sin(a)], axis=1), np.full(m, 2 * np.pi / m)
    # last coordinate u carries weight (1-u^2)^((n-3)/2); the rest is a scaled S^(n-2)
    u, wu = roots_gegenbauer(resolution, (n - 2) / 2)
    sub_pts, sub_w = _sphere_rule_cached(n - 1, resolution)
    s = np.sqrt(1 - u * u)
    pts = np.concatenate(
        [
            (s[:, None, None] * sub_pts[None, :, :]).reshape(-1, n - 1),
            np.repeat(u, len(sub_w))[:, None],
        ],
        axis=1,
    )
    return pts, (wu[:, None] * sub_w[None, :]).ravel()


def sphere_rule(n: int, resolution: int = DEFAULT_RESOLUTION) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on ``S^(n-1)``; weights sum to the sphere's area."""
    if n < 1:
        raise ValueError("n must be positive")
    pts, w = _sphere_rule_cached(int(n), int(resolution))
    return pts.copy(), w.copy()


def _exit_distance(
    body: Body, c: np.ndarray, dirs: np.ndarray, tol: float = ROOT_TOL, method: str = "auto"
) -> np.ndarray:
    """Positive root ``rho`` of ``||c + rho * dir|| = 1`` for interior ``c``.

    ``c`` has shape (N, d), ``dirs`` (M, d); the result is (N, M).  Uniqueness
    of the root follows from convexity.

    ``method="auto"`` uses a body's closed form (quadrics) when it has one and
    the Illinois solver otherwise.  ``"illinois"`` and ``"bisect"`` bracket the
    root on ``[0, 2 R_circ]`` and refine it by the Illinois variant of regula
    falsi (superlinear, keeps the bracket) or by plain bisection.
    """
    if method not in ("auto", "illinois", "bisect"):
        raise ValueError(f"unknown root method {method!r}")
    N, M = len(c), len(dirs)
    if N == 0:
        return np.empty((0, M))
    if method == "auto":
        if body.ray_exit(c[0], dirs) is not None:
            return np.stack([body.ray_exit(ci, dirs) for ci in c])
        method = "illinois"

    def g(r):
        pts = c[:, None, :] + r[..., None] * dirs[None, :, :]
        return body.minkowski(pts.reshape(-1, body.d)).reshape(N, M) - 1.0

    lo = np.zeros((N, M))
    glo = np.broadcast_to(body.minkowski(c)[:, None] - 1.0, (N, M)).copy()
    hi = np.full((N, M), 2.0 * _circumradius(body))
    ghi = g(hi)
    for _ in range(60):
        bad = ghi < 0
        if not bad.any():
            break
        hi = np.where(bad, 2 * hi, hi)
        ghi = g(hi)
    else:
        raise RuntimeError("could not bracket the boundary")

    if method == "bisect":
        n_iter = max(1, int(math.ceil(math.log2(float(np.max(hi - lo)) / tol))))
        for _ in range(n_iter):
            mid = 0.5 * (lo + hi)
            gm = g(mid)
            below = gm < 0
            lo, glo = np.where(below, mid, lo), np.where(below, gm, glo)
            hi, ghi = np.where(below, hi, mid), np.where(below, ghi, gm)
        denom = ghi - glo
        frac = np.where(denom > 0, -glo / np.where(denom > 0, denom, 1.0), 0.5)
        return lo + np.clip(frac, 0.0, 1.0) * (hi - lo)

    x = lo.copy()
    side = np.zeros((N, M), dtype=np.int8)
    active = np.ones((N, M), dtype=bool)
    for _ in range(200):
        denom = np.where(active, ghi - glo, 1.0)
        x_new = np.where(active, np.clip((lo * ghi - hi * glo) / denom, lo, hi), x)
        gx = g(x_new)
        step = np.abs(x_new - x)
        x = x_new
        active &= ~((np.abs(gx) <= 1e-15) | (hi - lo <= tol) | (step <= 1e-3 * tol))
        if not active.any():
            break
        left = active & (gx < 0)
        right = active & ~(gx < 0)
        # Illinois: halve the stale endpoint's value when the same side moves twice
        ghi = np.where(left & (side == -1), 0.5 * ghi, ghi)
        glo = np.where(right & (side == 1), 0.5 * glo, glo)
        lo, glo = np.where(left, x, lo), np.where(left, gx, glo)
        hi, ghi = np.where(right, x, hi), np.where(right, gx, ghi)
        side = np.where(left, -1, np.where(right, 1, side)).astype(np.int8)
    else:
        raise RuntimeError("boundary search did not converge")
    return x


def _circumradius(body: Body) -> float:
    cached = body.__dict__.get("_circumradius")
    if cached is None:
        cached = body.__dict__["_circumradius"] = body.circumradius()
    return cached


def _section_volumes(
    body: Body, frame: Frame, shifts: np.ndarray, resolution: int, method: str = "auto"
) -> np.ndarray:
    """Slice volumes for a batch of shift vectors ``shifts`` (N, k)."""
    n = frame.d - frame.k
    centers = shifts @ frame.vectors
    inside = body.minkowski(centers) < 1.0
    out = np.zeros(len(shifts))
    if not inside.any():
        return out
    pts, w = sphere_rule(n, resolution)
    dirs = pts @ frame.complement
    rho = _exit_distance(body, centers[inside], dirs, method=method)
    out[inside] = (rho**n @ w) / n
    return out


def parallel_section(body: Body, xi, t, resolution: int = DEFAULT_RESOLUTION) -> float:
    """(d-k)-volume of the body cut by ``span(xi)^perp + sum_i t_i xi_i``.

    Zero when the plane misses the body's interior.
    """
    frame = _as_frame(xi)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if t.shape != (frame.k,):
        raise ValueError(f"t must have {frame.k} entries")
    return float(_section_volumes(body, frame, t[None, :], resolution)[0])


def isotropic_volume(body: Body, H, t, resolution: int = DEFAULT_RESOLUTION):
    """Volume of ``{x in K : dist(x, H^perp) <= t}``.

    Polar quadrature of the parallel section function over the k-ball of
    radius ``t``.  ``t`` may be a scalar or a 1-d array.
    """
    frame = _as_frame(H)
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(ts < 0):
        raise ValueError("t must be non-negative")
    k = frame.k
    x, wx = roots_legendre(resolution)
    r01 = 0.5 * (x + 1)
    w01 = 0.5 * wx
    dirs, wd = sphere_rule(k, resolution)
    # shifts: (len(ts), n_r, n_dirs, k)
    r = ts[:, None] * r01[None, :]
    shifts = r[:, :, None, None] * dirs[None, None, :, :]
    areas = _section_volumes(body, frame, shifts.reshape(-1, k), resolution)
    areas = areas.reshape(len(ts), len(r01), len(wd))
    radial = (areas @ wd) * r ** (k - 1)
    vals = (radial @ w01) * ts
    if np.ndim(t) == 0:
        return float(vals[0])
    return vals


def ball_volume_oracle(d: int, k: int, R: float, t: float) -> float:
    """Closed-form isotropic volume of the d-ball of radius ``R``.

    ``omega_{d-k} * k * omega_k * R^d * int_0^{t/R} r^(k-1) (1-r^2)^((d-k)/2) dr``
    evaluated through the regularised incomplete beta function.  ``t > R``
    clamps to the full volume.
    """
    if d < 2 or not 1 <= k < d:
        raise ValueError("need 1 <= k < d")
    if R <= 0 or t < 0:
        raise ValueError("R must be positive and t non-negative")
    x = min(t / R, 1.0) ** 2
    a, b = k / 2, (d - k) / 2 + 1
    integral = 0.5 * beta_fn(a, b) * betainc(a, b, x)
    return ball_volume(d - k) * k * ball_volume(k) * R**d * integral


def ellipsoid_section_oracle(Q, xi, t: float) -> float:
    """Hyperplane section volume of ``{x^T Q x <= 1}`` at signed distance ``t`` along unit ``xi``.

    With ``w = sqrt(xi^T Q^-1 xi)`` (the support value) the central section
    has volume ``omega_{d-1} / (sqrt(det Q) w)`` and shrinks as
    ``(1 - t^2/w^2)^((d-1)/2)``.
    """
    Q = np.asarray(Q, dtype=float)
    xi = np.asarray(xi, dtype=float).ravel()
    if np.any(np.linalg.eigvalsh(Q) <= 0):
        raise ValueError("Q must be positive definite")
    if abs(np.linalg.norm(xi) - 1) > 1e-12:
        raise ValueError("xi must be a unit vector")
    d = len(xi)
    w = math.sqrt(xi @ np.linalg.solve(Q, xi))
    if abs(t) >= w:
        return 0.0
    central = ball_volume(d - 1) / (math.sqrt(np.linalg.det(Q)) * w)
    return central * (1 - (t / w) ** 2) ** ((d - 1) / 2)


@dataclass(frozen=True)
class ExpansionCoeffs:
    """Coefficients ``c_i`` of ``t^(2i+k)`` in the small-``t`` expansion of ``V_H``."""

    k: int
    coeffs: tuple[float, ...]

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        return sum(c * t ** (2 * i + self.k) for i, c in enumerate(self.coeffs))

    def derivative_at_zero(self, order: int) -> float:
        """``order``-th derivative of the truncated series at 0."""
        if order < self.k or (order - self.k) % 2:
            return 0.0
        i = (order - self.k) // 2
        if i >= len(self.coeffs):
            return 0.0
        return self.coeffs[i] * math.factorial(order)


def ovall_coefficients(k: int, lap_values) -> ExpansionCoeffs:
    """``c_i = omega_k * Lap^i A(0) / (2^i i! prod_{j<=i} (2j+k))``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    wk = ball_volume(k)
    coeffs = []
    for i, lv in enumerate(lap_values):
        denom = 2**i * math.factorial(i) * math.prod(2 * j + k for j in range(1, i + 1))
        coeffs.append(wk * float(lv) / denom)
    return ExpansionCoeffs(k, tuple(coeffs))


def derivative_probe(body: Body, H, order: int, h_step: float, resolution: int = DEFAULT_RESOLUTION) -> float:
    """Forward-difference estimate of ``V_H^(order)(0)`` from samples at ``0, h, ..., order*h``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    if order == 0:
        return 0.0
    if order > 5:
        raise ValueError("order is capped at 5")
    if order * h_step > 0.9 * body.inradius():
        raise ValueError("step too large: stencil leaves 0.9 * inradius")
    ts = h_step * np.arange(order + 1)
    vals = isotropic_volume(body, H, ts, resolution)
    weights = np.array([(-1) ** (order - j) * math.comb(order, j) for j in range(order + 1)], dtype=float)
    return float(weights @ vals) / h_step**order
