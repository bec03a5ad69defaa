"""Numerical separability evidence for isotropic volume functions.

A separable ``V_H(t) = sum_{i<n} a_i(H) b_i(t)`` gives sampled matrices
``M[i, j] = V_{H_i}(t_j)`` of rank at most ``n`` on every grid.  For bodies
without such a representation the numerical rank keeps climbing as the grid
is refined, until quadrature noise reaches the singular value threshold.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .body import Body
from .sections import DEFAULT_RESOLUTION, Frame, isotropic_volume

__all__ = [
    "DEFAULT_TOL",
    "SepMatrix",
    "RankReport",
    "random_subspaces",
    "build_sep_matrix",
    "numerical_rank",
    "rank_growth_curve",
]

DEFAULT_TOL = 1e-7
LOCALITY = 0.9
MAX_DRAWS = 100


@dataclass
class SepMatrix:
    values: np.ndarray
    frames: list[Frame]
    t_grid: np.ndarray
    body_id: str = ""
    seed: int | None = None
    quad_resolution: int | None = None

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


@dataclass
class RankReport:
    singular_values: np.ndarray
    rank: int
    tol: float
    grid: tuple[int, int]

    def to_dict(self) -> dict:
        return {
            "singular_values": [float(s) for s in self.singular_values],
            "rank": int(self.rank),
            "tol": float(self.tol),
            "grid": list(self.grid),
        }


def random_subspaces(d: int, k: int, n: int, seed: int) -> list[Frame]:
    """``n`` random k-frames in ``R^d`` from QR of seeded Gaussian matrices."""
    if not 1 <= k < d:
        raise ValueError("need 1 <= k < d")
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.default_rng(seed)
    frames = []
    while len(frames) < n:
        for _ in range(MAX_DRAWS):
            g = rng.standard_normal((d, k))
            q, r = np.linalg.qr(g)
            if np.min(np.abs(np.diag(r))) > 1e-8:
                break
        else:
            raise RuntimeError("could not draw a non-degenerate frame")
        # fix the QR sign ambiguity so frames depend only on the draw
        q = q * np.sign(np.diag(r))
        frames.append(Frame(q.T))
    return frames


def build_sep_matrix(
    body: Body,
    k: int,
    n_H: int,
    n_t: int,
    seed: int = 0,
    resolution: int = DEFAULT_RESOLUTION,
    threads: int = 1,
) -> SepMatrix:
    """Sample ``V_{H_i}(t_j)`` on random subspaces and ``t_j`` in ``[0.1, 0.9] * inradius``.

    Rows are independent and may run on ``threads`` workers; the result does
    not depend on the worker count.
    """
    if n_H < 2 or n_t < 2:
        raise ValueError("grid sizes must be at least 2")
    frames = random_subspaces(body.d, k, n_H, seed)
    r_in = body.inradius()
    t_grid = np.linspace(0.1, LOCALITY, n_t) * r_in

    def row(frame):
        return isotropic_volume(body, frame, t_grid, resolution)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(row, frames))
    else:
        rows = [row(f) for f in frames]
    return SepMatrix(np.vstack(rows), frames, t_grid, body.fixture_id, seed, resolution)


def numerical_rank(M, tol: float = DEFAULT_TOL) -> RankReport:
    """Count singular values with ``sigma_i / sigma_1 > tol``."""
    if not 0 < tol < 1:
        raise ValueError("tol must lie in (0, 1)")
    values = M.values if isinstance(M, SepMatrix) else np.asarray(M, dtype=float)
    s = np.linalg.svd(values, compute_uv=False)
    rank = 0 if s.size == 0 or s[0] == 0 else int(np.sum(s / s[0] > tol))
    return RankReport(s, rank, tol, values.shape)


def rank_growth_curve(
    body: Body,
    k: int,
    sizes,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    resolution: int = DEFAULT_RESOLUTION,
    threads: int = 1,
) -> list[tuple[int, int]]:
    """Numerical rank of square ``n x n`` sample matrices for each ``n`` in ``sizes``."""
    sizes = list(sizes)
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("sizes must be increasing")
    out = []
    for n in sizes:
        M = build_sep_matrix(body, k, n, n, seed, resolution, threads)
        out.append((n, numerical_rank(M, tol).rank))
    return out
