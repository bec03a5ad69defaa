"""Command-line front end: ``sepint volume | rank | verify``.

Every flag can also be set through an environment variable named
``SEPINT_<FLAG>`` (``SEPINT_SEED=3``, ``SEPINT_GRID=20x20``); an explicit
flag wins over the environment, which wins over the built-in default.

Exit codes: 0 success, 1 failed check, 2 configuration error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import artifacts
from .body import Body, FixtureError, fixture, load_body, parse_body
from .sections import DEFAULT_RESOLUTION, isotropic_volume
from .separability import DEFAULT_TOL, build_sep_matrix, numerical_rank, random_subspaces, rank_growth_curve
from .verify import SUITES, run_suite

__all__ = ["RunConfig", "ConfigError", "main", "cmd_volume", "cmd_rank", "cmd_verify", "resolve_config"]

ENV_PREFIX = "SEPINT_"

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    """Effective settings of one invocation; echoed into every artifact."""

    command: str
    body: str | None = None
    k: int = 1
    grid: str = "10x10"
    seed: int = 0
    resolution: int = DEFAULT_RESOLUTION
    tol: float = DEFAULT_TOL
    out: str | None = None
    suite: str = "all"
    threads: int = 1
    t: str | None = None
    matrix: str | None = None
    sizes: str | None = None
    save_matrix: str | None = None

    def grid_sizes(self) -> tuple[int, int]:
        try:
            n_h, n_t = (int(v) for v in self.grid.lower().split("x"))
        except ValueError:
            raise ConfigError(f"--grid must look like 10x10, got {self.grid!r}") from None
        if n_h < 2 or n_t < 2:
            raise ConfigError("grid sizes must be at least 2")
        return n_h, n_t

    def t_values(self, r_in: float) -> np.ndarray:
        if self.t is None:
            return np.linspace(0.1, 0.9, 9) * r_in
        try:
            return np.array([float(v) for v in self.t.split(",") if v.strip()])
        except ValueError:
            raise ConfigError(f"--t must be a comma-separated list, got {self.t!r}") from None

    def size_list(self) -> list[int] | None:
        if self.sizes is None:
            return None
        try:
            return [int(v) for v in self.sizes.split(",")]
        except ValueError:
            raise ConfigError(f"--sizes must be a comma-separated list, got {self.sizes!r}") from None

    def record(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


_TYPES = {"k": int, "seed": int, "resolution": int, "threads": int, "tol": float}
_KNOBS = ("body", "k", "grid", "seed", "resolution", "tol", "out", "suite", "threads", "t", "matrix", "sizes", "save_matrix")


def resolve_config(ns: argparse.Namespace, environ=None) -> RunConfig:
    """Merge flags over ``SEPINT_*`` variables over defaults."""
    environ = os.environ if environ is None else environ
    values = {}
    for name in _KNOBS:
        flag = getattr(ns, name, None)
        env = environ.get(ENV_PREFIX + name.upper())
        raw = flag if flag is not None else env
        if raw is None:
            continue
        try:
            values[name] = _TYPES.get(name, str)(raw)
        except ValueError:
            raise ConfigError(f"bad value for {name}: {raw!r}") from None
    cfg = RunConfig(command=ns.command, **values)
    if cfg.k < 1:
        raise ConfigError("--k must be positive")
    if cfg.resolution < 2:
        raise ConfigError("--resolution must be at least 2")
    if not 0 < cfg.tol < 1:
        raise ConfigError("--tol must lie in (0, 1)")
    if cfg.threads < 1:
        raise ConfigError("--threads must be positive")
    return cfg


def _resolve_body(spec: str | None) -> Body:
    """A file path, an inline ``key: value | ...`` record, or a shipped fixture name."""
    if not spec:
        raise ConfigError("--body is required")
    try:
        if Path(spec).is_file():
            return load_body(spec)
        if ":" in spec:
            return parse_body(spec)
        return fixture(spec)
    except FileNotFoundError:
        raise ConfigError(f"no body file or fixture named {spec!r}") from None
    except FixtureError as exc:
        raise ConfigError(str(exc)) from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_volume(cfg: RunConfig) -> int:
    body = _resolve_body(cfg.body)
    if cfg.k >= body.d:
        raise ConfigError(f"--k must be below the dimension {body.d}")
    frame = random_subspaces(body.d, cfg.k, 1, cfg.seed)[0]
    ts = cfg.t_values(body.inradius())
    if np.any(ts < 0):
        raise ConfigError("t values must be non-negative")
    vals = isotropic_volume(body, frame, ts, cfg.resolution)
    meta = {"body": body.fixture_id, "frame": frame.digest(), "config": cfg.record()}
    _emit(artifacts.volume_csv(ts, np.atleast_1d(vals), meta), cfg.out)
    return EXIT_OK


def cmd_rank(cfg: RunConfig) -> int:
    record = {"config": cfg.record()}
    sizes = cfg.size_list()
    if cfg.matrix:
        try:
            values, _ = artifacts.load_matrix_csv(cfg.matrix)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read matrix: {exc}") from None
        record["report"] = numerical_rank(values, cfg.tol).to_dict()
    else:
        body = _resolve_body(cfg.body)
        if cfg.k >= body.d:
            raise ConfigError(f"--k must be below the dimension {body.d}")
        record["body"] = body.fixture_id
        if sizes:
            curve = rank_growth_curve(body, cfg.k, sizes, cfg.seed, cfg.tol, cfg.resolution, cfg.threads)
            record["curve"] = [list(p) for p in curve]
        else:
            n_h, n_t = cfg.grid_sizes()
            M = build_sep_matrix(body, cfg.k, n_h, n_t, cfg.seed, cfg.resolution, cfg.threads)
            record["report"] = numerical_rank(M, cfg.tol).to_dict()
            if cfg.save_matrix:
                artifacts.save_sep_matrix(M, cfg.save_matrix, {"tol": cfg.tol, "config": cfg.record()})
    _emit(artifacts.dumps_json(record), cfg.out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.suite not in SUITES + ("all",):
        raise ConfigError(f"--suite must be one of {', '.join(SUITES + ('all',))}")
    results = run_suite(cfg.suite, cfg.seed, cfg.resolution, cfg.tol, cfg.threads)
    suites = {name: [c.to_dict() for c in checks] for name, checks in results.items()}
    passed = all(c.passed for checks in results.values() for c in checks)
    record = {"config": cfg.record(), "suites": suites, "passed": passed}
    _emit(artifacts.dumps_json(record), cfg.out)
    for checks in results.values():
        for c in checks:
            print(f"{c.name}: {'pass' if c.passed else 'fail'}", file=sys.stderr)
    return EXIT_OK if passed else EXIT_CHECK


COMMANDS = {"volume": cmd_volume, "rank": cmd_rank, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--body", help="fixture path, inline 'model: ball | d: 3', or shipped name")
    common.add_argument("--k", help="subspace dimension (default 1)")
    common.add_argument("--grid", help="sample grid nHxnT (default 10x10)")
    common.add_argument("--seed", help="frame sampling seed (default 0)")
    common.add_argument("--resolution", help=f"quadrature resolution (default {DEFAULT_RESOLUTION})")
    common.add_argument("--tol", help=f"relative singular value threshold (default {DEFAULT_TOL})")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--threads", help="worker cap; results do not depend on it (default 1)")

    parser = argparse.ArgumentParser(prog="sepint", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    vol = sub.add_parser("volume", parents=[common], help="isotropic volume samples as CSV")
    vol.add_argument("--t", help="comma-separated radii (default 9 points in [0.1, 0.9] * inradius)")
    rank = sub.add_parser("rank", parents=[common], help="numerical rank report as JSON")
    rank.add_argument("--matrix", help="read the sample matrix from CSV instead of building it")
    rank.add_argument("--sizes", help="comma-separated square grid sizes for a growth curve")
    rank.add_argument("--save-matrix", dest="save_matrix", help="also write the matrix CSV and sidecar")
    ver = sub.add_parser("verify", parents=[common], help="run self-check suites")
    ver.add_argument("--suite", help=f"one of {', '.join(SUITES)}, all (default all)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        cfg = resolve_config(ns)
        return COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"sepint: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # geometry or numerical failure
        print(f"sepint: runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
