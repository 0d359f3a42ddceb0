"""Command-line front end.

Exit status: 0 on success, 1 on a computation error, 2 on a configuration
error. ``verify`` exits 0 only if every counted check passes.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from mellinfrac import io
from mellinfrac.core import LogGrid, QuadConfig, mellin_transform
from mellinfrac.derivative import hadamard_derivative
from mellinfrac.difference import DifferenceConfig, frac_difference, strong_derivative_estimate
from mellinfrac.errors import DomainError, MellinError
from mellinfrac.functions import Builtin, load_samples, parse_spec
from mellinfrac.integral import hadamard_integral
from mellinfrac.pde import PdeProblem, residual_check, solve_pde

log = logging.getLogger("mellinfrac")

COMMANDS = ("transform", "integrate", "differentiate", "diffquot", "solve", "verify")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    f: str | None = None
    alpha: float | None = None
    c: float = 0.0
    mu: float | None = None
    nu: float | None = None
    x: tuple[float, ...] | None = None
    grid: tuple[float, float, int] | None = None
    t_max: float = 20.0
    n_t: int = 401
    rel_tol: float = 1.0e-8
    tail_tol: float = 1.0e-10
    h: float | None = None
    side: str = "below"
    k_range: tuple[int, int] = (3, 12)
    problem: str | None = None
    y: tuple[float, ...] = (0.5, 0.55, 0.6, 0.65, 0.7)
    method: str = "spectral"
    residual: bool = False
    suite: str = "all"
    output: str | None = None

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        # normalize sequences so that equal configs serialize identically
        for name in ("x", "grid", "k_range", "y"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, tuple(v))
        if self.grid is not None:
            lo, hi, n = self.grid
            object.__setattr__(self, "grid", (float(lo), float(hi), int(n)))
        for name in ("alpha", "mu", "nu", "h"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, float(v))
        if self.x is not None:
            object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        object.__setattr__(self, "y", tuple(float(v) for v in self.y))
        object.__setattr__(self, "k_range", tuple(int(v) for v in self.k_range))

    def to_json(self) -> str:
        return io.dumps(asdict(self))

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RunConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> RunConfig:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(data)

    # {{{ derived objects

    def function(self) -> Builtin:
        if self.f is None:
            raise ConfigError(f"{self.command} needs --f")
        if self.f.endswith(".csv") or Path(self.f).is_file():
            return load_samples(self.f)
        return parse_spec(self.f)

    def order(self) -> float:
        if self.alpha is None:
            raise ConfigError(f"{self.command} needs --alpha")
        return self.alpha

    def points(self) -> np.ndarray:
        if self.x is not None:
            return np.array(self.x, dtype=float)
        if self.grid is not None:
            return LogGrid(*self.grid).points
        raise ConfigError(f"{self.command} needs --x or --grid")

    def log_grid(self) -> LogGrid:
        if self.grid is None:
            raise ConfigError(f"{self.command} needs --grid")
        return LogGrid(*self.grid)

    def quad(self) -> QuadConfig:
        return QuadConfig(rel_tol=self.rel_tol)

    # }}}


# {{{ commands


def _emit(cfg: RunConfig, header: Sequence[str], rows: list[Sequence[float]],
          meta: dict[str, Any]) -> None:
    if cfg.output:
        out = Path(cfg.output)
        io.write_csv(out, header, rows)
        meta = {"command": cfg.command, "params": asdict(cfg),
                "grid": list(cfg.grid) if cfg.grid else None,
                "tolerances": {"rel_tol": cfg.rel_tol, "tail_tol": cfg.tail_tol},
                "results_path": str(out), "residuals": meta.get("residuals"), **meta}
        io.write_json(out.with_suffix(".json"), meta)
    else:
        print(",".join(header))
        for row in rows:
            print(",".join(io.fmt(v) for v in row))


def cmd_transform(cfg: RunConfig) -> int:
    f = cfg.function()
    nu = 0.5 if cfg.nu is None else cfg.nu
    t = np.linspace(-cfg.t_max, cfg.t_max, cfg.n_t)
    spec = mellin_transform(f.f, nu, t, cfg.quad())
    _emit(cfg, ("t", "re", "im"), io.complex_rows(t, spec.values), {"nu": nu})
    return 0


def cmd_integrate(cfg: RunConfig) -> int:
    f = cfg.function()
    x = cfg.points()
    mu = cfg.c if cfg.mu is None else cfg.mu
    val = hadamard_integral(f.f, cfg.order(), mu, x, cfg.quad())
    _emit(cfg, ("x", "re", "im"), io.complex_rows(x, np.atleast_1d(val)), {})
    return 0


def cmd_differentiate(cfg: RunConfig) -> int:
    f = cfg.function()
    x = cfg.points()
    val = hadamard_derivative(f.bundle, cfg.order(), cfg.c, x, cfg.quad())
    _emit(cfg, ("x", "re", "im"), io.complex_rows(x, np.atleast_1d(val)), {})
    return 0


def cmd_diffquot(cfg: RunConfig) -> int:
    f = cfg.function()
    x = cfg.points()
    alpha = cfg.order()
    if cfg.h is not None:
        dcfg = DifferenceConfig(tail_tol=cfg.tail_tol, h_values=(cfg.h,))
        val = frac_difference(f.f, alpha, cfg.c, cfg.h, x, dcfg) / complex(cfg.h - 1) ** alpha
        _emit(cfg, ("x", "re", "im"), io.complex_rows(x, np.atleast_1d(val)), {"h": cfg.h})
        return 0

    dcfg = DifferenceConfig(tail_tol=cfg.tail_tol, side=cfg.side, k_range=cfg.k_range)
    est = strong_derivative_estimate(f.f, alpha, cfg.c, x, dcfg, strict=False)
    rows = [(h, xj, v.real, v.imag)
            for h, row in zip(est.h_values, est.estimates) for xj, v in zip(x, row)]
    _emit(cfg, ("h", "x", "re", "im"), rows,
          {"convergence": est.report, "monotone": est.monotone})
    if not cfg.output:
        print(est.to_json())
    return 0


def cmd_solve(cfg: RunConfig) -> int:
    if cfg.problem is None:
        raise ConfigError("solve needs --problem")
    f = cfg.function()
    problem = PdeProblem(cfg.problem, cfg.order(), f.f, cfg.log_grid(), cfg.y,
                         nu=cfg.nu, method=cfg.method, quad=cfg.quad())
    w = solve_pde(problem)
    meta: dict[str, Any] = {"alpha": problem.alpha, "nu": problem.nu,
                            "y": list(problem.y_values), "provenance": problem.method}
    if cfg.residual:
        meta["residuals"] = residual_check(problem, w).to_dict()
    _emit(cfg, ("x", "y", "w"), io.field_rows(problem.x_grid.points, problem.y_values,
                                              w.values), meta)
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    from mellinfrac.verify import SUITES, all_passed, run_suite

    if cfg.suite != "all" and cfg.suite not in SUITES:
        raise ConfigError(f"unknown suite {cfg.suite!r}; choose from {['all', *SUITES]}")
    checks, elapsed = run_suite(cfg.suite)
    for c in checks:
        print(c.line())
    ok = all_passed(checks)
    counted = [c for c in checks if not c.info]
    print(f"{sum(c.passed for c in counted)}/{len(counted)} checks passed "
          f"in {elapsed:.1f} s: {'PASS' if ok else 'FAIL'}")
    if cfg.output:
        io.write_json(cfg.output, {"suite": cfg.suite, "passed": ok,
                                   "checks": [c.to_dict() for c in checks]})
    return 0 if ok else 1


_DISPATCH = {
    "transform": cmd_transform,
    "integrate": cmd_integrate,
    "differentiate": cmd_differentiate,
    "diffquot": cmd_diffquot,
    "solve": cmd_solve,
    "verify": cmd_verify,
}


# }}}


# {{{ argument parsing


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {text!r}") from exc


def _grid(text: str) -> tuple[float, float, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid is x_min,x_max,n: {text!r}")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"grid is x_min,x_max,n: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mellinfrac",
        description="Mellin transforms and Hadamard-type fractional calculus.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration; flags override it")
    common.add_argument("--echo-config", action="store_true",
                        help="print the canonical configuration and exit")
    common.add_argument("--f", help="builtin spec such as power:b=1, or a CSV file")
    common.add_argument("--alpha", type=float)
    common.add_argument("--c", type=float)
    common.add_argument("--mu", type=float)
    common.add_argument("--nu", type=float)
    common.add_argument("--x", type=_floats, help="comma-separated points")
    common.add_argument("--grid", type=_grid, help="x_min,x_max,n (log-uniform)")
    common.add_argument("--t-max", dest="t_max", type=float)
    common.add_argument("--n-t", dest="n_t", type=int)
    common.add_argument("--rel-tol", dest="rel_tol", type=float)
    common.add_argument("--tail-tol", dest="tail_tol", type=float)
    common.add_argument("--output", "-o")

    sub.add_parser("transform", parents=[common], help="Mellin transform on a line")
    sub.add_parser("integrate", parents=[common], help="Hadamard-type fractional integral")
    sub.add_parser("differentiate", parents=[common], help="Hadamard-type fractional derivative")
    p = sub.add_parser("diffquot", parents=[common], help="fractional difference quotients")
    p.add_argument("--h", type=float, help="single step; default is an h-sequence")
    p.add_argument("--side", choices=("below", "above"))
    p.add_argument("--k-range", dest="k_range", type=_floats, help="k_min,k_max")
    p = sub.add_parser("solve", parents=[common], help="evolution or diffusion problem")
    p.add_argument("--problem", choices=("evolution", "diffusion"))
    p.add_argument("--y", type=_floats, help="comma-separated y values")
    p.add_argument("--method", choices=("spectral", "convolution"))
    p.add_argument("--residual", action="store_true", default=None)
    p = sub.add_parser("verify", parents=[common], help="run acceptance suites")
    p.add_argument("--suite")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    base: dict[str, Any] = {}
    if args.config:
        try:
            base = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(base, dict):
            raise ConfigError("config must be a JSON object")
    base["command"] = args.command
    names = {f.name for f in fields(RunConfig)}
    for key, value in vars(args).items():
        if key in names and value is not None and key != "command":
            base[key] = value
    if "k_range" in base:
        base["k_range"] = tuple(int(v) for v in base["k_range"])
    return RunConfig.from_dict(base)


# }}}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")

    try:
        cfg = config_from_args(args)
    except (ConfigError, DomainError, TypeError, ValueError) as exc:
        print(f"mellinfrac: configuration error: {exc}", file=sys.stderr)
        return 2
    if args.echo_config:
        sys.stdout.write(cfg.to_json())
        return 0

    try:
        return _DISPATCH[cfg.command](cfg)
    except (ConfigError, DomainError) as exc:
        print(f"mellinfrac: configuration error: {exc}", file=sys.stderr)
        return 2
    except MellinError as exc:
        print(f"mellinfrac: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
