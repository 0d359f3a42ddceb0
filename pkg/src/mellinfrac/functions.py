"""Builtin test functions with derivatives and power series.

Each family is returned as a :class:`Builtin`, which bundles the function,
its derivative rules and, where one exists, a power series representation.
Families are addressed by specs such as ``power:b=1`` or ``exp:b=-1``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from numpy.polynomial.hermite_e import hermeval

from mellinfrac.core import LogGrid, MellinFunction
from mellinfrac.derivative import DerivativeBundle
from mellinfrac.errors import DomainError

ArrayFn = Callable[[np.ndarray], np.ndarray]

# number of terms kept in the truncated Taylor series
SERIES_TERMS = 80


@dataclass(frozen=True, eq=False)
class Builtin:
    name: str
    params: dict[str, float] = field(default_factory=dict)
    bundle: DerivativeBundle | None = None
    series: MellinFunction | None = None

    @property
    def f(self) -> MellinFunction:
        assert self.bundle is not None
        return self.bundle.f

    def __call__(self, x: np.ndarray | float) -> np.ndarray:
        return self.f(x)


def _falling(b: float, k: int) -> float:
    return math.prod(b - i for i in range(k))


def _series_radius(coeffs: list[float], tol: float = 1.0e-17) -> float:
    """Largest x at which the dropped tail is below *tol* relative to 1."""
    last = next((abs(a) for a in reversed(coeffs) if a != 0), 0.0)
    n = len(coeffs) - 1
    if last == 0.0:
        return math.inf
    return (tol / last) ** (1.0 / n)


# {{{ families


def power(b: float = 1.0) -> Builtin:
    r""":math:`x^b`."""
    def nth(k: int) -> ArrayFn:
        a = _falling(b, k)
        return lambda x: a * np.asarray(x, dtype=float) ** (b - k)

    f = MellinFunction.from_rule(lambda x: x**b, log_rule=lambda u: np.exp(b * u),
                                 name=f"power:b={b:g}")
    series = None
    if float(b).is_integer() and b >= 0:
        coeffs = [0.0] * int(b) + [1.0]
        series = MellinFunction.from_series(coeffs, name=f.name)
    return Builtin("power", {"b": b}, DerivativeBundle(f, nth=nth), series)


def log_k(k: int = 1) -> Builtin:
    r""":math:`\log^k x`, with logarithmic derivatives in closed form."""
    k = int(k)
    if k < 0:
        raise DomainError(f"log power must be non-negative: k = {k}")

    def log_deriv(j: int) -> ArrayFn:
        if j > k:
            return lambda x: np.zeros_like(np.asarray(x, dtype=float))
        a = math.factorial(k) / math.factorial(k - j)
        return lambda x: a * np.log(x) ** (k - j)

    f = MellinFunction.from_rule(lambda x: np.log(x) ** k, log_rule=lambda u: u**k,
                                 name=f"log_k:k={k}")
    logs = tuple(log_deriv(j) for j in range(1, 13))
    return Builtin("log_k", {"k": k}, DerivativeBundle(f, log_derivs=logs))


def exp(b: float = -1.0) -> Builtin:
    r""":math:`e^{b x}`."""
    f = MellinFunction.from_rule(lambda x: np.exp(b * x), name=f"exp:b={b:g}")
    coeffs = [b**k / math.factorial(k) for k in range(SERIES_TERMS)]
    series = MellinFunction.from_series(coeffs, radius=_series_radius(coeffs),
                                        name=f.name)
    bundle = DerivativeBundle(f, nth=lambda k: (lambda x: b**k * np.exp(b * x)))
    return Builtin("exp", {"b": b}, bundle, series)


def xexp() -> Builtin:
    r""":math:`x e^{-x}`."""
    f = MellinFunction.from_rule(lambda x: x * np.exp(-x), name="xexp")
    coeffs = [0.0] + [(-1.0) ** (k - 1) / math.factorial(k - 1)
                      for k in range(1, SERIES_TERMS)]
    series = MellinFunction.from_series(coeffs, radius=_series_radius(coeffs), name="xexp")
    bundle = DerivativeBundle(
        f, nth=lambda k: (lambda x: (-1.0) ** k * (x - k) * np.exp(-x)))
    return Builtin("xexp", {}, bundle, series)


def _sinc_coeffs(s: int, terms: int = 40) -> list[float]:
    # s-th derivative of sum (-1)^k pi^{2k} x^{2k} / (2k+1)!
    coeffs = [0.0] * (2 * terms)
    for k in range(terms):
        n = 2 * k - s
        if n < 0:
            continue
        a = _falling(2 * k, s)
        coeffs[n] = (-1.0) ** k * math.pi ** (2 * k) / math.factorial(2 * k + 1) * a
    return coeffs


def _sinc_nth(s: int) -> ArrayFn:
    """Ordinary s-th derivative of sinc, by series near 0 and Leibniz beyond."""
    coeffs = np.array(_sinc_coeffs(s))

    def rule(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        small = x <= 1.0
        out = np.empty_like(x)
        out[small] = np.polynomial.polynomial.polyval(x[small], coeffs)
        xl = x[~small]
        # (sin(pi x))^{(j)} (1 / (pi x))^{(s - j)}
        acc = np.zeros_like(xl)
        for j in range(s + 1):
            dsin = math.pi**j * np.sin(math.pi * xl + 0.5 * math.pi * j)
            n = s - j
            dinv = (-1.0) ** n * math.factorial(n) / (math.pi * xl ** (n + 1))
            acc += math.comb(s, j) * dsin * dinv
        out[~small] = acc
        return out

    return rule


def sinc() -> Builtin:
    r""":math:`\sin(\pi x) / (\pi x)`."""
    return sinc_deriv(0)


def sinc_deriv(s: int = 1) -> Builtin:
    r"""The *s*-th derivative of sinc."""
    s = int(s)
    if s < 0:
        raise DomainError(f"derivative order must be non-negative: s = {s}")
    name = "sinc" if s == 0 else f"sinc_deriv:s={s}"
    f = MellinFunction.from_rule(_sinc_nth(s), name=name)
    series = MellinFunction.from_series(_sinc_coeffs(s), radius=2.0, name=name)
    bundle = DerivativeBundle(f, nth=lambda k: _sinc_nth(s + k))
    return Builtin("sinc" if s == 0 else "sinc_deriv", {"s": s}, bundle, series)


def chi01(jump: float = 0.0) -> Builtin:
    r"""Indicator of :math:`(0, 1)`; *jump* is the value taken at ``x = 1``."""
    def rule(x: np.ndarray) -> np.ndarray:
        return np.where(x < 1.0, 1.0, np.where(x == 1.0, jump, 0.0))

    f = MellinFunction.from_rule(rule, support=(0.0, 1.0), name="chi01")
    zero = lambda k: (lambda x: np.zeros_like(np.asarray(x, dtype=float)))  # noqa: E731
    return Builtin("chi01", {"jump": jump}, DerivativeBundle(f, nth=zero))


def bump(center: float = 1.0, width: float = 1.0) -> Builtin:
    r"""Smooth bump :math:`\exp(1 - 1/(1 - z^2))` with :math:`z = \log(x/x_0)/w`.

    It is :math:`C^\infty` with compact support :math:`[x_0 e^{-w}, x_0 e^{w}]`
    and peak value 1. Derivatives come from finite differences.
    """
    if not (center > 0 and width > 0):
        raise DomainError(f"bump needs center > 0 and width > 0: {center}, {width}")
    m = math.log(center)

    def log_rule(u: np.ndarray) -> np.ndarray:
        z = (np.asarray(u, dtype=float) - m) / width
        inside = np.abs(z) < 1.0
        out = np.zeros_like(z)
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - z[inside] ** 2))
        return out

    f = MellinFunction.from_rule(
        lambda x: log_rule(np.log(x)), log_rule=log_rule,
        support=(center * math.exp(-width), center * math.exp(width)),
        name=f"bump:center={center:g},width={width:g}")
    return Builtin("bump", {"center": center, "width": width}, DerivativeBundle(f))


def log_gauss(center: float = 1.0, sigma: float = 0.5) -> Builtin:
    r"""Gaussian in :math:`\log x`: :math:`\exp(-\log^2(x/x_0) / (2\sigma^2))`.

    Its transform is :math:`\sigma\sqrt{2\pi}\, x_0^s e^{\sigma^2 s^2 / 2}` and its
    logarithmic derivatives are Hermite polynomials times the function.
    """
    if not (center > 0 and sigma > 0):
        raise DomainError(f"log_gauss needs center > 0 and sigma > 0: {center}, {sigma}")
    m = math.log(center)

    def log_rule(u: np.ndarray) -> np.ndarray:
        return np.exp(-0.5 * ((np.asarray(u, dtype=float) - m) / sigma) ** 2)

    def log_deriv(j: int) -> ArrayFn:
        he = [0.0] * j + [1.0]

        def rule(x: np.ndarray) -> np.ndarray:
            z = (np.log(x) - m) / sigma
            return (-1.0 / sigma) ** j * hermeval(z, he) * np.exp(-0.5 * z**2)

        return rule

    f = MellinFunction.from_rule(lambda x: log_rule(np.log(x)), log_rule=log_rule,
                                 name=f"log_gauss:center={center:g},sigma={sigma:g}")
    logs = tuple(log_deriv(j) for j in range(1, 13))
    return Builtin("log_gauss", {"center": center, "sigma": sigma},
                   DerivativeBundle(f, log_derivs=logs))


def log_gauss_transform(s: complex | np.ndarray, center: float = 1.0,
                        sigma: float = 0.5) -> np.ndarray:
    """Closed-form Mellin transform of :func:`log_gauss`."""
    s = np.asarray(s, dtype=complex)
    return sigma * math.sqrt(2 * math.pi) * np.exp(math.log(center) * s + 0.5 * sigma**2 * s**2)


def eq8(c: float = 0.0, gamma: float = 0.75) -> Builtin:
    r"""Domain counterexample :math:`x^{-c} |\log x|^{-\gamma}\chi_{(0, 1/2)}(x)`."""
    cut = -math.log(2.0)

    def log_rule(u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        out = np.zeros_like(u)
        inside = u < cut
        out[inside] = np.exp(-c * u[inside]) * np.abs(u[inside]) ** (-gamma)
        return out

    f = MellinFunction.from_rule(lambda x: log_rule(np.log(x)), log_rule=log_rule,
                                 support=(0.0, 0.5), name=f"eq8:c={c:g},gamma={gamma:g}")
    return Builtin("eq8", {"c": c, "gamma": gamma}, DerivativeBundle(f, fd_fallback=False))


def const(value: float = 1.0) -> Builtin:
    """The constant function."""
    f = MellinFunction.from_rule(lambda x: np.full_like(np.asarray(x, dtype=float), value),
                                 name=f"const:value={value:g}")
    zero = lambda k: (lambda x: np.zeros_like(np.asarray(x, dtype=float)))  # noqa: E731
    series = MellinFunction.from_series([value], name=f.name)
    return Builtin("const", {"value": value}, DerivativeBundle(f, nth=zero), series)


# }}}


FAMILIES: dict[str, Callable[..., Builtin]] = {
    "power": power,
    "log_k": log_k,
    "exp": exp,
    "xexp": xexp,
    "sinc": sinc,
    "sinc_deriv": sinc_deriv,
    "chi01": chi01,
    "bump": bump,
    "log_gauss": log_gauss,
    "eq8": eq8,
    "const": const,
}


def load_samples(path: str | Path) -> Builtin:
    """Sampled function from a CSV file with columns ``x, re[, im]``.

    The abscissae must form a log-uniform grid.
    """
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().lower() in ("x", "#"):
                continue
            rows.append([float(v) for v in row])
    if len(rows) < 2:
        raise DomainError(f"{path}: need at least two samples")

    data = np.array(rows)
    x = data[:, 0]
    grid = LogGrid(float(x[0]), float(x[-1]), x.size)
    if not np.allclose(np.log(x), grid.log_points, rtol=0.0, atol=1.0e-9):
        raise DomainError(f"{path}: abscissae are not log-uniform")
    values = data[:, 1] + 1j * data[:, 2] if data.shape[1] > 2 else data[:, 1]
    f = MellinFunction.from_samples(grid, values, name=f"csv:{path}")
    return Builtin("csv", {}, DerivativeBundle(f))


def parse_spec(spec: str) -> Builtin:
    """Build a function from ``name:key=value,...`` or ``csv:path``."""
    name, _, rest = spec.partition(":")
    name = name.strip()
    if name == "csv":
        return load_samples(rest)
    if name not in FAMILIES:
        raise DomainError(
            f"unknown function family {name!r}; choose from {sorted(FAMILIES)}")

    params: dict[str, float] = {}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        key, eq, value = item.partition("=")
        if not eq:
            raise DomainError(f"malformed parameter {item!r} in {spec!r}")
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise DomainError(f"parameter {key!r} is not a number: {value!r}") from None

    try:
        return FAMILIES[name](**params)
    except TypeError as exc:
        raise DomainError(f"bad parameters for {name!r}: {exc}") from None
