r"""Fractional Mellin differences and strong derivative estimates.

.. math::

    \Delta_h^{\alpha, c} f(x) = \sum_{j = 0}^\infty \binom{\alpha}{j}
        (-1)^{\alpha - j} h^{c j} f(h^j x),
    \qquad (-1)^{\alpha - j} = e^{i \pi \alpha} (-1)^j.

With this phase the series has the Mellin symbol
:math:`e^{i\pi\alpha}(1 - h^{-it})^\alpha` on the line :math:`\operatorname{Re} s = c`,
one branch of :math:`(h^{-it} - 1)^\alpha`. For eigenfunctions :math:`x^b` the
quotient :math:`\Delta_h^{\alpha,c} x^b / (h - 1)^\alpha` tends to
:math:`(c + b)^\alpha x^b` as :math:`h \to 1^-`; from above the series
diverges once :math:`c + b > 0`, so the default limit is taken from below.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from mellinfrac.combinatorics import frac_binomial_sequence
from mellinfrac.core import LogGrid, MellinFunction, as_function
from mellinfrac.errors import DomainError, NonConvergent, TruncationError

ArrayFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class DifferenceConfig:
    """Truncation and limit settings for fractional differences."""

    J_max: int = 1_000_000
    tail_tol: float = 1.0e-10
    quiet_terms: int = 10
    side: str = "below"
    """Approach h -> 1 from ``"below"`` (h = 1 - 2^-k) or ``"above"``."""
    k_range: tuple[int, int] = (3, 12)
    h_values: tuple[float, ...] | None = None
    """Explicit h-sequence; overrides *side* and *k_range*."""
    anchor: float = 1.0
    """Scale where *f* is assumed non-negligible; terms are not counted as
    quiet until :math:`h^j x` has crossed it."""

    def __post_init__(self) -> None:
        if self.J_max < 2:
            raise DomainError(f"J_max must be at least 2: {self.J_max}")
        if not self.anchor > 0:
            raise DomainError(f"anchor must be positive: {self.anchor}")
        if self.side not in ("below", "above"):
            raise DomainError(f"side must be 'below' or 'above': {self.side!r}")
        for h in self.h_sequence:
            if not (h > 0 and h != 1):
                raise DomainError(f"h values must be positive and != 1: {h}")

    @property
    def h_sequence(self) -> tuple[float, ...]:
        if self.h_values is not None:
            return tuple(self.h_values)
        sign = -1.0 if self.side == "below" else 1.0
        lo, hi = self.k_range
        return tuple(1.0 + sign * 2.0 ** (-k) for k in range(lo, hi + 1))


def _is_integer(alpha: float) -> bool:
    return float(alpha).is_integer()


def _first_active(f: MellinFunction, log_x: np.ndarray, log_h: float,
                  anchor: float) -> np.ndarray:
    """First index j with h^j x inside the support of f and past the anchor."""
    lo, hi = f.support
    if log_h < 0:
        edge = min(hi, anchor) if lo < anchor else hi
        edge = math.log(edge) if math.isfinite(edge) else -math.inf
        gap = np.maximum(log_x - edge, 0.0)
    else:
        edge = max(lo, anchor) if hi > anchor else lo
        edge = math.log(edge) if edge > 0 else math.inf
        gap = np.maximum(edge - log_x, 0.0)
    gap = np.where(np.isfinite(gap), gap, 0.0)
    return np.ceil(gap / abs(log_h)).astype(np.int64)


def difference_terms(alpha: float, c: float, h: float, n: int) -> np.ndarray:
    r"""Coefficients :math:`\binom{\alpha}{j}(-1)^{\alpha - j} h^{cj}`, ``j < n``."""
    j = np.arange(n)
    b = frac_binomial_sequence(alpha, n)
    if _is_integer(alpha):
        b[j > alpha] = 0.0
        sign = np.where((int(alpha) - j) % 2 == 0, 1.0, -1.0)
        return b * sign * h ** (c * j)
    sign = np.where(j % 2 == 0, 1.0, -1.0)
    return cmath.exp(1j * math.pi * alpha) * b * sign * h ** (c * j)


def frac_difference(f: MellinFunction | ArrayFn, alpha: float, c: float, h: float,
                    x: np.ndarray | float,
                    cfg: DifferenceConfig | None = None) -> np.ndarray:
    r"""Evaluate :math:`\Delta_h^{\alpha, c} f(x)`.

    Integer orders are summed exactly (``alpha + 1`` terms). Otherwise the
    series is cut once ``quiet_terms`` consecutive terms fall below
    ``tail_tol``, counting only terms whose argument :math:`h^j x` lies in the
    support of *f*.

    :raises TruncationError: if ``J_max`` terms do not suffice.
    """
    cfg = cfg or DifferenceConfig()
    f = as_function(f)
    if not alpha >= 0:
        raise DomainError(f"difference order must be non-negative: {alpha}")
    if not (h > 0 and h != 1):
        raise DomainError(f"difference step needs h > 0, h != 1: h = {h}")

    x_arr = np.asarray(x, dtype=float)
    if np.any(~(x_arr > 0)):
        raise DomainError("differences are evaluated at x > 0 only")
    log_x = np.log(np.atleast_1d(x_arr)).ravel()
    log_h = math.log(h)

    def terms(j: np.ndarray, rows: np.ndarray, coef: np.ndarray) -> np.ndarray:
        vals = f.eval_log(log_x[rows, None] + j[None, :] * log_h)
        with np.errstate(over="ignore", invalid="ignore"):
            scaled = vals * (coef * np.exp(c * j * log_h))[None, :]
        return np.where(vals == 0, 0.0, scaled)

    if _is_integer(alpha):
        n = int(alpha)
        j = np.arange(n + 1)
        coef = np.array([math.comb(n, k) * (-1.0) ** (n - k) for k in range(n + 1)])
        out = terms(j, np.arange(log_x.size), coef).sum(axis=1)
    else:
        out = _series(terms, alpha, log_x.size, _first_active(f, log_x, log_h, cfg.anchor), cfg)
        out = cmath.exp(1j * math.pi * alpha) * out

    out = np.asarray(out).reshape(x_arr.shape)
    return out[()] if out.ndim == 0 else out


def _series(terms: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray],
            alpha: float, n_x: int, j0: np.ndarray, cfg: DifferenceConfig) -> np.ndarray:
    total = np.zeros(n_x, dtype=complex)
    quiet = np.zeros(n_x, dtype=np.int64)
    active = np.arange(n_x)
    start = 0
    first = 1.0
    chunk = 64
    while active.size and start < cfg.J_max:
        n = min(chunk, cfg.J_max - start)
        b = frac_binomial_sequence(alpha, n + 1, start=start, first=first)
        first = float(b[-1])
        j = np.arange(start, start + n)
        coef = b[:-1] * np.where(j % 2 == 0, 1.0, -1.0)

        vals = terms(j, active, coef)
        with np.errstate(over="ignore", invalid="ignore"):
            total[active] += vals.sum(axis=1)

        loud = (np.abs(vals) >= cfg.tail_tol) | (j[None, :] < j0[active, None])
        has_loud = loud.any(axis=1)
        last_loud = n - 1 - np.argmax(loud[:, ::-1], axis=1)
        quiet[active] = np.where(has_loud, n - 1 - last_loud, quiet[active] + n)
        done = (quiet[active] >= cfg.quiet_terms) & (start + n > j0[active])
        active = active[~done]

        start += n
        chunk = min(2 * chunk, 1 << 14)

    if active.size:
        raise TruncationError(
            f"difference series did not decay below {cfg.tail_tol:.1e} within "
            f"{cfg.J_max} terms at {active.size} point(s)")
    return total


def difference_fn(f: MellinFunction | ArrayFn, alpha: float, c: float, h: float,
                  cfg: DifferenceConfig | None = None,
                  window: tuple[float, float] = (-40.0, 40.0)) -> MellinFunction:
    r""":math:`\Delta_h^{\alpha,c} f` as a rule-kind function.

    Breakpoints and support edges of *f* are propagated to their images
    :math:`p h^{-j}` inside the log-*window*, so that quadrature splits there.
    """
    f = as_function(f)
    log_h = math.log(h)
    edges = [p for p in (*f.breakpoints, *f.support) if 0 < p < math.inf]
    points = set()
    for p in edges:
        j = 0
        while True:
            u = math.log(p) - j * log_h
            if not window[0] - 1 < u < window[1] + 1:
                break
            points.add(math.exp(u))
            j += 1

    lo, hi = f.support
    support = (0.0, math.inf)
    if _is_integer(alpha):
        n = int(alpha)
        support = (min(lo, lo / h**n), max(hi, hi / h**n))
    elif log_h < 0:
        support = (min(lo, lo / h), math.inf) if lo > 0 else (0.0, math.inf)
    else:
        support = (0.0, max(hi, hi / h)) if math.isfinite(hi) else (0.0, math.inf)

    def rule(x: np.ndarray) -> np.ndarray:
        return frac_difference(f, alpha, c, h, x, cfg)

    return MellinFunction.from_rule(
        rule, breakpoints=tuple(sorted(points)), support=support, real=False,
        name=f"diff({f.name})")


def difference_symbol(alpha: float, h: float, t: np.ndarray | float) -> np.ndarray:
    r"""Symbol :math:`e^{i\pi\alpha}(1 - h^{-it})^\alpha` realized by the series."""
    z = np.exp(-1j * np.asarray(t, dtype=float) * math.log(h))
    return cmath.exp(1j * math.pi * alpha) * (1.0 - z) ** alpha


def principal_symbol(alpha: float, h: float, t: np.ndarray | float) -> np.ndarray:
    r"""Principal-branch :math:`(h^{-it} - 1)^\alpha`.

    Agrees with :func:`difference_symbol` where :math:`\sin(t \log h) \le 0`
    and differs by :math:`e^{2\pi i\alpha}` elsewhere.
    """
    z = np.exp(-1j * np.asarray(t, dtype=float) * math.log(h))
    return (z - 1.0) ** alpha


# {{{ strong derivative


@dataclass(frozen=True)
class StrongEstimate:
    """Difference quotients along an h-sequence, with a convergence report."""

    x: np.ndarray
    h_values: tuple[float, ...]
    estimates: np.ndarray
    """Shape ``(len(h_values), len(x))``."""
    report: list[dict[str, float | None]] = field(default_factory=list)
    monotone: bool = True

    @property
    def final(self) -> np.ndarray:
        return self.estimates[-1]

    def to_json(self) -> str:
        return json.dumps(self.report, indent=2)


def _grid_norm(values: np.ndarray, x: np.ndarray, c: float) -> float:
    # discrete X_c norm: trapezoid of x^c |g| in log x
    u = np.log(x)
    if u.size < 2:
        return float(np.abs(values).sum() * x.sum() ** c)
    return float(np.trapezoid(x**c * np.abs(values), u))


def strong_derivative_estimate(f: MellinFunction | ArrayFn, alpha: float, c: float,
                               x_grid: LogGrid | np.ndarray,
                               cfg: DifferenceConfig | None = None,
                               strict: bool = True,
                               noise: float = 1.0e-8) -> StrongEstimate:
    r"""Difference quotients :math:`\Delta_h^{\alpha,c} f / (h - 1)^\alpha`.

    The power :math:`(h - 1)^\alpha` is principal, so from below it equals
    :math:`(1 - h)^\alpha e^{i\pi\alpha}`. The tail tolerance is scaled by
    :math:`|h - 1|^{\alpha + 1}`: the quotient divides by :math:`|h - 1|^\alpha`
    and near :math:`h = 1` the neglected tail is about a term over :math:`|1 - h|`.

    :raises NonConvergent: with *strict*, if the successive-difference norms
        do not decrease over the last four h-values.
    """
    cfg = cfg or DifferenceConfig()
    x = x_grid.points if isinstance(x_grid, LogGrid) else np.atleast_1d(
        np.asarray(x_grid, dtype=float))
    hs = cfg.h_sequence

    estimates = []
    for h in hs:
        # geometric tail ~ term / |1 - h|, quotient divides by |h - 1|^alpha
        scale = abs(h - 1.0) ** (alpha + 1.0)
        local = replace(cfg, tail_tol=cfg.tail_tol * scale)
        delta = frac_difference(f, alpha, c, h, x, local)
        estimates.append(delta / complex(h - 1.0) ** alpha)
    est = np.array(estimates)

    report: list[dict[str, float | None]] = []
    diffs = []
    for i, h in enumerate(hs):
        diff = None if i == 0 else _grid_norm(est[i] - est[i - 1], x, c)
        report.append({"h": h, "estimate_norm": _grid_norm(est[i], x, c),
                       "successive_diff": diff})
        if diff is not None:
            diffs.append(diff)

    # differences at roundoff level count as settled
    floor = noise * max((r["estimate_norm"] or 0.0) for r in report)
    monotone = all(b <= a or b <= floor for a, b in zip(diffs[:-1], diffs[1:]))
    tail = diffs[-4:]
    if strict and not all(b < a or b <= floor for a, b in zip(tail[:-1], tail[1:])):
        raise NonConvergent(
            f"successive differences do not decrease over the last h-values: {tail}")

    return StrongEstimate(x=x, h_values=hs, estimates=est, report=report,
                          monotone=monotone)


def difference_semigroup_check(f: MellinFunction | ArrayFn, alpha: float, beta: float,
                               c: float, h: float, x: float,
                               cfg: DifferenceConfig | None = None) -> float:
    r"""Return :math:`|\Delta^{\alpha}(\Delta^{\beta} f)(x) - \Delta^{\alpha+\beta} f(x)|`.

    The nested side evaluates the inner difference at every point
    :math:`h^j x` visited by the outer series.
    """
    f = as_function(f)
    inner = MellinFunction.from_rule(
        lambda pts: frac_difference(f, beta, c, h, pts, cfg),
        support=f.support if _is_integer(beta) and beta == 0 else (0.0, math.inf),
        real=False)
    nested = frac_difference(inner, alpha, c, h, x, cfg)
    direct = frac_difference(f, alpha + beta, c, h, x, cfg)
    return float(abs(nested - direct))


# }}}
