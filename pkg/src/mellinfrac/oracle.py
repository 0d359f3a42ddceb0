"""Closed-form reference values for fractional integrals and derivatives.

The series here are summed in multiprecision with :mod:`mpmath`, sharing no
code with the quadrature engines, so agreement between the two is evidence.
"""

from __future__ import annotations

import csv
import itertools
from dataclasses import asdict, dataclass
from pathlib import Path

import mpmath as mp

from mellinfrac.core import LogGrid
from mellinfrac.errors import DomainError

FAMILIES = ("power", "log_k", "exp", "sinc", "sinc_deriv")
OPERATIONS = ("J", "D")

_DPS = 40
_TAIL = mp.mpf("1e-12")


@dataclass(frozen=True)
class OracleCase:
    family: str
    op: str
    alpha: float
    c: float
    x: float
    b: float = 1.0
    """Power exponent, or the rate in :math:`e^{bx}`."""
    k: int = 1
    """Log power."""
    s: int = 0
    """Sinc derivative order."""

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise DomainError(f"unknown oracle family: {self.family!r}")
        if self.op not in OPERATIONS:
            raise DomainError(f"operation must be 'J' or 'D': {self.op!r}")
        if not self.alpha > 0:
            raise DomainError(f"order must be positive: {self.alpha}")
        if not self.x > 0:
            raise DomainError(f"x must be positive: {self.x}")

        if self.family == "power":
            if not self.c + self.b > 0:
                raise DomainError(f"power family needs c + b > 0: c = {self.c}, b = {self.b}")
        elif self.family == "sinc_deriv":
            if self.s < 0:
                raise DomainError(f"derivative order must be non-negative: {self.s}")
            if not (self.c > 0 or (self.c == 0 and self.s % 2 == 1)):
                raise DomainError(
                    f"sinc derivatives need c > 0, or c = 0 with odd s: c = {self.c}, s = {self.s}")
        elif not self.c > 0:
            raise DomainError(f"{self.family} family needs c > 0: c = {self.c}")
        if self.family == "log_k" and self.k < 0:
            raise DomainError(f"log power must be non-negative: {self.k}")

    @property
    def sign(self) -> int:
        """Exponent sign: -1 for J, +1 for D."""
        return -1 if self.op == "J" else 1


# {{{ families


def _power(case: OracleCase) -> mp.mpc:
    return mp.power(case.c + case.b, case.sign * case.alpha) * mp.power(case.x, case.b)


def _pochhammer(a: mp.mpf, n: int) -> mp.mpf:
    return mp.fprod(a + i for i in range(n))


def _log_k(case: OracleCase) -> mp.mpc:
    # B_{-alpha} gives the derivative with the same template; the rising
    # product is used directly since Gamma(-alpha) has poles
    a = mp.mpf(case.sign) * -case.alpha
    c = mp.mpf(case.c)
    lx = mp.log(case.x)
    terms = (
        (-1) ** (case.k - j) * mp.binomial(case.k, j) * _pochhammer(a, case.k - j)
        / mp.power(c, a + case.k - j) * lx**j
        for j in range(case.k + 1))
    return mp.fsum(terms)


def _series(coeff, power, case: OracleCase) -> mp.mpc:
    """Sum ``coeff(n) * power(n)^(sign alpha) * x^n`` until the tail is small."""
    x = mp.mpf(case.x)
    total = mp.mpf(0)
    quiet = 0
    for n in itertools.count():
        a = coeff(n)
        if a == 0:
            continue
        term = a * mp.power(power(n), case.sign * case.alpha) * mp.power(x, n)
        total += term
        quiet = quiet + 1 if abs(term) < _TAIL * max(abs(total), 1) else 0
        if quiet >= 3 and n > 4 * abs(x) * max(abs(case.b), mp.pi):
            return total


def _exp(case: OracleCase) -> mp.mpc:
    return _series(lambda n: mp.power(case.b, n) / mp.factorial(n),
                   lambda n: case.c + n, case)


def _sinc_coeff(s: int, n: int) -> mp.mpf:
    # x^n coefficient of the s-th derivative of sin(pi x)/(pi x):
    # A_{s,k} (-1)^k pi^{2k}/(2k+1)! with 2k = n + s
    if (n + s) % 2:
        return mp.mpf(0)
    k = (n + s) // 2
    a_sk = mp.fprod(2 * k - v for v in range(s))
    return a_sk * (-1) ** k * mp.power(mp.pi, 2 * k) / mp.factorial(2 * k + 1)


def _sinc(case: OracleCase) -> mp.mpc:
    s = case.s if case.family == "sinc_deriv" else 0
    return _series(lambda n: _sinc_coeff(s, n), lambda n: case.c + n, case)


_EVAL = {"power": _power, "log_k": _log_k, "exp": _exp, "sinc": _sinc,
         "sinc_deriv": _sinc}


def oracle_eval(case: OracleCase) -> complex:
    """Reference value of ``J^alpha_{0+,c}`` or ``D^alpha_{0+,c}`` for *case*."""
    with mp.workdps(_DPS):
        return complex(_EVAL[case.family](case))


# }}}


# {{{ suite

DEFAULT_ORDERS = (0.5, 1.3, 2.7)
DEFAULT_PARAMS: dict[str, dict[str, float]] = {
    "power": {"c": 1.0, "b": 1.0},
    "log_k": {"c": 1.0, "k": 2},
    "exp": {"c": 1.0, "b": -1.0},
    "sinc": {"c": 1.0},
}


def oracle_suite(grid: LogGrid | None = None,
                 orders: tuple[float, ...] = DEFAULT_ORDERS,
                 params: dict[str, dict[str, float]] | None = None,
                 ) -> list[tuple[OracleCase, complex]]:
    """Enumerate families x operations x orders x grid points, in that order."""
    grid = grid or LogGrid(0.5, 2.0, 5)
    params = DEFAULT_PARAMS if params is None else params
    out = []
    for family, kw in params.items():
        for op in OPERATIONS:
            for alpha in orders:
                for x in grid.points:
                    case = OracleCase(family, op, float(alpha), x=float(x), **kw)
                    out.append((case, oracle_eval(case)))
    return out


_FIELDS = ("family", "op", "alpha", "c", "x", "b", "k", "s")


def write_golden(path: str | Path, suite: list[tuple[OracleCase, complex]]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([*_FIELDS, "re", "im"])
        for case, value in suite:
            row = asdict(case)
            w.writerow([*(_fmt(row[k]) for k in _FIELDS), _fmt(value.real), _fmt(value.imag)])


def read_golden(path: str | Path) -> list[tuple[OracleCase, complex]]:
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            case = OracleCase(
                family=row["family"], op=row["op"], alpha=float(row["alpha"]),
                c=float(row["c"]), x=float(row["x"]), b=float(row["b"]),
                k=int(row["k"]), s=int(row["s"]))
            out.append((case, complex(float(row["re"]), float(row["im"]))))
    return out


def _fmt(v: object) -> str:
    return format(v, ".17g") if isinstance(v, float) else str(v)


# }}}
