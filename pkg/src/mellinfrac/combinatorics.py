r"""Fractional binomials, generalized Stirling numbers and Stirling functions.

The generalized Stirling numbers of the second kind satisfy

.. math::

    S_c(r, 0) = c^r, \qquad S_c(r, r) = 1, \qquad
    S_c(r + 1, k) = S_c(r, k - 1) + (c + k) S_c(r, k),

and the Stirling functions extend them to real orders through the alternating
sum

.. math::

    S_c(\alpha, k) = \frac{1}{k!} \sum_{j = 0}^k (-1)^{k - j}
        \binom{k}{j} (c + j)^\alpha.
"""

from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from mellinfrac.errors import DomainError

# losing more than this many digits in the alternating sum triggers the
# extended precision path
CANCELLATION_DIGITS = 10


# {{{ binomials


def frac_binomial(alpha: float, j: int) -> float:
    r"""Generalized binomial coefficient :math:`\binom{\alpha}{j}`.

    The product :math:`\prod_{i < j} (\alpha - i) / (i + 1)` is accumulated
    as a sign and a log-magnitude, so large ``j`` neither overflows nor
    underflows prematurely.
    """
    if j < 0:
        raise DomainError(f"binomial index must be non-negative: {j}")

    sign = 1.0
    log_mag = 0.0
    for i in range(j):
        num = alpha - i
        if num == 0.0:
            return 0.0
        if num < 0:
            sign = -sign
        log_mag += math.log(abs(num)) - math.log(i + 1)

    return sign * math.exp(log_mag)


def frac_binomial_sequence(alpha: float, n: int, start: int = 0,
                           first: float | None = None) -> np.ndarray:
    """Coefficients ``binom(alpha, j)`` for ``j = start, ..., start + n - 1``.

    *first* may carry the already known value ``binom(alpha, start)`` so that
    consecutive chunks continue the running product.
    """
    if n <= 0:
        return np.zeros(0)

    b0 = frac_binomial(alpha, start) if first is None else first
    i = np.arange(start, start + n - 1, dtype=float)
    factors = (alpha - i) / (i + 1.0)
    return np.concatenate([[b0], b0 * np.cumprod(factors)])


def abs_binomial_sum(alpha: float, rtol: float = 1.0e-10,
                     max_terms: int = 10**8) -> float:
    r"""Sum :math:`\sum_j |\binom{\alpha}{j}|`, finite for :math:`\alpha > 0`.

    The remainder past ``J`` follows from the decay
    :math:`|\binom{\alpha}{j}| \sim C j^{-\alpha - 1}`, which puts it at
    ``J |b_J| / alpha`` up to a relative error of order ``1 / J``.
    """
    if alpha <= 0:
        raise DomainError(f"alpha must be positive: {alpha}")

    if float(alpha).is_integer():
        return float(2 ** int(alpha))

    total = 0.0
    chunk = 1 << 14
    start = 0
    first = 1.0
    while start < max_terms:
        b = frac_binomial_sequence(alpha, chunk + 1, start=start, first=first)
        total += math.fsum(np.abs(b[:-1]))
        start += chunk
        first = float(b[-1])
        tail = start * abs(first) / alpha
        if tail / start < rtol * total:
            break

    return total + tail


# }}}


# {{{ Stirling numbers


@dataclass(frozen=True)
class StirlingTable:
    r"""Triangle of generalized Stirling numbers :math:`S_c(r, k)`."""

    c: float
    r_max: int
    entries: tuple[tuple[float, ...], ...]
    r"""Row ``r`` holds :math:`S_c(r, k)` for :math:`0 \le k \le r`."""

    def __call__(self, r: int, k: int) -> float:
        if not 0 <= r <= self.r_max:
            raise DomainError(f"row {r} outside table with r_max = {self.r_max}")
        if not 0 <= k <= r:
            return 0.0
        return self.entries[r][k]

    def row(self, r: int) -> tuple[float, ...]:
        return self.entries[r]


def stirling_numbers(c: float, r_max: int) -> StirlingTable:
    """Build the table of generalized Stirling numbers up to row *r_max*."""
    if r_max < 0:
        raise DomainError(f"r_max must be non-negative: {r_max}")

    rows: list[tuple[float, ...]] = [(1.0,)]
    for r in range(r_max):
        prev = rows[-1]
        row = [c ** (r + 1)]
        for k in range(1, r + 1):
            row.append(prev[k - 1] + (c + k) * prev[k])
        row.append(1.0)
        rows.append(tuple(row))

    return StirlingTable(c=float(c), r_max=r_max, entries=tuple(rows))


@lru_cache(maxsize=256)
def _stirling_row(c: float, r: int) -> tuple[float, ...]:
    return stirling_numbers(c, r).row(r)


def stirling_row(c: float, r: int) -> tuple[float, ...]:
    r"""Row :math:`S_c(r, k)`, :math:`k = 0, \dots, r` (cached)."""
    return _stirling_row(float(c), int(r))


# }}}


# {{{ Stirling functions


def _check_bases(c: float, alpha: float, k: int) -> None:
    integral = float(alpha).is_integer()
    for j in range(k + 1):
        base = c + j
        if base < 0 and not integral:
            raise DomainError(
                f"S_c(alpha, k) needs c + j > 0 for non-integer alpha: "
                f"c + {j} = {base}")
        if base == 0 and (alpha < 0 or not integral):
            raise DomainError(f"S_c(alpha, k) is undefined at c + {j} = 0")


def _stirling_terms(c: float, alpha: float, k: int) -> list[float]:
    log_kfact = math.lgamma(k + 1)
    terms = []
    for j in range(k + 1):
        base = c + j
        if base == 0:
            power = 1.0 if alpha == 0 else 0.0
        else:
            power = base ** alpha
        binom = math.exp(log_kfact - math.lgamma(j + 1) - math.lgamma(k - j + 1))
        sign = -1.0 if (k - j) % 2 else 1.0
        terms.append(sign * binom * power)

    return [t / math.exp(log_kfact) for t in terms]


def _stirling_decimal(c: float, alpha: float, k: int, prec: int) -> float:
    ctx = decimal.Context(prec=prec)
    dc = decimal.Decimal(c)
    da = decimal.Decimal(alpha)
    integral = float(alpha).is_integer()

    total = decimal.Decimal(0)
    binom = 1
    for j in range(k + 1):
        base = ctx.add(dc, decimal.Decimal(j))
        if base == 0:
            power = decimal.Decimal(1 if alpha == 0 else 0)
        elif integral:
            power = ctx.power(base, int(alpha))
        else:
            power = ctx.power(base, da)
        term = ctx.multiply(decimal.Decimal(binom), power)
        total = ctx.add(total, term if (k - j) % 2 == 0 else -term)
        binom = binom * (k - j) // (j + 1)

    return float(ctx.divide(total, decimal.Decimal(math.factorial(k))))


def stirling_function(c: float, alpha: float, k: int) -> float:
    r"""Stirling function of the second kind :math:`S_c(\alpha, k)`.

    The alternating sum is added with :func:`math.fsum`. When the ratio of the
    largest term to the result shows that more than
    :data:`CANCELLATION_DIGITS` digits were cancelled, the sum is redone in
    extended decimal precision with enough guard digits to absorb the loss.
    """
    if k < 0:
        raise DomainError(f"k must be non-negative: {k}")
    c = float(c)
    alpha = float(alpha)
    _check_bases(c, alpha, k)

    terms = _stirling_terms(c, alpha, k)
    result = math.fsum(terms)
    biggest = max(abs(t) for t in terms)
    if biggest == 0.0:
        return 0.0

    if result != 0.0 and biggest / abs(result) < 10.0**CANCELLATION_DIGITS:
        return result

    prec = 40
    if result != 0.0:
        prec += int(math.log10(biggest / abs(result))) + 1
    else:
        prec += 17
    value = _stirling_decimal(c, alpha, k, prec)
    # keep adding guard digits until the value is stable
    for _ in range(8):
        if value != 0.0 and biggest / abs(value) < 10.0 ** (prec - 25):
            break
        prec *= 2
        value = _stirling_decimal(c, alpha, k, prec)

    return value


@lru_cache(maxsize=4096)
def _stirling_function_cached(c: float, alpha: float, k: int) -> float:
    return stirling_function(c, alpha, k)


def stirling_function_sequence(c: float, alpha: float, n: int) -> np.ndarray:
    r"""Values :math:`S_c(\alpha, k)` for :math:`k = 0, \dots, n - 1`."""
    return np.array([_stirling_function_cached(float(c), float(alpha), k)
                     for k in range(n)])


# }}}


def b_alpha(alpha: float, k: int, j: int) -> float:
    r"""Gamma ratio :math:`B_\alpha(k, j) = \Gamma(\alpha + k - j)/\Gamma(\alpha)`.

    Evaluated as the finite rising product
    :math:`\prod_{i = 0}^{k - j - 1} (\alpha + i)`.
    """
    if not 0 <= j <= k:
        raise DomainError(f"B_alpha(k, j) needs 0 <= j <= k: k = {k}, j = {j}")

    result = 1.0
    for i in range(k - j):
        result *= alpha + i
    return result
