"""Exact expansion coefficients and the truncated small-t heat-trace sum.

The kernel r(u) = e^{u/2}/(e^u - e^{-u}) - 1/(2u) has a power series
sum b_n u^n convergent for |u| < pi whose coefficients are exact rationals
built from Bernoulli and Euler numbers; the trace coefficients a_n are
exact rational multiples of 1 or pi^{-1/2} tied to b_n by

    a_n = -(2^n Gamma((n+1)/2) / sqrt(pi)) * b_n.

Everything exact lives in Fraction-valued ``ExactCoefficient`` records;
floating evaluation happens only at the edges.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from .errors import DomainError
from .special_numbers import EULER_GAMMA, bernoulli, euler_number

MAX_ORDER_DEFAULT = 60

# switch between the power series and the closed form of r(u); the closed
# form loses ~2 digits to cancellation below this point while 30 series
# terms are accurate to ~1e-25 there
U_SWITCH = 0.25
_SERIES_TERMS = 30


@dataclass(frozen=True)
class ExactCoefficient:
    """A rational number times pi^(pi_power/2), pi_power in {0, -1}."""

    value: Fraction
    pi_power: int = 0

    def __float__(self) -> float:
        if self.pi_power == 0:
            return float(self.value)
        return float(self.value) * math.pi ** (self.pi_power / 2.0)

    def exact_str(self) -> str:
        base = f"{self.value.numerator}/{self.value.denominator}"
        return base if self.pi_power == 0 else f"{base}*pi^-1/2"


def _exact_str(coeff: ExactCoefficient) -> str:
    return coeff.exact_str()


@lru_cache(maxsize=None)
def b_coeff(n: int) -> ExactCoefficient:
    """Series coefficient b_n of r(u); exact rational.

    b_0 = 1/4, b_{2k-1} = -(1 - 2^{1-2k}) B_{2k} / (2 (2k)!),
    b_{2k} = 2^{-2k} E(2k) / (4 (2k)!).
    """
    if n < 0:
        raise DomainError(f"b_coeff needs n >= 0, got {n}")
    if n == 0:
        return ExactCoefficient(Fraction(1, 4))
    if n % 2:  # n = 2k - 1
        k = (n + 1) // 2
        value = -(1 - Fraction(1, 2 ** (2 * k - 1))) * bernoulli(2 * k) \
            / (2 * factorial(2 * k))
    else:      # n = 2k
        k = n // 2
        value = Fraction(euler_number(2 * k), 4 ** (k + 1) * factorial(2 * k))
    return ExactCoefficient(value)


@lru_cache(maxsize=None)
def a_coeff(n: int) -> ExactCoefficient:
    """Trace expansion coefficient a_n; exact.

    a_0 = -1/4; odd a_{2k-1} = Gamma(k)(2^{2k-1}-1) B_{2k} / (2 sqrt(pi) (2k)!)
    carry a pi^{-1/2}; even a_{2k} reduce to the pure rational
    -E(2k) / (4^{k+1} k!).
    """
    if n < 0:
        raise DomainError(f"a_coeff needs n >= 0, got {n}")
    if n == 0:
        return ExactCoefficient(Fraction(-1, 4))
    if n % 2:  # n = 2k - 1
        k = (n + 1) // 2
        value = Fraction(factorial(k - 1) * (2 ** (2 * k - 1) - 1), 1) \
            * bernoulli(2 * k) / (2 * factorial(2 * k))
        return ExactCoefficient(value, pi_power=-1)
    k = n // 2
    return ExactCoefficient(Fraction(-euler_number(2 * k),
                                     4 ** (k + 1) * factorial(k)))


@dataclass(frozen=True)
class CoefficientTable:
    """Immutable table of a_n and b_n up to max_order."""

    max_order: int
    b: tuple[ExactCoefficient, ...]
    a: tuple[ExactCoefficient, ...]

    @classmethod
    def build(cls, max_order: int = MAX_ORDER_DEFAULT) -> "CoefficientTable":
        if max_order < 0:
            raise DomainError(f"max_order must be >= 0, got {max_order}")
        return cls(max_order=max_order,
                   b=tuple(b_coeff(n) for n in range(max_order + 1)),
                   a=tuple(a_coeff(n) for n in range(max_order + 1)))

    def check_relation(self) -> None:
        """a_n = -(2^n Gamma((n+1)/2)/sqrt(pi)) b_n, exactly in rationals."""
        from .special_numbers import gamma_half_integer
        for n in range(self.max_order + 1):
            an, bn = self.a[n], self.b[n]
            if n % 2 == 0:
                # Gamma((n+1)/2) = q sqrt(pi): the sqrt(pi) factors cancel
                q, _ = gamma_half_integer(n // 2)
                expected = -(2 ** n) * q * bn.value
                ok = an.value == expected and an.pi_power == 0
            else:
                g = Fraction(factorial((n + 1) // 2 - 1))
                expected = -(2 ** n) * g * bn.value
                ok = an.value == expected and an.pi_power == -1
            if not ok:
                raise ArithmeticError(f"coefficient relation fails at n={n}")

    def export_csv(self, stream) -> None:
        """Write 'n,a_exact,a_float,b_exact,b_float' rows; floats at 17 digits."""
        stream.write("n,a_exact,a_float,b_exact,b_float\n")
        for n in range(self.max_order + 1):
            an, bn = self.a[n], self.b[n]
            stream.write(f"{n},{_exact_str(an)},{float(an):.17g},"
                         f"{_exact_str(bn)},{float(bn):.17g}\n")


_table_lock = threading.Lock()
_default_table: CoefficientTable | None = None


def default_table() -> CoefficientTable:
    global _default_table
    if _default_table is None:
        with _table_lock:
            if _default_table is None:
                _default_table = CoefficientTable.build()
    return _default_table


@lru_cache(maxsize=1)
def _series_floats() -> tuple[float, ...]:
    return tuple(float(b_coeff(n)) for n in range(_SERIES_TERMS + 1))


def _r_series(u):
    acc = 0.0
    for c in reversed(_series_floats()):
        acc = acc * u + c
    return acc


def _r_closed(u):
    # e^{u/2}/(e^u - e^{-u}) = e^{-u/2}/(1 - e^{-2u}), stable for u >= U_SWITCH
    return np.exp(-0.5 * u) / (-np.expm1(-2.0 * u)) - 0.5 / u


def r_function(u):
    """r(u) = e^{u/2}/(e^u - e^{-u}) - 1/(2u) for u > 0.

    Power series below U_SWITCH, closed form above; the two branches agree
    to ~1e-15 at the joint.  Accepts scalars or numpy arrays.
    """
    if np.isscalar(u):
        if u <= 0.0:
            raise DomainError(f"r_function requires u > 0, got {u}")
        if u < U_SWITCH:
            return float(_r_series(u))
        return float(_r_closed(u))
    arr = np.asarray(u, dtype=float)
    if arr.size and arr.min() <= 0.0:
        raise DomainError("r_function requires u > 0")
    small = arr < U_SWITCH
    out = np.empty_like(arr)
    if small.any():
        out[small] = _r_series(arr[small])
    if (~small).any():
        out[~small] = _r_closed(arr[~small])
    return out


def leading_log_term(t: float) -> float:
    """log(1/t) / (4 sqrt(pi t))."""
    return math.log(1.0 / t) / (4.0 * math.sqrt(math.pi * t))


def leading_const_term(t: float) -> float:
    """-(log 4pi + gamma/2) / (2 sqrt(pi t))."""
    return -(math.log(4.0 * math.pi) + 0.5 * EULER_GAMMA) \
        / (2.0 * math.sqrt(math.pi * t))


@dataclass(frozen=True)
class ExpansionValue:
    """One evaluation of the truncated expansion, split by provenance."""

    t: float
    order: int
    divergent_part: float
    exponential_part: float
    series_part: float
    total: float


def evaluate_expansion(t: float, order: int,
                       table: CoefficientTable | None = None) -> ExpansionValue:
    """Divergent terms + 2 e^{t/4} + sum_{n<=order} a_n t^{n/2}."""
    if t <= 0.0:
        raise DomainError(f"evaluate_expansion requires t > 0, got {t}")
    table = table or default_table()
    if order < 0 or order > table.max_order:
        raise DomainError(
            f"order must be in [0, {table.max_order}], got {order}")
    divergent = leading_log_term(t) + leading_const_term(t)
    exponential = 2.0 * math.exp(0.25 * t)
    sqrt_t = math.sqrt(t)
    series = math.fsum(float(table.a[n]) * sqrt_t ** n
                       for n in range(order + 1))
    total = math.fsum((divergent, exponential, series))
    return ExpansionValue(t=t, order=order, divergent_part=divergent,
                          exponential_part=exponential, series_part=series,
                          total=total)


def optimal_truncation(t: float,
                       table: CoefficientTable | None = None) -> int:
    """Order n* minimizing |a_n t^{n/2}|; ties resolve to the smaller n."""
    if t <= 0.0:
        raise DomainError(f"optimal_truncation requires t > 0, got {t}")
    table = table or default_table()
    sqrt_t = math.sqrt(t)
    best_n, best = 0, abs(float(table.a[0]))
    for n in range(1, table.max_order + 1):
        mag = abs(float(table.a[n])) * sqrt_t ** n
        if mag < best:
            best_n, best = n, mag
    return best_n


# --- Taylor-remainder machinery for R(u) = u e^{u/2}/sinh(u) - 1 -----------

def _R_complex(z: complex) -> complex:
    """R(z) = 2 z r(z); series near 0, else a cancellation-free closed form."""
    if abs(z) < U_SWITCH:
        acc = 0.0 + 0.0j
        for c in reversed(_series_floats()):
            acc = acc * z + c
        return 2.0 * z * acc
    import cmath
    # 2z e^{-z/2}/(1 - e^{-2z}) - 1, valid away from z = i k pi
    return 2.0 * z * cmath.exp(-0.5 * z) / (1.0 - cmath.exp(-2.0 * z)) - 1.0


_CAUCHY_RADIUS = 2.5   # poles of R sit at i k pi, distance >= pi from the axis
_CAUCHY_NODES = 256


def _derivative_abs(n: int, u: float) -> float:
    """|R^(n)(u)| by the Cauchy integral on a radius-2.5 circle."""
    j = np.arange(_CAUCHY_NODES)
    theta = 2.0 * math.pi * j / _CAUCHY_NODES
    ring = _CAUCHY_RADIUS * np.exp(1j * theta)
    vals = np.array([_R_complex(complex(u + z)) for z in ring])
    mean = np.mean(vals * np.exp(-1j * n * theta))
    return abs(mean) * factorial(n) / _CAUCHY_RADIUS ** n


_sup_cache: dict[int, float] = {}
_sup_lock = threading.Lock()


def derivative_sup(n: int) -> float:
    """c_n = sup over u >= 0 of |R^(n)(u)|.

    Grid scan (dense near 0 where the sup lives, coarse out to 200) with a
    golden-section polish around the best grid point.
    """
    if n < 0:
        raise DomainError(f"derivative_sup needs n >= 0, got {n}")
    with _sup_lock:
        if n in _sup_cache:
            return _sup_cache[n]
    grid = np.concatenate([np.arange(0.0, 30.0, 0.25),
                           np.arange(30.0, 200.1, 5.0)])
    vals = [_derivative_abs(n, float(u)) for u in grid]
    i = int(np.argmax(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - phi * (hi - lo)
    x2 = lo + phi * (hi - lo)
    f1 = _derivative_abs(n, x1)
    f2 = _derivative_abs(n, x2)
    for _ in range(40):
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + phi * (hi - lo)
            f2 = _derivative_abs(n, x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - phi * (hi - lo)
            f1 = _derivative_abs(n, x1)
    sup = max(max(vals), f1, f2)
    with _sup_lock:
        _sup_cache[n] = sup
    return sup


def remainder_bound(t: float, k: int) -> float:
    """Bound on the order-k truncation error of the archimedean series:

        c_{k+1} Gamma((k+1)/2) 2^{k-1} t^{k/2} / (sqrt(pi) (k+1)!)

    with c_{k+1} the numerically estimated sup of |R^(k+1)| on [0, inf).
    """
    if t <= 0.0:
        raise DomainError(f"remainder_bound requires t > 0, got {t}")
    if k < 0:
        raise DomainError(f"remainder_bound requires k >= 0, got {k}")
    c = derivative_sup(k + 1)
    return c * math.gamma((k + 1) / 2.0) * 2.0 ** (k - 1) * t ** (k / 2.0) \
        / (math.sqrt(math.pi) * factorial(k + 1))
