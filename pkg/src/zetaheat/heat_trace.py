"""Spectral side: sums of exp(-t rho^2) over zero ordinates.

The engine folds the rho <-> -rho symmetry into a factor 2, computes the
exponent t*rho^2 in two-double arithmetic (the ordinates carry ~28 digits;
collapsing them to binary64 costs ~1e-13 at height 1e3, visible in the
1e-11 budget of the small-t discrepancy), and accumulates with exact
(fsum) summation.  Truncation beyond the table is covered by the smooth
density dN/dE = log(E/2pi)/2pi integrated against the Gaussian weight.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import ddouble
from .errors import CoverageError, DomainError
from .quadrature import QuadratureSpec, integrate
from .special_numbers import EULER_GAMMA
from .zeros import ZeroList, load_bundled

DEFAULT_EPSILON = 1e-13
_EXP_UNDERFLOW = 745.0
_CHUNK = 4096


@dataclass(frozen=True)
class TraceReport:
    """One spectral-trace evaluation with its error budget."""

    t: float
    partial_sum: float
    tail_estimate: float
    total: float
    zeros_used: int
    truncation_height: float
    error_budget: float


def _terms_extended(hi: np.ndarray, lo: np.ndarray, t: float) -> np.ndarray:
    sq_hi, sq_lo = ddouble.array_square(hi, lo)
    y_hi, y_lo = ddouble.array_scale(sq_hi, sq_lo, t)
    # exp(-(y_hi + y_lo)) = exp(-y_hi) * (1 - y_lo + O(y_lo^2)); y_lo is
    # below 1 ulp of y_hi so the first-order correction suffices
    return np.exp(-y_hi) * (1.0 - y_lo)


def _terms_standard(hi: np.ndarray, lo: np.ndarray, t: float) -> np.ndarray:
    return np.exp(-t * hi * hi)


def _tail_integral(t: float, T: float, spec: QuadratureSpec) -> float:
    """2 * integral_T^inf log(E/2pi)/(2pi) exp(-t E^2) dE."""
    if t * T * T > _EXP_UNDERFLOW:
        return 0.0
    upper = math.sqrt((_EXP_UNDERFLOW + 10.0) / t)
    if upper <= T:
        return 0.0

    def density(E):
        return np.log(E / (2.0 * math.pi)) / (2.0 * math.pi) * np.exp(-t * E * E)

    return 2.0 * integrate(density, T, upper, spec)


def spectral_trace(t: float, zeros: ZeroList | None = None,
                   epsilon: float = DEFAULT_EPSILON, tail: bool = True,
                   height: float | None = None, mode: str = "extended",
                   jobs: int | None = None) -> TraceReport:
    """Tr exp(-t D^2) = 2 sum_{0 < rho <= T} exp(-t rho^2) + tail model.

    ``height`` truncates the sum below the table height (for convergence
    studies).  With ``tail=False`` the table must cover the height where
    terms fall below epsilon, else CoverageError.  ``mode`` selects the
    two-double exponent path ("extended") or plain binary64 ("standard").
    Chunk partials are combined in fixed index order, so results are
    deterministic for any ``jobs``.
    """
    if t <= 0.0:
        raise DomainError(f"spectral_trace requires t > 0, got {t}")
    if epsilon <= 0.0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    if mode not in ("extended", "standard"):
        raise DomainError(f"unknown precision mode {mode!r}")
    zeros = zeros if zeros is not None else load_bundled()

    T_cut = zeros.max_height
    if height is not None:
        if height > zeros.max_height:
            raise CoverageError(
                f"requested truncation height {height} exceeds table height "
                f"{zeros.max_height}", max_available=zeros.max_height)
        T_cut = height
    T_needed = math.sqrt(max(math.log(1.0 / epsilon), 1.0) / t)
    if T_cut < T_needed and not tail:
        raise CoverageError(
            f"zero table reaches {T_cut} but terms stay above epsilon up "
            f"to {T_needed:.1f} and the tail model is disabled",
            max_available=T_cut)

    n_used = int(np.searchsorted(zeros.hi, np.nextafter(T_cut, math.inf),
                                 side="right"))
    # terms beyond the exp underflow height are exactly 0.0 in binary64
    n_live = int(np.searchsorted(zeros.hi,
                                 math.sqrt(_EXP_UNDERFLOW / t) + 1.0,
                                 side="right"))
    n_eval = min(n_used, n_live)
    term_fn = _terms_extended if mode == "extended" else _terms_standard

    chunks = [(s, min(s + _CHUNK, n_eval)) for s in range(0, n_eval, _CHUNK)]

    def chunk_terms(bounds):
        s, e = bounds
        return term_fn(zeros.hi[s:e], zeros.lo[s:e], t)

    if jobs and jobs > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            pieces = list(pool.map(chunk_terms, chunks))
    else:
        pieces = [chunk_terms(c) for c in chunks]
    flat = np.concatenate(pieces) if pieces else np.array([])
    partial = 2.0 * math.fsum(flat)

    tail_estimate = 0.0
    if tail:
        tail_spec = QuadratureSpec(abs_tol=min(epsilon, 1e-13) * 0.1,
                                   rel_tol=1e-10)
        tail_estimate = _tail_integral(t, T_cut, tail_spec)

    # budget: the density model is trusted to a factor 2 (its own size),
    # plus per-term rounding of the exponentials (fsum itself is exact)
    rounding = 4.0 * np.finfo(float).eps * (abs(partial) + 1.0e-300)
    error_budget = tail_estimate + rounding
    return TraceReport(t=t, partial_sum=partial, tail_estimate=tail_estimate,
                       total=partial + tail_estimate, zeros_used=n_eval,
                       truncation_height=T_cut, error_budget=error_budget)


def six_term_approximation(t: float) -> float:
    """The small-t approximation through the linear term:

        log(1/t)/(4 sqrt(pi t)) - gamma/(4 sqrt(pi t))
        - log(4pi)/(2 sqrt(pi t)) + 7/4 + sqrt(t)/(24 sqrt(pi)) + 9t/16
    """
    if t <= 0.0:
        raise DomainError(f"six_term_approximation requires t > 0, got {t}")
    spt = math.sqrt(math.pi * t)
    return math.fsum((
        math.log(1.0 / t) / (4.0 * spt),
        -EULER_GAMMA / (4.0 * spt),
        -math.log(4.0 * math.pi) / (2.0 * spt),
        1.75,
        math.sqrt(t) / (24.0 * math.sqrt(math.pi)),
        9.0 * t / 16.0,
    ))


def discrepancy(t: float, zeros: ZeroList | None = None,
                epsilon: float = 1e-12) -> float:
    """spectral_trace(t).total - six_term_approximation(t).

    Always runs the extended-precision engine; the interesting values sit
    ~10 decades below the two ~1e2-sized operands.
    """
    if epsilon > 1e-12:
        epsilon = 1e-12
    report = spectral_trace(t, zeros, epsilon=epsilon, mode="extended")
    return report.total - six_term_approximation(t)


FIGURE_KINDS = ("trace_vs_a", "discrepancy_vs_a")


def figure_data(kind: str, a_grid, zeros: ZeroList | None = None,
                jobs: int | None = None) -> list[tuple[float, float]]:
    """Rows (a, value) with value = spectral_trace(1/a) or discrepancy(1/a)."""
    if kind not in FIGURE_KINDS:
        raise DomainError(f"unknown figure kind {kind!r}; use {FIGURE_KINDS}")
    a_values = [float(a) for a in a_grid]
    if any(a <= 0.0 for a in a_values):
        raise DomainError("figure grid values must be positive")
    zeros = zeros if zeros is not None else (load_bundled() if a_values else None)

    def value(a: float) -> float:
        if kind == "trace_vs_a":
            return spectral_trace(1.0 / a, zeros).total
        return discrepancy(1.0 / a, zeros)

    if jobs and jobs > 1 and len(a_values) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            vals = list(pool.map(value, a_values))
    else:
        vals = [value(a) for a in a_values]
    return list(zip(a_values, vals))


def write_figure_csv(rows, stream) -> None:
    """CSV per the module interface: header 'a,value', 17 digits, LF."""
    stream.write("a,value\n")
    for a, v in rows:
        stream.write(f"{a:.17g},{v:.17g}\n")
