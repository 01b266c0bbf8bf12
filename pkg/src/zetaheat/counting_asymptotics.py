"""From the counting-function model to the divergent heat-trace terms.

The smooth model n(x) = 2x(log(x/2pi) - 1)/(2pi) (twice the counting
model, accounting for the +-rho symmetry) integrated against the Gaussian
weight 2tx e^{-tx^2} reproduces, as t -> 0, exactly the two divergent
terms of the trace expansion.  This module evaluates the three integrals
involved (R: the log remainder weight, I: the x log x piece, J: the full
model) by quadrature, their closed-form asymptotes, and the residual
check against the spectral trace.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, DomainError
from .expansion import leading_const_term, leading_log_term
from .heat_trace import spectral_trace
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate
from .special_numbers import EULER_GAMMA, incomplete_gamma0
from .zeros import ZeroList

# Gamma'/Gamma(3/2) in closed form, as pinned by the duplication identity
PSI_THREE_HALVES = 2.0 - EULER_GAMMA - 2.0 * math.log(2.0)


@dataclass(frozen=True)
class LeadingTerms:
    """The two divergent terms of the small-t trace expansion."""

    t: float
    log_term: float
    const_term: float

    @classmethod
    def from_t(cls, t: float) -> "LeadingTerms":
        if t <= 0.0:
            raise DomainError(f"LeadingTerms needs t > 0, got {t}")
        return cls(t=t, log_term=leading_log_term(t),
                   const_term=leading_const_term(t))

    @property
    def total(self) -> float:
        return self.log_term + self.const_term


def n_model(x):
    """2x (log(x/2pi) - 1) / (2pi); scalar or array."""
    if np.isscalar(x):
        if x <= 0.0:
            raise DomainError(f"n_model requires x > 0, got {x}")
        return 2.0 * x * (math.log(x / (2.0 * math.pi)) - 1.0) / (2.0 * math.pi)
    arr = np.asarray(x, dtype=float)
    return 2.0 * arr * (np.log(arr / (2.0 * math.pi)) - 1.0) / (2.0 * math.pi)


def _upper_cutoff(t: float, tol: float, scale: float) -> float:
    """x with scale * 2tx * e^{-t x^2} below tol (generous margin)."""
    arg = max(math.log(max(scale / tol, 10.0)), 1.0) + 12.0
    return math.sqrt(arg / t)


def _weighted_integral(g, t: float, spec: QuadratureSpec,
                       scale: float) -> float:
    """integral_1^inf g(x) 2tx e^{-t x^2} dx, on the log-substituted axis.

    y = log x keeps the Gaussian bump mid-interval for every t, which both
    schemes resolve without special casing.
    """
    xmax = max(_upper_cutoff(t, min(spec.abs_tol, 1e-10), scale), 2.0)

    def integrand(y):
        x = np.exp(y)
        return g(x) * 2.0 * t * x * np.exp(-t * x * x) * x

    return integrate(integrand, 0.0, math.log(xmax), spec)


def R_integral(t: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """integral_1^inf log(x) 2tx e^{-tx^2} dx == Gamma(0, t)/2.

    Evaluates both sides; returns the closed form, raising AccuracyError
    if the quadrature disagrees beyond ~10x the requested tolerance.
    """
    if t <= 0.0:
        raise DomainError(f"R_integral requires t > 0, got {t}")
    closed = incomplete_gamma0(t) / 2.0
    quad = _weighted_integral(np.log, t, spec, scale=10.0)
    gap = abs(quad - closed)
    allowance = 10.0 * spec.target(closed) + 1e-13 * abs(closed)
    if gap > allowance:
        raise AccuracyError(
            f"R_integral quadrature {quad!r} disagrees with closed form "
            f"{closed!r} by {gap:.3e}", best_estimate=closed, residual=gap)
    return closed


def I_integral(t: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """(1/pi) integral_1^inf x log(x) 2tx e^{-tx^2} dx, by quadrature."""
    if t <= 0.0:
        raise DomainError(f"I_integral requires t > 0, got {t}")
    scale = 2.0 / (math.pi * math.e * t)  # sup of x log x weight factor
    return _weighted_integral(lambda x: x * np.log(x) / math.pi, t, spec,
                              scale=max(scale, 10.0))


def i_asymptote(t: float) -> float:
    """(-2 log 2 + 2 - gamma - log t) / (4 sqrt(pi t)); I(t) up to O(t)."""
    return (PSI_THREE_HALVES - math.log(t)) / (4.0 * math.sqrt(math.pi * t))


def J_integral(t: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """integral_1^inf n(x) 2tx e^{-tx^2} dx, by quadrature."""
    if t <= 0.0:
        raise DomainError(f"J_integral requires t > 0, got {t}")
    scale = max(2.0 / (math.pi * math.e * t), 10.0)
    return _weighted_integral(n_model, t, spec, scale=scale)


def j_asymptote(t: float) -> float:
    """(-log t - 2 - 2 log 2pi + Gamma'/Gamma(3/2)) / (4 sqrt(pi t))."""
    return (-math.log(t) - 2.0 - 2.0 * math.log(2.0 * math.pi)
            + PSI_THREE_HALVES) / (4.0 * math.sqrt(math.pi * t))


@dataclass(frozen=True)
class CountingRow:
    t: float
    J: float
    I: float
    R: float
    leading: float
    residual: float


@dataclass(frozen=True)
class Theorem51Report:
    """Residuals of trace minus divergent terms over a t grid."""

    rows: tuple[CountingRow, ...]
    envelope: float  # fitted C in |residual| <= C log(1/t), over t < 1

    def write_csv(self, stream) -> None:
        stream.write("t,J,I,R,leading,residual\n")
        for r in self.rows:
            stream.write(f"{r.t:.17g},{r.J:.17g},{r.I:.17g},{r.R:.17g},"
                         f"{r.leading:.17g},{r.residual:.17g}\n")


def verify_theorem51(t_grid, zeros: ZeroList | None = None,
                     spec: QuadratureSpec = DEFAULT_SPEC,
                     jobs: int | None = None) -> Theorem51Report:
    """For each t: residual(t) = spectral total - (log + const) terms.

    The envelope constant is fitted, not asserted: the counting hypothesis
    promises only a O(log(1/t)) residual, with no explicit constant.
    """
    ts = [float(t) for t in t_grid]
    if any(t <= 0.0 for t in ts):
        raise DomainError("t grid must be positive")

    def row(t: float) -> CountingRow:
        leading = LeadingTerms.from_t(t).total
        residual = spectral_trace(t, zeros).total - leading
        return CountingRow(t=t, J=J_integral(t, spec), I=I_integral(t, spec),
                           R=R_integral(t, spec), leading=leading,
                           residual=residual)

    if jobs and jobs > 1 and len(ts) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = tuple(pool.map(row, ts))
    else:
        rows = tuple(row(t) for t in ts)
    ratios = [abs(r.residual) / math.log(1.0 / r.t)
              for r in rows if r.t < 1.0]
    envelope = max(ratios) if ratios else math.nan
    return Theorem51Report(rows=rows, envelope=envelope)
