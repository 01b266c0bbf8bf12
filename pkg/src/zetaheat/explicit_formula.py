"""Arithmetic side of the trace identity

    sum_Z exp(-t rho^2) = 2 exp(t/4) - W_R(F_t) - psi(t)

for the Gaussian test family F_t with hat(F_t)(s) = exp(-t s^2):
the prime-power sum psi(t) with its closed-form bound, and the
archimedean term W_R by two independent routes (a four-piece real
integral decomposition and a digamma contour integral) that share no
code and serve as each other's check.
"""

from __future__ import annotations

import json
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import AccuracyError, DomainError
from .expansion import r_function
from .heat_trace import spectral_trace
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate
from .special_numbers import EULER_GAMMA, bernoulli, digamma, incomplete_gamma0
from .zeros import ZeroList

PSI_T0 = math.log(6.0) / 8.0  # validity edge of the prime-sum bound


@dataclass(frozen=True)
class GaussianTestFunction:
    """The test function F_t: F_t(e^y) = exp(-y^2/(4t)) / (2 sqrt(pi t))."""

    t: float

    def __post_init__(self):
        if self.t <= 0.0:
            raise DomainError(f"GaussianTestFunction needs t > 0, got {self.t}")

    def at_one(self) -> float:
        return 1.0 / (2.0 * math.sqrt(math.pi * self.t))

    def log_value(self, y):
        """F_t(e^y); even in y."""
        return np.exp(-np.square(y) / (4.0 * self.t)) * self.at_one()

    def value(self, x):
        """F_t(x) for x > 0."""
        return self.log_value(np.log(x))

    def hat(self, s):
        """Multiplicative Fourier transform: exp(-t s^2)."""
        return np.exp(-self.t * np.square(s))


# --- von Mangoldt function and the prime sum --------------------------------

_SIEVE_START = 1 << 20
_sieve_lock = threading.Lock()
_sieve_primes: np.ndarray | None = None
_sieve_limit = 0


def _primes_up_to(limit: int) -> np.ndarray:
    """Cached ascending primes <= limit, regrown by doubling."""
    global _sieve_primes, _sieve_limit
    if limit <= _sieve_limit and _sieve_primes is not None:
        return _sieve_primes[:np.searchsorted(_sieve_primes, limit, "right")]
    with _sieve_lock:
        if limit > _sieve_limit or _sieve_primes is None:
            new_limit = max(limit, _SIEVE_START, 2 * _sieve_limit)
            mask = np.ones(new_limit + 1, dtype=bool)
            mask[:2] = False
            for p in range(2, math.isqrt(new_limit) + 1):
                if mask[p]:
                    mask[p * p:: p] = False
            _sieve_primes = np.nonzero(mask)[0]
            _sieve_limit = new_limit
        return _sieve_primes[:np.searchsorted(_sieve_primes, limit, "right")]


def von_mangoldt(n: int) -> float:
    """Lambda(n): log p when n = p^m for a prime p, else 0."""
    if n < 1:
        raise DomainError(f"von_mangoldt requires n >= 1, got {n}")
    if n == 1:
        return 0.0
    m = n
    for p in _primes_up_to(math.isqrt(n)):
        if m % p == 0:
            while m % p == 0:
                m //= p
            return math.log(p) if m == 1 else 0.0
    return math.log(n)  # no factor <= sqrt(n): n is prime


_mangoldt_lock = threading.Lock()
_mangoldt_table: np.ndarray | None = None


def mangoldt_array(limit: int) -> np.ndarray:
    """Lambda(0..limit) as a dense float array (prime-power marking)."""
    global _mangoldt_table
    with _mangoldt_lock:
        if _mangoldt_table is None or len(_mangoldt_table) <= limit:
            primes = _primes_up_to(max(limit, 1000))
            table = np.zeros(max(limit, 1000) + 1)
            table[primes] = np.log(primes.astype(float))
            for p in primes[primes <= math.isqrt(len(table) - 1)]:
                logp = math.log(p)
                q = p * p
                while q < len(table):
                    table[q] = logp
                    q *= p
            _mangoldt_table = table
        return _mangoldt_table[:limit + 1]


_PRIME_SUM_CAP = 20_000_000


def _prime_tail_bound(t: float, L: float) -> float:
    """Upper bound on the prime-sum tail over n > e^L.

    Integral comparison after y = log n; the Gaussian factor completes the
    square to exp(t/4) * exp(-(y-t)^2/(4t)).
    """
    z0 = (L - t) / (2.0 * math.sqrt(t))
    if z0 <= 0.0:
        return math.inf
    body = math.exp(min(t / 4.0, 700.0)) * (
        math.sqrt(math.pi) * t ** 1.5 * math.erfc(z0)
        + 2.0 * t * math.exp(-z0 * z0))
    last = L * math.exp(max(-L / 2.0 - L * L / (4.0 * t), -745.0))
    return (body + last) / math.sqrt(math.pi * t)


def prime_sum(t: float, epsilon: float = 1e-13) -> float:
    """psi(t) = sum_{n>=2} Lambda(n) n^{-1/2} exp(-(log n)^2/(4t)) / sqrt(pi t)

    truncated where the omitted tail is provably below epsilon.
    """
    if t <= 0.0:
        raise DomainError(f"prime_sum requires t > 0, got {t}")
    if epsilon <= 0.0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    L = max(2.0 * math.sqrt(t * max(math.log(1.0 / epsilon), 1.0)) + t,
            math.log(4.0))
    while _prime_tail_bound(t, L) > epsilon:
        L += 0.25
        if math.exp(L) > _PRIME_SUM_CAP:
            raise AccuracyError(
                f"prime_sum cutoff exp({L:.1f}) exceeds the supported bound "
                f"{_PRIME_SUM_CAP}; t = {t} is too large for epsilon = {epsilon}")
    limit = int(math.exp(L)) + 1
    lam = mangoldt_array(limit)
    idx = np.nonzero(lam)[0]
    logs = np.log(idx.astype(float))
    terms = (lam[idx] / np.sqrt(idx.astype(float))
             * np.exp(-logs * logs / (4.0 * t)) / math.sqrt(math.pi * t))
    return math.fsum(terms)


def psi_bound(t: float) -> float:
    """Closed-form bound 4 (pi^2/6 - 1) e^{-(log 2)^2/(4t)} / sqrt(pi t).

    Valid only for 0 < t <= log(6)/8; outside that the bound is not
    asserted and the call is rejected.
    """
    if not 0.0 < t <= PSI_T0:
        raise DomainError(
            f"psi_bound holds for 0 < t <= log(6)/8 ~ {PSI_T0:.5f}, got {t}")
    log2 = math.log(2.0)
    return (4.0 * (math.pi ** 2 / 6.0 - 1.0)
            * math.exp(-log2 * log2 / (4.0 * t)) / math.sqrt(math.pi * t))


# --- archimedean term, route 1: four-piece decomposition ---------------------

def _gaussian_cutoff(t: float, tol: float, scale: float) -> float:
    """u with scale * exp(-u^2/(4t)) <= tol (a hair beyond)."""
    arg = max(math.log(max(scale / tol, 10.0)), 1.0) + 3.0
    return 2.0 * math.sqrt(t * arg)


def w_arch_r_integral(t: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """integral_0^inf 2 F_t(e^u) r(u) du, truncated at the Gaussian cutoff."""
    spt = math.sqrt(math.pi * t)
    cutoff = _gaussian_cutoff(t, spec.abs_tol, 0.25 / spt)

    def integrand(u):
        return np.exp(-u * u / (4.0 * t)) * r_function(u) / spt

    return integrate(integrand, 0.0, cutoff, spec)


def w_arch_second_term_quadrature(t: float,
                                  spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """integral_0^2 (F_t(e^u) - F_t(1)) / u du, by direct quadrature."""
    F1 = 1.0 / (2.0 * math.sqrt(math.pi * t))

    def integrand(u):
        return F1 * np.expm1(-u * u / (4.0 * t)) / u

    return integrate(integrand, 0.0, 2.0, spec)


def w_arch_fourth_term_quadrature(t: float,
                                  spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """integral_2^inf F_t(e^u)/u du, by direct quadrature."""
    F1 = 1.0 / (2.0 * math.sqrt(math.pi * t))
    cutoff = max(_gaussian_cutoff(t, spec.abs_tol, F1), 2.0)
    if cutoff <= 2.0:
        return 0.0

    def integrand(u):
        return F1 * np.exp(-u * u / (4.0 * t)) / u

    return integrate(integrand, 2.0, cutoff, spec)


def w_arch_quadrature(t: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """W_R(F_t) as (log 4pi + gamma) F_t(1) + three integrals.

    The [0,2] piece is evaluated in the closed form
    -(log(1/t) + gamma + Gamma(0,1/t)) / (4 sqrt(pi t)) (its quadrature
    twin is retained above as a cross-check); the semi-infinite r(u) piece
    is quadrature; the [2,inf) piece collapses to Gamma(0,1/t)/(4 sqrt(pi t)).
    """
    if t <= 0.0:
        raise DomainError(f"w_arch_quadrature requires t > 0, got {t}")
    spt = math.sqrt(math.pi * t)
    F1 = 1.0 / (2.0 * spt)
    gamma0 = incomplete_gamma0(1.0 / t)
    term1 = (math.log(4.0 * math.pi) + EULER_GAMMA) * F1
    term2 = -(math.log(1.0 / t) + EULER_GAMMA + gamma0) / (4.0 * spt)
    term3 = w_arch_r_integral(t, spec)
    term4 = gamma0 / (4.0 * spt)
    return math.fsum((term1, term2, term3, term4))


def w_arch_direct(t: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """W_R(F_t) by the original single-integral form (cross-check route).

    The integrand tends to F_t(1)/2 as u -> 0 and decays like e^{-u/2};
    it is written via expm1 differences to avoid cancellation.
    """
    if t <= 0.0:
        raise DomainError(f"w_arch_direct requires t > 0, got {t}")
    F1 = 1.0 / (2.0 * math.sqrt(math.pi * t))
    cutoff = 2.0 * (math.log(max(F1, 2.0) / min(spec.abs_tol, 1e-10)) + 5.0)

    def integrand(u):
        gap = np.expm1(-u * u / (4.0 * t)) - np.expm1(-0.5 * u)
        return 2.0 * F1 * gap * (0.5 / u + r_function(u))

    value = integrate(integrand, 0.0, cutoff, spec)
    return (math.log(4.0 * math.pi) + EULER_GAMMA) * F1 + value


def _sinh_split_coeffs(terms: int = 12) -> tuple[float, ...]:
    # 1/(2 sinh u) - 1/(2u) = sum_{k>=1} (1 - 2^{2k-1}) B_{2k} u^{2k-1} / (2k)!
    return tuple(
        float((1 - 2 ** (2 * k - 1)) * bernoulli(2 * k)
              / math.factorial(2 * k))
        for k in range(1, terms + 1))


_SINH_SPLIT = _sinh_split_coeffs()


def _sinh_minus_pole(u):
    """1/(e^u - e^{-u}) - 1/(2u), stable at small u via the Taylor series."""
    u = np.asarray(u, dtype=float)
    small = u < 0.25
    out = np.empty_like(u)
    if small.any():
        us = u[small]
        u2 = us * us
        acc = np.zeros_like(us)
        for c in reversed(_SINH_SPLIT):
            acc = acc * u2 + c
        out[small] = acc * us
    if (~small).any():
        ub = u[~small]
        out[~small] = 0.5 / np.sinh(ub) - 0.5 / ub
    return out


def splitting_anchor(spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """The split-at-2 identity value

        int_0^2 (1/(e^u-e^{-u}) - 1/(2u)) du + int_2^inf du/(e^u-e^{-u})

    which is exactly 0; returned as computed, for verification.
    """
    first = integrate(_sinh_minus_pole, 0.0, 2.0, spec)

    def tail(u):
        return 0.5 / np.sinh(u)

    cutoff = math.log(1.0 / min(spec.abs_tol, 1e-10)) + 5.0
    second = integrate(tail, 2.0, cutoff, spec)
    return first + second


# --- archimedean term, route 2: digamma contour ------------------------------

def w_arch_digamma(t: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """W_R(F_t) = (log pi) F_t(1) - (1/pi) int_0^inf Re psi(1/4 + is/2) e^{-ts^2} ds.

    The critical-line parametrization of the contour form; the integrand
    is even in s, hence the folded half-line.  Shares no code with the
    route above.
    """
    if t <= 0.0:
        raise DomainError(f"w_arch_digamma requires t > 0, got {t}")
    F1 = 1.0 / (2.0 * math.sqrt(math.pi * t))
    tol = min(spec.abs_tol, 1e-10)
    smax = math.sqrt((math.log(1.0 / tol) + 3.0) / t)
    for _ in range(3):
        growth = math.log(2.0 + abs(math.log(2.0 + smax)))
        smax = math.sqrt((math.log(1.0 / tol) + growth + 3.0) / t)

    def integrand(s: float) -> float:
        return digamma(complex(0.25, 0.5 * s)).real * math.exp(-t * s * s)

    value = integrate(integrand, 0.0, smax, spec, vectorize=False)
    return math.log(math.pi) * F1 - value / math.pi


# --- full identity ------------------------------------------------------------

@dataclass(frozen=True)
class IdentityReport:
    """Residual of the explicit-formula identity at one t."""

    t: float
    spectral: float
    arch_quadrature: float
    arch_digamma: float
    prime: float
    rhs: float
    residual: float
    tolerances: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps({
            "t": self.t,
            "spectral": self.spectral,
            "arch_quadrature": self.arch_quadrature,
            "arch_digamma": self.arch_digamma,
            "prime": self.prime,
            "rhs": self.rhs,
            "residual": self.residual,
            "tolerances": self.tolerances,
        })


def verify_identity(t: float, zeros: ZeroList | None = None,
                    spec: QuadratureSpec = DEFAULT_SPEC,
                    epsilon: float = 1e-12) -> IdentityReport:
    """residual = spectral - (2 e^{t/4} - W_R - psi); exact up to numerics."""
    spectral = spectral_trace(t, zeros, epsilon=epsilon).total
    wq = w_arch_quadrature(t, spec)
    wd = w_arch_digamma(t, spec)
    prime = prime_sum(t, epsilon=min(epsilon, 1e-13))
    rhs = 2.0 * math.exp(0.25 * t) - wq - prime
    return IdentityReport(
        t=t, spectral=spectral, arch_quadrature=wq, arch_digamma=wd,
        prime=prime, rhs=rhs, residual=spectral - rhs,
        tolerances={"epsilon": epsilon, "abs_tol": spec.abs_tol,
                    "rel_tol": spec.rel_tol})


def verify_grid(t_values, zeros: ZeroList | None = None,
                spec: QuadratureSpec = DEFAULT_SPEC, epsilon: float = 1e-12,
                jobs: int | None = None) -> list[IdentityReport]:
    """verify_identity over a grid, optionally in a worker pool."""
    ts = [float(t) for t in t_values]
    if jobs and jobs > 1 and len(ts) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(
                lambda t: verify_identity(t, zeros, spec, epsilon), ts))
    return [verify_identity(t, zeros, spec, epsilon) for t in ts]
