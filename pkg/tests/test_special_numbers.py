"""Tests for the exact/floating special-value routines."""

import math
from fractions import Fraction
from math import comb

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as scipy_integrate

from zetaheat.errors import DomainError
from zetaheat.special_numbers import (EULER_GAMMA, bernoulli, digamma,
                                      euler_number, gamma_half_integer,
                                      incomplete_gamma0)


def bernoulli_oracle(upto: int) -> list[Fraction]:
    """Akiyama-Tanigawa triangle; independent of the library recurrence."""
    A = [Fraction(0)] * (upto + 1)
    out = []
    for m in range(upto + 1):
        A[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            A[j - 1] = j * (A[j - 1] - A[j])
        out.append(A[0])
    # AT yields B_1 = +1/2; even indices agree with both conventions
    return out


def euler_oracle(upto: int) -> list[int]:
    """Signed secant numbers via the boustrophedon (zigzag) triangle.

    Entirely unrelated to the double-sum definition, so it provides an
    independent cross-check of the small values.
    """
    row = [1]
    zig = [1]
    for n in range(1, 2 * upto + 1):
        new = [0]
        for v in reversed(row):
            new.append(new[-1] + v)
        row = new
        zig.append(row[-1])
    return [(-1) ** n * zig[2 * n] for n in range(upto + 1)]


class TestBernoulli:
    def test_base_case(self):
        assert bernoulli(0) == Fraction(1)

    def test_against_defining_recurrence(self):
        oracle = bernoulli_oracle(24)
        for k in range(0, 13):
            assert bernoulli(2 * k) == oracle[2 * k]

    def test_frozen_values(self):
        assert bernoulli(2) == Fraction(1, 6)
        assert bernoulli(4) == Fraction(-1, 30)

    @pytest.mark.parametrize("bad", [-2, 1, 3, 7])
    def test_domain(self, bad):
        with pytest.raises(DomainError):
            bernoulli(bad)

    def test_factorial_ratio_asymptotics(self):
        # B_{2n}/(2n)! -> (-1)^{n+1} 2 (2 pi)^{-2n}; deviation ~ 2^{-2n}
        deviations = []
        for n in range(1, 41):
            lhs = bernoulli(2 * n) / math.factorial(2 * n)
            with mpmath.workdps(60):
                rhs = (-1) ** (n + 1) * 2 * (2 * mpmath.pi) ** (-2 * n)
                deviations.append(abs(mpmath.mpf(lhs.numerator)
                                      / lhs.denominator / rhs - 1))
        assert deviations[19] < 1e-10
        assert all(b < a for a, b in zip(deviations, deviations[1:]))
        assert deviations[-1] < 1e-20


class TestEulerNumber:
    def test_direct_double_sum(self):
        # the defining formula evaluated naively in Fractions
        def direct(two_n):
            total = Fraction(0)
            for k in range(1, two_n + 1):
                inner = sum((-1) ** j * comb(2 * k, j) * (k - j) ** two_n
                            for j in range(2 * k + 1))
                total += Fraction(-1, 2) ** k * inner
            assert total.denominator == 1
            return int(total)

        for two_n in (2, 4, 6, 8, 10, 14):
            assert euler_number(two_n) == direct(two_n)

    def test_frozen_values(self):
        assert euler_number(2) == -1
        assert euler_number(4) == 5
        assert euler_number(6) == -61
        assert euler_number(8) == 1385

    def test_against_zigzag_triangle(self):
        oracle = euler_oracle(10)
        for n in range(1, 11):
            assert euler_number(2 * n) == oracle[n]

    def test_parity_sign(self):
        for n in range(1, 41):
            value = euler_number(2 * n)
            assert value != 0
            assert (value > 0) == (n % 2 == 0)

    def test_rejects_zero_and_odd(self):
        with pytest.raises(DomainError):
            euler_number(0)
        with pytest.raises(DomainError):
            euler_number(3)

    def test_factorial_ratio_asymptotics(self):
        # 2^{-2n} E(2n)/(2n)! -> (-1)^n (4/pi) pi^{-2n}
        n = 20
        lhs = Fraction(euler_number(2 * n), math.factorial(2 * n)) / 4 ** n
        rhs = (-1) ** n * (4.0 / math.pi) * math.pi ** (-2 * n)
        assert abs(float(lhs) / rhs - 1.0) < 1e-8


class TestGammaHalfInteger:
    def test_frozen(self):
        assert gamma_half_integer(0) == (Fraction(1), True)
        assert gamma_half_integer(1) == (Fraction(1, 2), True)
        assert gamma_half_integer(2) == (Fraction(3, 4), True)

    def test_recurrence(self):
        # Gamma(z+1) = z Gamma(z) with z = k + 1/2
        for k in range(0, 30):
            q, _ = gamma_half_integer(k)
            q_next, _ = gamma_half_integer(k + 1)
            assert q_next == q * (Fraction(2 * k + 1, 2))

    def test_float_against_math_gamma(self):
        for k in range(0, 20):
            q, flag = gamma_half_integer(k)
            assert flag is True
            assert math.isclose(float(q) * math.sqrt(math.pi),
                                math.gamma(k + 0.5), rel_tol=1e-14)

    def test_domain(self):
        with pytest.raises(DomainError):
            gamma_half_integer(-1)


class TestDigamma:
    def test_reference_points(self):
        assert abs(digamma(1.0) + EULER_GAMMA) < 1e-15
        assert abs(digamma(2.0) - (1.0 - EULER_GAMMA)) < 1e-15
        assert abs(digamma(1.5) - (-2.0 * math.log(2.0) + 2.0 - EULER_GAMMA)) \
            < 1e-15

    def test_duplication_identity_grid(self):
        # psi(z) + psi(z + 1/2) = -2 log 2 + 2 psi(2z) on 100 points
        for i in range(100):
            z = complex(0.25 + 1.75 * i / 99.0, (i % 7) * 1.3)
            lhs = digamma(z) + digamma(z + 0.5)
            rhs = -2.0 * math.log(2.0) + 2.0 * digamma(2.0 * z)
            assert abs(lhs - rhs) <= 1e-13 * max(1.0, abs(rhs))

    def test_against_mpmath_on_strip(self):
        for z in (0.2 + 0j, 0.25 + 5j, 0.25 + 123.456j, 2.0 + 1e4j,
                  1.0 - 300j, 0.9 + 0.1j):
            ours = digamma(complex(z))
            ref = complex(mpmath.digamma(z))
            assert abs(ours - ref) <= 1e-14 * abs(ref)

    def test_real_in_real_out(self):
        assert isinstance(digamma(1.5), float)
        assert isinstance(digamma(1.5 + 0j), complex)

    def test_pole_side_rejected(self):
        for bad in (0.0, -1.0, -0.5, complex(-2.0, 0.0)):
            with pytest.raises(DomainError):
                digamma(bad)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(min_value=0.2, max_value=2.0),
           st.floats(min_value=-100.0, max_value=100.0))
    def test_conjugate_symmetry(self, re, im):
        z = complex(re, im)
        assert digamma(z.conjugate()) == digamma(z).conjugate()


class TestIncompleteGamma0:
    def test_value_at_one(self):
        # oracle: adaptive quadrature of the defining integral
        val, err = scipy_integrate.quad(lambda u: math.exp(-u) / u, 1.0,
                                        math.inf, epsabs=1e-14, epsrel=1e-13)
        assert err < 1e-12
        assert abs(incomplete_gamma0(1.0) - val) < 1e-13
        assert abs(incomplete_gamma0(1.0) - 0.21938393439552028) < 1e-15

    def test_large_argument_asymptote(self):
        a = 50.0
        assert abs(incomplete_gamma0(a) - math.exp(-a) / a) \
            <= 0.025 * math.exp(-a) / a

    def test_monotone_decay_to_zero(self):
        values = [incomplete_gamma0(a) for a in (1.0, 5.0, 25.0, 125.0,
                                                 625.0, 3125.0)]
        assert all(v > 0.0 or v == 0.0 for v in values)
        assert all(b < a for a, b in zip(values, values[1:]) if a > 0.0)
        assert incomplete_gamma0(1e6) == 0.0  # underflow region

    def test_against_mpmath(self):
        for a in (0.01, 0.1, 0.5, 0.999, 1.0, 1.001, 2.0, 10.0, 100.0, 700.0):
            ref = float(mpmath.e1(a))
            ours = incomplete_gamma0(a)
            assert abs(ours - ref) <= 1e-14 * max(ref, 1e-300)

    def test_flattening_identity(self):
        # Gamma(0,a) = e^-a/a * int_0^inf e^-x/(1 + x/a) dx
        for a in (0.7, 3.0, 20.0):
            val, err = scipy_integrate.quad(
                lambda x: math.exp(-x) / (1.0 + x / a), 0.0, math.inf,
                epsabs=1e-14, epsrel=1e-13)
            assert abs(incomplete_gamma0(a) - math.exp(-a) / a * val) \
                <= 1e-12 * incomplete_gamma0(a) + 1e-16

    def test_domain(self):
        for bad in (0.0, -1.0):
            with pytest.raises(DomainError):
                incomplete_gamma0(bad)
