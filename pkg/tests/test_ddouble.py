"""Tests for the double-double arithmetic layer."""

import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetaheat.ddouble import (DD, array_scale, array_square, quick_two_sum,
                              split, two_prod, two_sum)
from zetaheat.ddouble import exp as dd_exp

# keep magnitudes where products stay in the normal range: the transforms
# are exact there (and that is the engine's entire operating regime)
finite = st.floats(min_value=-1e15, max_value=1e15,
                   allow_nan=False, allow_infinity=False).filter(
    lambda x: x == 0.0 or abs(x) > 1e-140)


class TestErrorFreeTransforms:
    @settings(max_examples=200, deadline=None)
    @given(finite, finite)
    def test_two_sum_exact(self, a, b):
        s, e = two_sum(a, b)
        assert Fraction(s) + Fraction(e) == Fraction(a) + Fraction(b)

    @settings(max_examples=200, deadline=None)
    @given(finite, finite)
    def test_two_prod_exact(self, a, b):
        p, e = two_prod(a, b)
        assert Fraction(p) + Fraction(e) == Fraction(a) * Fraction(b)

    @settings(max_examples=100, deadline=None)
    @given(finite)
    def test_split_reassembles(self, a):
        hi, lo = split(a)
        assert hi + lo == a
        assert Fraction(hi) + Fraction(lo) == Fraction(a)

    def test_quick_two_sum_ordered(self):
        s, e = quick_two_sum(1.0, 1e-20)
        assert s == 1.0 and e == 1e-20


class TestDD:
    def test_from_decimal_round_trip(self):
        text = "14.13472514173469379045725198"
        d = DD.from_decimal(text)
        exact = Fraction(text)
        reconstructed = Fraction(d.hi) + Fraction(d.lo)
        # the double-double nearest value is within 2^-104 relative
        assert abs(reconstructed - exact) / exact < Fraction(1, 2 ** 100)

    def test_arithmetic_vs_fraction(self):
        a = DD.from_decimal("3.14159265358979323846264338327950288")
        b = DD.from_decimal("2.71828182845904523536028747135266250")
        fa = Fraction(a.hi) + Fraction(a.lo)
        fb = Fraction(b.hi) + Fraction(b.lo)
        for ours, exact in (
            (a + b, fa + fb),
            (a - b, fa - fb),
            (a * b, fa * fb),
            (a / b, fa / fb),
        ):
            got = Fraction(ours.hi) + Fraction(ours.lo)
            assert abs(got - exact) <= abs(exact) / 2 ** 98

    def test_exp_against_mpmath(self):
        # below ~1e-290 the lo component sinks into denormals and the
        # representation itself caps accuracy, so stay above that
        with mpmath.workdps(50):
            for x in (-650.0, -100.25, -1.0, -1e-3, 0.0, 0.5, 10.0, 700.0):
                d = dd_exp(DD(x))
                got = mpmath.mpf(d.hi) + mpmath.mpf(d.lo)
                ref = mpmath.exp(mpmath.mpf(x))
                assert abs(got - ref) <= abs(ref) * mpmath.mpf(2) ** -95

    def test_exp_with_lo_component(self):
        # exp(hi + lo) must track the lo part: argument from a zero square
        rho = DD.from_decimal("9877.782654005501142774099071")
        y = rho * rho * DD(1e-6)
        with mpmath.workdps(60):
            ref = mpmath.exp(-(mpmath.mpf(y.hi) + mpmath.mpf(y.lo)))
            got = dd_exp(-y)
            err = abs(mpmath.mpf(got.hi) + mpmath.mpf(got.lo) - ref)
            assert err <= ref * mpmath.mpf(2) ** -90

    def test_exp_underflow_and_overflow(self):
        assert float(dd_exp(DD(-800.0))) == 0.0
        with pytest.raises(OverflowError):
            dd_exp(DD(800.0))


class TestArrayHelpers:
    def test_array_square_matches_scalar(self):
        hi = np.array([14.134725141734694, 9877.782654005501])
        lo = np.array([-5.8e-16, 1.4e-13])
        sq_hi, sq_lo = array_square(hi, lo)
        for i in range(2):
            exact = (Fraction(hi[i]) + Fraction(lo[i])) ** 2
            got = Fraction(float(sq_hi[i])) + Fraction(float(sq_lo[i]))
            assert abs(got - exact) <= exact / 2 ** 95

    def test_array_scale(self):
        hi = np.array([1e4, 123.456])
        lo = np.array([1e-13, -7.7e-15])
        out_hi, out_lo = array_scale(hi, lo, 1e-4)
        for i in range(2):
            exact = (Fraction(hi[i]) + Fraction(lo[i])) * Fraction(1e-4)
            got = Fraction(float(out_hi[i])) + Fraction(float(out_lo[i]))
            assert abs(got - exact) <= abs(exact) / 2 ** 95

    def test_fast_exp_path_matches_dd_exp(self):
        # the trace engine's exp(-y_hi)*(1 - y_lo) shortcut vs full dd exp
        rng = np.random.default_rng(7)
        hi = rng.uniform(10.0, 700.0, size=50)
        lo = hi * rng.uniform(-1e-17, 1e-17, size=50)
        fast = np.exp(-hi) * (1.0 - lo)
        for i in range(50):
            full = dd_exp(DD(-hi[i], -lo[i]))
            assert math.isclose(fast[i], float(full), rel_tol=5e-16)
