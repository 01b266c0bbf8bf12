"""Tests for the quadrature drivers."""

import math

import numpy as np
import pytest

from zetaheat.errors import AccuracyError, DomainError
from zetaheat.quadrature import (QuadratureSpec, adaptive_gauss, integrate,
                                 tanh_sinh)


class TestSpecValidation:
    def test_defaults(self):
        spec = QuadratureSpec()
        assert spec.scheme == "double-exponential"
        assert spec.max_refinements >= 1

    def test_rejects_no_tolerance(self):
        with pytest.raises(DomainError):
            QuadratureSpec(abs_tol=0.0, rel_tol=0.0)
        with pytest.raises(DomainError):
            QuadratureSpec(abs_tol=math.inf, rel_tol=math.inf)

    def test_rejects_bad_scheme_and_budget(self):
        with pytest.raises(DomainError):
            QuadratureSpec(scheme="monte-carlo")
        with pytest.raises(DomainError):
            QuadratureSpec(max_refinements=0)

    def test_one_sided_tolerance_ok(self):
        QuadratureSpec(abs_tol=1e-10, rel_tol=math.inf)
        QuadratureSpec(abs_tol=math.inf, rel_tol=1e-10)


GAUSSIAN = lambda x: np.exp(-x * x)  # noqa: E731


@pytest.mark.parametrize("method", [tanh_sinh, adaptive_gauss])
class TestSchemes:
    def test_polynomial(self, method):
        got = method(lambda x: 3.0 * x * x, 0.0, 2.0)
        assert math.isclose(got, 8.0, rel_tol=1e-13)

    def test_gaussian_against_erf(self, method):
        got = method(GAUSSIAN, 0.0, 10.0)
        assert math.isclose(got, math.sqrt(math.pi) / 2.0 * math.erf(10.0),
                            rel_tol=1e-13)

    def test_orientation_and_degenerate(self, method):
        assert method(GAUSSIAN, 1.0, 1.0) == 0.0
        fwd = method(GAUSSIAN, 0.0, 1.0)
        assert math.isclose(method(GAUSSIAN, 1.0, 0.0), -fwd, rel_tol=1e-13)

    def test_scalar_wrapper(self, method):
        got = method(lambda x: math.sin(x), 0.0, math.pi, vectorize=False)
        assert math.isclose(got, 2.0, rel_tol=1e-12)

    def test_endpoint_never_evaluated(self, method):
        def f(x):
            # would raise on exact endpoints
            return np.where((x <= 0.0) | (x >= 1.0), np.nan, np.sqrt(x))

        got = method(f, 0.0, 1.0)
        assert not math.isnan(got)
        assert math.isclose(got, 2.0 / 3.0, rel_tol=1e-10)

    def test_nonconvergence_reports_best_estimate(self, method):
        spec = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-300,
                              max_refinements=2)
        with pytest.raises(AccuracyError) as exc_info:
            method(GAUSSIAN, 0.0, 3.0, spec)
        err = exc_info.value
        assert err.best_estimate is not None
        assert math.isclose(err.best_estimate,
                            math.sqrt(math.pi) / 2.0 * math.erf(3.0),
                            rel_tol=1e-3)
        assert err.residual is not None and err.residual >= 0.0


class TestIntegrateDispatch:
    def test_scheme_selection(self):
        de = integrate(GAUSSIAN, 0.0, 5.0,
                       QuadratureSpec(scheme="double-exponential"))
        ag = integrate(GAUSSIAN, 0.0, 5.0,
                       QuadratureSpec(scheme="adaptive-gauss"))
        assert math.isclose(de, ag, rel_tol=1e-13)

    def test_interior_bump_resolved(self):
        # narrow bump; adaptive refinement must find it
        bump = lambda x: np.exp(-((x - 37.5) ** 2) * 400.0)  # noqa: E731
        expected = math.sqrt(math.pi / 400.0)
        got = integrate(bump, 0.0, 100.0,
                        QuadratureSpec(scheme="adaptive-gauss",
                                       abs_tol=1e-14, rel_tol=1e-12,
                                       max_refinements=40))
        assert math.isclose(got, expected, rel_tol=1e-10)

    def test_tolerance_is_honored_not_overshot(self):
        # loose tolerance must still produce a correct leading answer
        loose = QuadratureSpec(abs_tol=1e-4, rel_tol=1e-4,
                               scheme="adaptive-gauss")
        got = integrate(GAUSSIAN, 0.0, 10.0, loose)
        assert abs(got - math.sqrt(math.pi) / 2.0) < 1e-4
