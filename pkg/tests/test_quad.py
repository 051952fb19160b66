import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qsigma.degenerate import sigma2_core
from qsigma.fermi import f2, f2_moment_form
from qsigma.quad import (GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, QuadratureError, QuadResult,
                         integrate, integrate_2d, integrate_finite, integrate_semi_infinite)


def test_rule_constants_are_exact_on_polynomials():
    # K21 integrates degree 31 exactly, G10 degree 19
    for deg in range(0, 32):
        exact = 0.0 if deg % 2 else 2.0 / (deg + 1)
        assert abs(KRONROD_WEIGHTS @ NODES ** deg - exact) < 1e-15
        if deg < 20:
            assert abs(GAUSS_WEIGHTS @ NODES ** deg - exact) < 1e-15
    assert abs(KRONROD_WEIGHTS @ NODES ** 32 - 2.0 / 33) > 1e-12


def test_polynomial():
    r = integrate_finite(lambda t: 1 - t * t, -1, 1, tol=1e-12)
    assert abs(r.value - 4 / 3) <= 1e-12 and r.evaluations >= 21


def test_simple_pole_against_antiderivative():
    w = 1 + 0.5j
    r = integrate_finite(lambda t: 1 / (t - w), -1, 1, tol=1e-12)
    exact = np.log(1 - w) - np.log(-1 - w)
    assert abs(r.value - exact) <= 1e-12 * max(1, abs(exact))


def test_quartic_pair_against_closed_form():
    q, z = 1.0, 0.5 + 0.01j
    r = integrate_finite(lambda t: (1 - t * t) ** 2 / ((q * t - z) ** 2 - q ** 4 / 4), -1, 1,
                         tol=1e-12, points=[0.5, 0.0, 1.0])
    # sigma2 = i 3 y q^2/(16 x) * integral
    closed = sigma2_core(z.real, z.imag, q) / (3j * z.imag * q * q / (16 * z.real))
    assert abs(r.value - closed) <= 1e-10 * abs(closed)


def test_semi_infinite_gaussians():
    r = integrate_semi_infinite(lambda t: np.exp(-t * t))
    assert r.value == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-12)
    r = integrate_semi_infinite(lambda t: t * t * np.exp(-t * t))
    assert r.value == pytest.approx(math.sqrt(math.pi) / 4, rel=1e-12)
    r = integrate(lambda t: np.exp(-t * t), -math.inf, math.inf)
    assert r.value == pytest.approx(math.sqrt(math.pi), rel=1e-12)


def test_f2_two_forms_at_zero():
    assert abs(f2(0.0) - f2_moment_form(0.0)) <= 1e-10


def test_2d_separable_gaussian():
    r = integrate_2d(lambda u, v: np.exp(-u * u - v * v), (-math.inf, math.inf))
    assert r.value == pytest.approx(math.pi / 2, rel=1e-10)


def test_2d_reduction_identity():
    # int_0^inf rho ln(1 + e^(A - rho^2)) drho = -Li2(-e^A)/2
    r = integrate_2d(lambda t, rho: rho * np.logaddexp(0, -rho * rho - t * t),
                     (-math.inf, math.inf), (0, math.inf), tol=1e-11)
    ref = mp.quad(lambda t: -mp.polylog(2, -mp.exp(-t * t)) / 2, [-mp.inf, 0, mp.inf])
    assert abs(r.value - float(ref)) <= 1e-9


def test_2d_unit_square():
    r = integrate_2d(lambda u, v: np.ones_like(u), (0, 1), (0, 1))
    assert abs(r.value - 1) < 1e-14


def test_breakpoint_hints_resolve_narrow_peak():
    w = 0.3 + 1e-6j
    r = integrate_finite(lambda t: 1 / (t - w), -1, 1, tol=1e-10, points=[0.3])
    exact = np.log(1 - w) - np.log(-1 - w)
    assert abs(r.value - exact) <= 1e-9 * abs(exact)


def test_nonconvergence_reports_best_estimate():
    with pytest.raises(QuadratureError) as exc:
        integrate_finite(lambda t: 1 / np.sqrt(np.abs(t - 0.123456)), 0, 1, tol=1e-14, limit=20)
    best = exc.value.best
    assert isinstance(best, QuadResult) and best.abs_error_estimate > 0
    assert abs(best.value - 2 * (math.sqrt(0.123456) + math.sqrt(1 - 0.123456))) < 1e-2


def test_nonfinite_integrand_raises():
    with pytest.raises(QuadratureError), np.errstate(divide="ignore"):
        integrate_finite(lambda t: 1 / t, -1, 1)


def test_argument_validation():
    with pytest.raises(ValueError):
        integrate_finite(lambda t: t, 1, 0)
    with pytest.raises(ValueError):
        integrate_finite(lambda t: t, 0, 1, tol=0)
    with pytest.raises(ValueError):
        integrate_finite(lambda t: t, 0, math.inf)


def _fa(t):
    return np.exp(-t) / (t - (0.2 + 0.05j))


def _fb(t):
    return np.cos(3 * t) + 1j * t ** 3


@settings(deadline=None, max_examples=30)
@given(a=st.floats(-3, 3), b=st.floats(-3, 3))
def test_linearity(a, b):
    tol = 1e-11
    lhs = integrate_finite(lambda t: a * _fa(t) + b * _fb(t), -1, 1, tol=tol).value
    rhs = a * integrate_finite(_fa, -1, 1, tol=tol).value + b * integrate_finite(_fb, -1, 1, tol=tol).value
    assert abs(lhs - rhs) <= 2 * tol * max(1, abs(lhs))


def test_conjugation_is_exact():
    r = integrate_finite(_fa, -1, 1)
    c = integrate_finite(lambda t: np.conj(_fa(t)), -1, 1)
    assert c.value == r.value.conjugate()


@pytest.mark.parametrize("f", [_fa, lambda t: np.sqrt(np.abs(t)), lambda t: 1 / (t - 0.4 - 0.01j)])
def test_refinement_monotone(f):
    errs = [integrate_finite(f, -1, 1, tol=tol).abs_error_estimate
            for tol in (1e-4, 5e-5, 2.5e-5, 1.25e-5, 6.25e-6)]
    assert all(b <= a for a, b in zip(errs, errs[1:]))
