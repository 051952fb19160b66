import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qsigma import (GeneralParams, KineticAux, ParameterError, J_angular, from_kinetic_aux,
                    sigma1_general, sigma2_general_1d, sigma2_general_2d,
                    sigma_classic_general, sigma_quant_smallh, sigma_tr_general)
from qsigma.fermi import f2
from qsigma.general import SigmaBreakdown
from oracles import cquad, general_classic_3d, general_sigma1_3d

P0 = GeneralParams(alpha=0.0, x=1.0, y=0.1, q=1.0)

# 50-digit mpmath values of the defining integrals at P0
MP_CLASSIC = 0.07146703412569128 + 0.08985703532763972j
MP_SIGMA1 = -0.0624813305929273 + 0.0029962612597911487j
MP_SIGMA2 = 0.05624877780091929 - 0.00786753325278011j


def test_classic_matches_3d_form():
    ref = general_classic_3d(0.0, 1.0, 0.1, 1.0, f2(0.0))
    assert abs(sigma_classic_general(P0) - ref) <= 1e-7
    assert abs(sigma_classic_general(P0) - MP_CLASSIC) <= 1e-11


def test_sigma1_matches_3d_form():
    ref = general_sigma1_3d(0.0, 1.0, 0.1, 1.0, f2(0.0))
    assert abs(sigma1_general(P0) - ref) <= 1e-7
    assert abs(sigma1_general(P0) - MP_SIGMA1) <= 1e-11


def test_sigma2_mpmath_reference():
    assert abs(sigma2_general_1d(P0) - MP_SIGMA2) <= 1e-11


def test_classic_long_wave():
    p = GeneralParams(0.0, 0.1, 0.1, 1e-6)
    assert sigma_classic_general(p) == pytest.approx(0.5 + 0.5j, rel=1e-5)


def test_sigma1_vanishes_quadratically():
    vals = [abs(sigma1_general(GeneralParams(0.0, 1.0, 0.1, q))) for q in (0.1, 0.05, 0.025)]
    for a, b in zip(vals, vals[1:]):
        assert a / b == pytest.approx(4, rel=0.05)


def test_sigma1_from_even_odd_split():
    # only the odd part (in t) of 1/(z - q t) survives against the odd factor t
    p = GeneralParams(0.5, 0.7, 0.2, 0.9)
    z, q, w = p.z, p.q, lambda t: np.logaddexp(0.0, p.alpha - t * t)
    T = math.sqrt(45.5)
    odd = cquad(lambda t: t * w(t) * 0.5 * (1 / (z - q * t) - 1 / (z + q * t)), -T, T,
                points=[p.x / p.q])
    ref = -1j * q * p.y / (4 * f2(p.alpha) * p.x) * odd
    assert abs(sigma1_general(p) - ref) <= 1e-10


def test_J_static_limit():
    aux = KineticAux(omega_tau=1.0, k1=2.0, d=0.0)
    assert J_angular(1e-9, aux) == pytest.approx(2j / 3, abs=1e-12)
    assert J_angular(0.0, aux) == pytest.approx((4 / 3) / (1 - 1j) ** 2, abs=1e-15)


@pytest.mark.parametrize("d", [0.3, 0.05, 1e-3])
def test_J_against_mu_quadrature(d):
    aux = KineticAux(omega_tau=1.0, k1=2.0, d=d)
    a, b = 1 - 1j, 2j * 0.8
    ref = cquad(lambda m: (1 - m * m) / ((a + b * m) ** 2 + d * d), -1, 1)
    assert abs(J_angular(0.8, aux) - ref) <= 1e-10 * abs(ref)


def test_J_is_even_in_P():
    aux = KineticAux(omega_tau=0.7, k1=3.0, d=0.4)
    P = np.linspace(0.1, 4, 9)
    assert np.allclose(J_angular(P, aux), J_angular(-P, aux), rtol=1e-13, atol=0)


def test_J_vectorized_matches_scalar():
    aux = KineticAux(omega_tau=2.0, k1=1.5, d=0.05)
    P = np.array([0.2, 1.0, 3.0])
    assert np.allclose(J_angular(P, aux), [J_angular(v, aux) for v in P], rtol=1e-14, atol=0)


def test_1d_and_2d_reductions_agree():
    assert abs(sigma2_general_1d(P0) - sigma2_general_2d(P0)) <= 1e-8


def test_denominator_identity():
    x, y, q, px = 1.0, 0.5, 1.0, 0.3
    wt, k1, d = x / y, q / y, q * q / (2 * y)
    lhs = (1 - 1j * wt + 1j * k1 * px) ** 2 + d * d
    rhs = -((complex(x, y) - q * px) ** 2 - q ** 4 / 4) / y ** 2
    assert abs(lhs - rhs) <= 1e-14 * abs(lhs)


def test_classical_restoration():
    vals = []
    for d in (0.2, 0.1, 0.05, 0.025):
        b = sigma_tr_general(from_kinetic_aux(KineticAux(1.0, 2.0, d), alpha=0.0))
        vals.append(abs(b.quant))
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 0.05 * vals[0]


def test_maxwell_shape_invariance():
    a = sigma2_general_1d(GeneralParams(-10.0, 1.0, 0.1, 1.0))
    b = sigma2_general_1d(GeneralParams(-12.0, 1.0, 0.1, 1.0))
    assert abs(a - b) <= 1e-4 * abs(a)


def test_smallh_matches_exact_quantum_part():
    p = GeneralParams(0.0, 1.0, 0.5, 0.05)
    exact = sigma_tr_general(p).quant
    assert abs(sigma_quant_smallh(p) - exact) <= 0.05 * abs(exact)


def test_smallh_scales_like_q6():
    a = sigma_quant_smallh(GeneralParams(0.0, 1.0, 0.5, 0.02))
    b = sigma_quant_smallh(GeneralParams(0.0, 1.0, 0.5, 0.04))
    assert abs(b) / abs(a) == pytest.approx(2 ** 6, rel=0.05)


def test_smallh_refuses_large_shift():
    with pytest.raises(ParameterError):
        sigma_quant_smallh(GeneralParams(0.0, 1.0, 0.1, 1.0))


@pytest.mark.parametrize("alpha", [-31.0, 501.0])
def test_alpha_range_enforced(alpha):
    with pytest.raises(ParameterError):
        sigma_tr_general(GeneralParams(alpha, 1.0, 0.1, 1.0))


def test_long_wave_total():
    for x in (0.1, 1.0):
        for y in (0.1, 1.0):
            b = sigma_tr_general(GeneralParams(0.0, x, y, 1e-3))
            assert abs(b.total * (1 - 1j * x / y) - 1) <= 1e-4


def test_degenerate_bridge():
    from qsigma import DegenerateParams, sigma_tr_deg
    alpha = 400.0
    xf, yf, qf = 1.0, 0.1, 1.0
    g = sigma_tr_general(GeneralParams(alpha, xf * alpha, yf * alpha, qf * math.sqrt(alpha)))
    d = sigma_tr_deg(DegenerateParams(xf, yf, qf))
    assert abs(g.total - d.total) <= 0.02 * abs(d.total)


@settings(deadline=None, max_examples=40)
@given(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=1, allow_nan=False, allow_infinity=False))
def test_breakdown_closure(c, s1, s2):
    b = SigmaBreakdown(c, s1, s2)
    assert b.quant == s1 + s2
    assert b.total == c + (s1 + s2)
