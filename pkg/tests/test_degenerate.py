import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qsigma import (DegenerateParams, evaluate_safe, sigma1_deg, sigma2_deg, sigma_classic_deg,
                    sigma_quant_deg, sigma_quant_series, sigma_tr_deg, sigma_tr_deg_quadrature)
from qsigma.degenerate import (DegenerateSigma, evaluate_safe_arrays, sigma1_kinetic_form,
                               sigma_classic_variants, sigma_tr_deg_direct)
from oracles import ball_sigma2, cquad, delta_classic, mp_degenerate, mu_sigma1, pair_sigma2

# (classic, sigma1, sigma2) from 50-digit mpmath quadrature of the t-integrals
FROZEN = {
    (1.0, 0.01, 2.0): (0.008781621731856206 + 0.006781170190822749j,
                       -0.008713810029947977 + 0.0031310135918586894j,
                       0.0016460422800687702 - 0.0026024729144447116j),
    (0.5, 0.1, 1.0): (0.15713399323764357 + 0.11504727917091725j,
                      -0.13412453740346011 + 0.053525922181554046j,
                      0.0918783071891129 - 0.04753764191753533j),
    (2.0, 0.5, 1.5): (0.08373601796425269 + 0.25542676819580895j,
                      -0.019879325915300446 - 0.026360772686872133j,
                      0.03352923013702533 + 0.017456394799745097j),
    (0.3, 0.01, 0.8): (0.02491579989719571 + 0.013109884254411704j,
                       -0.024478803755381986 + 0.019392922415681774j,
                       0.019893956243672125 - 0.01612102406381137j),
}


@pytest.mark.parametrize("xyq", list(FROZEN))
def test_frozen_high_precision_values(xyq):
    p = DegenerateParams(*xyq)
    r = sigma_tr_deg(p)
    for got, ref in zip((r.classic, r.sigma1, r.sigma2), FROZEN[xyq]):
        assert abs(got - ref) <= 1e-13 * max(abs(ref), 1e-3)


def test_classic_long_wave():
    assert sigma_classic_deg(DegenerateParams(0.1, 0.1, 1e-6)) == pytest.approx(0.5 + 0.5j, rel=1e-10)


def test_classic_matches_surface_integral():
    p = DegenerateParams(1.0, 0.01, 2.0)
    assert abs(sigma_classic_deg(p) - delta_classic(1.0, 0.01, 2.0)) <= 1e-9


@pytest.mark.parametrize("xyq", [(0.5, 0.1, 1.0), (2.0, 0.5, 1.5), (1.0, 0.01, 2.0)])
def test_classic_variants_agree(xyq):
    v = sigma_classic_variants(DegenerateParams(*xyq))
    ref = v["zq"]
    for name in ("kinetic", "omega_tau"):
        assert abs(v[name] - ref) <= 1e-12 * abs(ref), name


def test_sigma1_matches_J1_quadrature():
    assert abs(sigma1_deg(DegenerateParams(1.0, 0.1, 1.0)) - mu_sigma1(1.0, 0.1, 1.0)) <= 1e-10


def test_sigma1_kinetic_form():
    p = DegenerateParams(2.0, 0.5, 1.5)
    assert abs(sigma1_kinetic_form(p) - sigma1_deg(p)) <= 1e-12 * abs(sigma1_deg(p))


def test_sigma1_is_quadratic_in_q():
    ratios = [abs(sigma1_deg(DegenerateParams(1.0, 0.1, q))) / q ** 2 for q in (0.1, 0.05, 0.025)]
    assert max(ratios) / min(ratios) < 1.05


def test_sigma2_matches_pair_integral():
    assert abs(sigma2_deg(DegenerateParams(1.0, 0.01, 2.0)) - pair_sigma2(1.0, 0.01, 2.0)) <= 1e-9


def test_sigma2_matches_unit_ball():
    ref = ball_sigma2(1.0, 0.01, 2.0)
    assert abs(sigma2_deg(DegenerateParams(1.0, 0.01, 2.0)) - ref) <= 1e-8


def test_pair_integral_is_even_in_a():
    a, c = 0.7 + 0.1j, 0.4

    def J(a):
        return cquad(lambda t: (1 - t * t) ** 2 / ((t - a) ** 2 - c * c), -1, 1)

    assert abs(J(a) - J(-a)) <= 1e-12


def test_quant_identity():
    p = DegenerateParams(1.0, 0.01, 2.0)
    assert abs(sigma_quant_deg(p) - (sigma1_deg(p) + sigma2_deg(p))) <= 1e-12


def test_quant_near_kohn_point_is_finite():
    q = 1.0
    z = q + 1e-3 * (1 + 1j)
    a = sigma_quant_deg(DegenerateParams(z.real, z.imag, q))
    b = sigma_quant_deg(DegenerateParams(q + 1e-4, 1e-4, q))
    assert np.isfinite(a) and np.isfinite(b)
    # the prefactor carries y; what is left settles like x ln x as the point approaches
    assert abs(a / 1e-3 - b / 1e-4) < 0.05 * abs(a / 1e-3)


def test_total_identities():
    p = DegenerateParams(1.0, 0.01, 2.0)
    r = sigma_tr_deg(p)
    assert abs(sigma_tr_deg_direct(p) - r.total) <= 1e-12 * abs(r.total)
    assert r.total == r.classic + r.quant and r.quant == r.sigma1 + r.sigma2


def test_total_long_wave():
    ref = 1j * 0.2 / complex(0.3, 0.2)
    d = [abs(evaluate_safe(DegenerateParams(0.3, 0.2, q)).total - ref) for q in (2e-3, 1e-3)]
    assert d[1] <= 1e-5
    assert d[0] / d[1] == pytest.approx(4, rel=0.01)


def test_large_q_tail():
    # |total| itself grows back towards |i y/x| past q = 2; the parts that decay are
    # the classical part, sigma2 and the distance to the gauge term
    rs = [sigma_tr_deg(DegenerateParams(1.0, 0.01, q)) for q in (2.0, 5.0, 10.0)]
    for get in (lambda r: r.classic, lambda r: r.sigma2, lambda r: r.total - 0.01j):
        v = [abs(get(r)) for r in rs]
        assert v[0] > v[1] > v[2]


def test_quadrature_terms_match_closed_forms():
    p = DegenerateParams(1.0, 0.01, 2.0)
    c, r = sigma_tr_deg(p), sigma_tr_deg_quadrature(p)
    for a, b in ((c.classic, r.classic), (c.sigma1, r.sigma1), (c.sigma2, r.sigma2)):
        assert abs(a - b) <= 1e-9
    assert r.method == "quadrature" and r.abs_error > 0


def test_large_collision_rate():
    p = DegenerateParams(1.0, 5.0, 1.0)
    assert abs(sigma_tr_deg(p).total - sigma_tr_deg_quadrature(p).total) <= 1e-10


def test_series_close_to_closed_form():
    p = DegenerateParams(1.0, 0.5, 0.05)
    assert abs(sigma_quant_series(p) - sigma_quant_deg(p)) <= 0.01 * abs(sigma_quant_deg(p))


def test_series_scaling():
    a = sigma_quant_series(DegenerateParams(1.0, 0.5, 0.02))
    b = sigma_quant_series(DegenerateParams(1.0, 0.5, 0.04))
    assert abs(b) / abs(a) == pytest.approx(64, rel=0.05)


def test_q6_coefficient_from_high_precision_integrals():
    # Richardson on quant/q^6 computed from 50-digit integrals removes the q^2 term
    x, y = 1.0, 0.5
    z = complex(x, y)

    def c6(q):
        _, s1, s2 = mp_degenerate(x, y, q, dps=50)
        return (s1 + s2) / q ** 6

    est = (4 * c6(0.01) - c6(0.02)) / 3
    assert abs(est - 1j * y / (20 * x * z ** 4)) <= 1e-6 * abs(est)


def test_quant_exponent():
    qs = np.array([0.02, 0.04, 0.08])
    vals = [abs(sigma_quant_deg(DegenerateParams(1.0, 0.5, q))) for q in qs]
    slope = np.polyfit(np.log(qs), np.log(vals), 1)[0]
    assert abs(slope - 6) <= 0.3


def test_quant_static_limit_probe():
    # Im grows like 1/x while Re settles: there is no finite static limit
    vals = [sigma_quant_deg(DegenerateParams(x, 0.1, 1.0)) for x in (1e-3, 1e-4, 1e-5)]
    assert abs(vals[2].imag) > 5 * abs(vals[1].imag) > 25 * abs(vals[0].imag)
    assert abs(vals[2].real - vals[1].real) < 1e-3


def test_dispatch_tags():
    assert evaluate_safe(DegenerateParams(1.0, 0.01, 1.0)).method == "closed_form"
    r = evaluate_safe(DegenerateParams(1.0, 0.01, 0.01))
    assert r.method == "series"
    ref = sigma_tr_deg_quadrature(DegenerateParams(1.0, 0.01, 0.01))
    assert abs(r.total - ref.total) <= 1e-6
    k = evaluate_safe(DegenerateParams(1.0, 1e-8, 1.0))
    assert k.method == "quadrature" and np.isfinite(k.total)


def test_small_q_outside_series_disk_uses_quadrature():
    r = evaluate_safe(DegenerateParams(0.01, 0.01, 0.02))
    assert r.method == "quadrature"


def test_array_evaluator_matches_scalar():
    xs = np.array([0.1, 1.0, 2.0, 1.0])
    qs = np.array([0.5, 0.01, 2.0, 1.0])
    ys = np.array([0.01, 0.01, 0.1, 1e-8])
    c, s1, s2, m = evaluate_safe_arrays(xs, ys, qs)
    for i in range(xs.size):
        r = evaluate_safe(DegenerateParams(xs[i], ys[i], qs[i]))
        assert (c[i], s1[i], s2[i], m[i]) == (r.classic, r.sigma1, r.sigma2, r.method)


def test_closed_form_vs_direct_mpmath():
    c, s1, s2 = mp_degenerate(0.7, 0.05, 1.3)
    r = sigma_tr_deg(DegenerateParams(0.7, 0.05, 1.3))
    assert abs(r.total - (c + s1 + s2)) <= 1e-13


@settings(deadline=None, max_examples=60)
@given(x=st.floats(0.05, 3), y=st.floats(0.01, 2), q=st.floats(0.3, 3))
def test_closed_form_matches_quadrature_property(x, y, q):
    p = DegenerateParams(x, y, q)
    a, b = sigma_tr_deg(p).total, sigma_tr_deg_quadrature(p).total
    assert abs(a - b) <= 1e-8 * abs(b)


def test_breakdown_closure():
    r = DegenerateSigma(1 + 2j, 0.5 - 1j, 1e-17 + 3e-16j, method="closed_form")
    assert r.quant == r.sigma1 + r.sigma2 and r.total == r.classic + r.quant
