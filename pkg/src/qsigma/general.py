"""Transverse conductivity at arbitrary degeneracy (thermal normalization).

Integrals are written in the ``(z, q)`` variables, using
``1 - i wt + i k1 t = (-i/y)(z - q t)`` and
``(1 - i wt + i k1 t)^2 + d^2 = -(1/y^2)((z - q t)^2 - q^4/4)``,
which keeps them well scaled when ``y`` is small. The ``1/f2(alpha)``
normalization is folded into the integrands so that absolute tolerances
refer to ``sigma/sigma0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fermi import FermiKernel, f2, truncation_radius
from .params import GeneralParams, KineticAux, ParameterError, PoleError, to_kinetic_aux
from .quad import DEFAULT_TOL, integrate_2d, integrate_finite

__all__ = [
    "ALPHA_RANGE",
    "SMALLH_MAX_D",
    "SigmaBreakdown",
    "sigma_classic_general",
    "sigma1_general",
    "J_angular",
    "sigma2_general_1d",
    "sigma2_general_2d",
    "sigma_quant_smallh",
    "sigma_tr_general",
]

ALPHA_RANGE = (-30.0, 500.0)
SMALLH_MAX_D = 0.1

# absolute tolerance relative to sigma0, as a fraction of the relative one
_ABS_SCALE = 1e-3

_GL_X, _GL_W = np.polynomial.legendre.leggauss(10)


@dataclass(frozen=True)
class SigmaBreakdown:
    classic: complex
    sigma1: complex
    sigma2: complex
    abs_error: float = 0.0
    quant: complex = field(init=False)
    total: complex = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "quant", self.sigma1 + self.sigma2)
        object.__setattr__(self, "total", self.classic + self.quant)


def _check_alpha(p: GeneralParams) -> None:
    lo, hi = ALPHA_RANGE
    if not lo <= p.alpha <= hi:
        raise ParameterError(
            f"alpha={p.alpha!r} outside [{lo}, {hi}]; use the Maxwellian or "
            "degenerate evaluators instead")


def _poles(p: GeneralParams):
    """Real parts of the resonances in the momentum projection, plus Fermi edges."""
    h = 0.5 * p.q * p.q
    pts = [p.x / p.q, (p.x - h) / p.q, (p.x + h) / p.q]
    if p.alpha > 0:
        s = math.sqrt(p.alpha)
        pts += [s, -s]
    return pts


def sigma_classic_general(p: GeneralParams, tol: float = DEFAULT_TOL) -> complex:
    """``1/(4 f2) int ln(1 + e^(alpha - t^2)) / (1 - i wt + i k1 t) dt`` over the real line."""
    return _classic_and_sigma1(p, tol)[0].value


def sigma1_general(p: GeneralParams, tol: float = DEFAULT_TOL) -> complex:
    """``-k1/(4 f2 wt) int t ln(1 + e^(alpha - t^2)) / (1 - i wt + i k1 t) dt``."""
    return _classic_and_sigma1(p, tol)[1].value


def _classic_and_sigma1(p: GeneralParams, tol: float):
    _check_alpha(p)
    kern = FermiKernel(p.alpha)
    norm = f2(p.alpha)
    z, q, x, y = p.z, p.q, p.x, p.y
    T = truncation_radius(p.alpha)
    pts = _poles(p)
    c_cl = 1j * y / (4 * norm)
    c_s1 = -1j * q * y / (4 * norm * x)
    res_cl = integrate_finite(lambda t: c_cl * kern.log_weight(t) / (z - q * t),
                              -T, T, tol=tol, abs_tol=tol * _ABS_SCALE, points=pts)
    res_s1 = integrate_finite(lambda t: c_s1 * t * kern.log_weight(t) / (z - q * t),
                              -T, T, tol=tol, abs_tol=tol * _ABS_SCALE, points=pts)
    return res_cl, res_s1


def _log_c(c):
    """``ln(c + 1) - ln(c - 1)``; principal logs are continuous here since ``Im c < 0``."""
    return np.log(c + 1) - np.log(c - 1)


def _K(w, b):
    """``int_{-1}^{1} (1 - mu^2)/(w + b mu) dmu``."""
    w, b = np.broadcast_arrays(np.asarray(w, complex), np.asarray(b, complex))
    out = np.empty(w.shape, complex)
    r = np.zeros(w.shape, complex)
    nz = b != 0
    r[nz] = (b[nz] / w[nz]) ** 2
    small = np.abs(r) <= 1.0 / 16.0
    if np.any(small):
        acc = np.zeros(np.count_nonzero(small), complex)
        for m in range(23, -1, -1):
            acc = acc * r[small] + 1.0 / ((2 * m + 1) * (2 * m + 3))
        out[small] = 4.0 * acc / w[small]
    big = ~small
    if np.any(big):
        c = w[big] / b[big]
        out[big] = ((1 - c * c) * _log_c(c) + 2 * c) / b[big]
    return out


def _K2(w, b):
    """``int_{-1}^{1} (1 - mu^2)/(w + b mu)^2 dmu``."""
    w, b = np.broadcast_arrays(np.asarray(w, complex), np.asarray(b, complex))
    out = np.empty(w.shape, complex)
    r = np.zeros(w.shape, complex)
    nz = b != 0
    r[nz] = (b[nz] / w[nz]) ** 2
    small = np.abs(r) <= 1.0 / 16.0
    if np.any(small):
        acc = np.zeros(np.count_nonzero(small), complex)
        for m in range(23, -1, -1):
            acc = acc * r[small] + 1.0 / (2 * m + 3)
        out[small] = 4.0 * acc / w[small] ** 2
    big = ~small
    if np.any(big):
        c = w[big] / b[big]
        out[big] = (2 * c * _log_c(c) - 4) / b[big] ** 2
    return out


def _J(P, a: complex, k1: float, d: float):
    b = 1j * k1 * np.asarray(P, dtype=float)
    if d == 0.0:
        return _K2(a, b)
    if d <= 0.1:
        # average of K2 over w in [a - i d, a + i d]; the difference quotient
        # of K would lose digits to cancellation here
        s = _GL_X.reshape((-1,) + (1,) * b.ndim)
        vals = _K2(a + 1j * d * s, b[None, ...])
        return 0.5 * np.tensordot(_GL_W, vals, axes=1)
    return (_K(a - 1j * d, b) - _K(a + 1j * d, b)) / (2j * d)


def J_angular(P, aux: KineticAux):
    """``int_{-1}^{1} (1 - mu^2) dmu / ((a + b mu)^2 + d^2)`` with ``a = 1 - i wt``, ``b = i k1 P``.

    Vectorized over ``P``; ``P = 0`` gives ``(4/3)/(a^2 + d^2)``.
    """
    a = 1 - 1j * aux.omega_tau
    if abs(a * a + aux.d ** 2) == 0.0:
        raise PoleError("a^2 + d^2 = 0")
    out = _J(P, a, aux.k1, aux.d)
    return complex(out) if np.ndim(out) == 0 else out


def sigma2_general_1d(p: GeneralParams, tol: float = DEFAULT_TOL) -> complex:
    """``-i k1^2/(4 f2 wt) int_0^inf f_F(P) P^4 J(P) dP``."""
    return _sigma2_1d(p, tol).value


def _sigma2_1d(p: GeneralParams, tol: float):
    _check_alpha(p)
    aux = to_kinetic_aux(p)
    kern = FermiKernel(p.alpha)
    a = 1 - 1j * aux.omega_tau
    coef = -1j * aux.k1 ** 2 / (4 * f2(p.alpha) * aux.omega_tau)

    def f(P):
        return coef * kern.f_F(P * P) * P ** 4 * _J(P, a, aux.k1, aux.d)

    h = 0.5 * p.q * p.q
    pts = [abs(p.x - h) / p.q, (p.x + h) / p.q, p.x / p.q]
    if p.alpha > 0:
        pts.append(math.sqrt(p.alpha))
    return integrate_finite(f, 0.0, truncation_radius(p.alpha), tol=tol,
                            abs_tol=tol * _ABS_SCALE, points=pts)


def sigma2_general_2d(p: GeneralParams, tol: float = DEFAULT_TOL) -> complex:
    """``sigma2`` as a double integral over ``(Px, rho)`` with weight ``rho ln(1 + e^(alpha - rho^2 - Px^2))``."""
    return _sigma2_2d(p, tol).value


def _sigma2_2d(p: GeneralParams, tol: float):
    _check_alpha(p)
    kern = FermiKernel(p.alpha)
    z, q = p.z, p.q
    h2 = q ** 4 / 4
    coef = 1j * q * q * p.y / (4 * f2(p.alpha) * p.x)

    def f(px, rho):
        w = np.logaddexp(0.0, p.alpha - px * px - rho * rho)
        return coef * rho * w / ((z - q * px) ** 2 - h2)

    T = truncation_radius(p.alpha)
    inner_pts = [math.sqrt(p.alpha)] if p.alpha > 0 else []
    return integrate_2d(f, (-T, T), (0.0, T), tol=tol, abs_tol=tol * _ABS_SCALE,
                        outer_points=_poles(p), inner_points=inner_pts)


def sigma_quant_smallh(p: GeneralParams, tol: float = DEFAULT_TOL) -> complex:
    """Leading small-``hbar`` quantum part, cubic in the kernel ``G``.

    ``q^3/(12 f2 x) int dPx int_0^inf G(Px, Px^2 + rho^2) rho^3 / (1 - i wt + i k1 Px) drho``.
    Only meaningful for a small quantum shift; refuses ``d > 0.1``.
    """
    _check_alpha(p)
    aux = to_kinetic_aux(p)
    if aux.d > SMALLH_MAX_D:
        raise ParameterError(f"quantum shift d={aux.d:.3g} too large for the cubic expansion "
                             f"(limit {SMALLH_MAX_D})")
    kern = FermiKernel(p.alpha)
    z, q, y = p.z, p.q, p.y
    coef = q ** 3 / (12 * f2(p.alpha) * p.x)

    def f(px, rho):
        # 1/(1 - i wt + i k1 Px) = i y/(z - q Px)
        return coef * kern.G(px, px * px + rho * rho) * rho ** 3 * (1j * y) / (z - q * px)

    T = truncation_radius(p.alpha)
    inner_pts = [math.sqrt(p.alpha)] if p.alpha > 0 else []
    res = integrate_2d(f, (-T, T), (0.0, T), tol=tol, abs_tol=tol * _ABS_SCALE * q ** 4,
                       outer_points=_poles(p), inner_points=inner_pts)
    return res.value


def sigma_tr_general(p: GeneralParams, tol: float = DEFAULT_TOL) -> SigmaBreakdown:
    """Classical part, ``sigma1`` and ``sigma2`` (1D reduction) with combined error bound."""
    res_cl, res_s1 = _classic_and_sigma1(p, tol)
    res_s2 = _sigma2_1d(p, tol)
    err = res_cl.abs_error_estimate + res_s1.abs_error_estimate + res_s2.abs_error_estimate
    return SigmaBreakdown(res_cl.value, res_s1.value, res_s2.value, abs_error=err)
