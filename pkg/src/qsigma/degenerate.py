"""Transverse conductivity of a degenerate (zero-temperature) collisional plasma.

All quantities are ratios ``sigma / sigma0`` as functions of the Fermi
normalized ``x``, ``y``, ``q`` with ``z = x + i y``. The closed forms are
numpy-vectorized; the ``*_deg`` wrappers take a :class:`DegenerateParams`.

Logarithms of products are split into linear factors ``z +/- q +/- q^2/2``,
each of which has imaginary part ``y > 0``; principal logs of these are
continuous in every real parameter, so no branch jumps appear in sweeps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .params import DegenerateParams, PoleError, log_ratio
from .quad import DEFAULT_TOL, QuadratureError, integrate_finite

__all__ = [
    "Q_SWITCH",
    "KOHN_RADIUS",
    "DegenerateSigma",
    "classic_core",
    "sigma1_core",
    "sigma2_core",
    "quant_core",
    "total_core",
    "sigma2_series_core",
    "sigma_classic_deg",
    "sigma_classic_variants",
    "sigma1_deg",
    "sigma1_kinetic_form",
    "sigma2_deg",
    "sigma_quant_deg",
    "sigma_tr_deg_direct",
    "sigma_tr_deg",
    "sigma_tr_deg_quadrature",
    "sigma_quant_series",
    "kohn_distance",
    "evaluate_safe",
    "evaluate_safe_arrays",
]

Q_SWITCH = 0.05
KOHN_RADIUS = 1e-6
# below this (q + q^2/2)/|z| the double series is used by evaluate_safe
SERIES_RATIO = 0.25

_SMALL_R = 1.0 / 16.0
_NSER = 24


@dataclass(frozen=True)
class DegenerateSigma:
    classic: complex
    sigma1: complex
    sigma2: complex
    method: str = "closed_form"
    abs_error: float = 0.0
    quant: complex = field(init=False)
    total: complex = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "quant", self.sigma1 + self.sigma2)
        object.__setattr__(self, "total", self.classic + self.quant)


def _arrays(x, y, q):
    x, y, q = (np.asarray(v, dtype=float) for v in (x, y, q))
    return x, y, q, x + 1j * y


def _out(v):
    return complex(v) if np.ndim(v) == 0 else v


def _log_factors(z, q):
    """Principal logs of ``z - q + h``, ``z + q - h``, ``z - q - h``, ``z + q + h``."""
    h = 0.5 * q * q
    f = (z - q + h, z + q - h, z - q - h, z + q + h)
    tiny = np.finfo(float).tiny
    if any(np.any(np.abs(v) < tiny) for v in f):
        raise PoleError("logarithm evaluated at a vanishing factor z +/- q +/- q^2/2")
    return tuple(np.log(v) for v in f)


def _B(z, q):
    """``int_{-1}^{1} (1 - t^2)/(z - q t) dt`` with a power series for small ``q/z``."""
    z = np.asarray(z, dtype=complex)
    q = np.asarray(q, dtype=float)
    z, q = np.broadcast_arrays(z, q)
    r = (q / z) ** 2
    small = np.abs(r) <= _SMALL_R
    out = np.empty(z.shape, dtype=complex)
    if np.any(small):
        rs, zs = r[small], z[small]
        acc = np.zeros_like(rs)
        for m in range(_NSER - 1, -1, -1):
            acc = acc * rs + 1.0 / ((2 * m + 1) * (2 * m + 3))
        out[small] = 4.0 * acc / zs
    big = ~small
    if np.any(big):
        zb, qb = z[big], q[big]
        out[big] = 2 * zb / qb ** 2 + (zb * zb - qb * qb) * log_ratio(zb, qb) / qb ** 3
    return out


def classic_core(x, y, q):
    """``(3i/4) [2yz/q^2 + y (z^2 - q^2)/q^3 ln((z-q)/(z+q))]``."""
    x, y, q, z = _arrays(x, y, q)
    return _out(0.75j * y * _B(z, q))


def sigma1_core(x, y, q):
    """``i (y/x) [1 - 3z^2/(2q^2) - (3z/(4q^3)) (z^2 - q^2) ln((z-q)/(z+q))]``."""
    x, y, q, z = _arrays(x, y, q)
    z, q = np.broadcast_arrays(z, q)
    r = (q / z) ** 2
    small = np.abs(r) <= _SMALL_R
    bracket = np.empty(z.shape, dtype=complex)
    if np.any(small):
        # 1 - (3z/4) B, with the constant term cancelled analytically
        rs = r[small]
        acc = np.zeros_like(rs)
        for m in range(_NSER, 0, -1):
            acc = acc * rs + 3.0 / ((2 * m + 1) * (2 * m + 3))
        bracket[small] = -acc * rs
    big = ~small
    if np.any(big):
        bracket[big] = 1.0 - 0.75 * z[big] * _B(z[big], q[big])
    return _out(1j * (y / x) * bracket)


def _lambda_terms(z, q):
    """``(u^2 + z^2 q^4)/(2 q^5) ln L1 + (z/q^3) u ln L2`` with ``u = z^2 - q^2 + q^4/4``."""
    a, b, c, d = _log_factors(z, q)
    ln1 = a + b - c - d
    ln2 = c + a - b - d
    u = z * z - q * q + q ** 4 / 4
    return (u * u + z * z * q ** 4) / (2 * q ** 5) * ln1 + z / q ** 3 * u * ln2


def sigma2_core(x, y, q):
    """Closed-form ``sigma2`` (the ``z/q^3`` reading of the log coefficient)."""
    x, y, q, z = _arrays(x, y, q)
    br = -5.0 / 3.0 + 3 * z * z / q ** 2 + q ** 2 / 4 + _lambda_terms(z, q)
    return _out(3j * y / (8 * x) * br)


def quant_core(x, y, q):
    """Combined closed form of ``sigma1 + sigma2``."""
    x, y, q, z = _arrays(x, y, q)
    br = (1 - z * z / q ** 2 + q ** 2 / 4
          - 2 * z / q ** 3 * (z * z - q * q) * log_ratio(z, q) + _lambda_terms(z, q))
    return _out(3j * y / (8 * x) * br)


def total_core(x, y, q):
    """Single-bracket closed form of the full conductivity."""
    x, y, q, z = _arrays(x, y, q)
    br = (1 + z * (3 * x - 1j * y) / q ** 2 + q ** 2 / 4
          - 2j * y / q ** 3 * (z * z - q * q) * log_ratio(z, q) + _lambda_terms(z, q))
    return _out(3j * y / (8 * x) * br)


def sigma2_series_core(x, y, q, order: int = 30):
    """``sigma2`` as a double power series in ``q/z`` and ``q^2/(2z)``.

    Expands ``1/((z - q t)^2 - h^2)`` under the ``(1 - t^2)^2`` weight;
    converges for ``q + q^2/2 < |z|`` and is free of the ``1/q^5``
    cancellation of the closed form.
    """
    x, y, q, z = _arrays(x, y, q)
    h = 0.5 * q * q
    s = (q / z) ** 2
    e = (h / z) ** 2
    acc = np.zeros(np.broadcast(z, q).shape, dtype=complex)
    for n in range(order + 1):
        en = e ** n
        for j in range(order + 1 - n):
            coef = math.comb(2 * j + 2 * n + 1, 2 * n + 1) * 16.0 / (
                (2 * j + 1) * (2 * j + 3) * (2 * j + 5))
            acc = acc + coef * en * s ** j
    return _out(3j * y * q * q / (16 * x) * acc / z ** 2)


def _p(p: DegenerateParams):
    return p.x, p.y, p.q


def sigma_classic_deg(p: DegenerateParams) -> complex:
    return classic_core(*_p(p))


def sigma_classic_variants(p: DegenerateParams) -> dict[str, complex]:
    """Equivalent forms of the classical part.

    ``kinetic`` uses ``a = 1 - i wt`` and ``k1``; ``omega_tau`` uses
    ``wt + i``; ``zq`` is the ``(z, q)`` form.
    """
    wt, k1 = p.x / p.y, p.q / p.y
    a = 1 - 1j * wt
    log_a = np.log(a + 1j * k1) - np.log(a - 1j * k1)
    kinetic = -0.75 * (2 * a / k1 ** 2 + 1j * (a * a + k1 ** 2) / k1 ** 3 * log_a)
    w = wt + 1j
    omega_tau = 0.75j * (2 * w / k1 ** 2 + (w * w - k1 ** 2) / k1 ** 3 * log_ratio(w, k1))
    return {"kinetic": complex(kinetic), "omega_tau": complex(omega_tau),
            "zq": sigma_classic_deg(p)}


def sigma1_deg(p: DegenerateParams) -> complex:
    return sigma1_core(*_p(p))


def sigma1_kinetic_form(p: DegenerateParams) -> complex:
    """``sigma1`` written with ``a = 1 - i wt`` and ``k1``."""
    wt, k1 = p.x / p.y, p.q / p.y
    a = 1 - 1j * wt
    log_a = np.log(a + 1j * k1) - np.log(a - 1j * k1)
    br = 1 + 3 * a * a / (2 * k1 ** 2) + 3j * a / (4 * k1 ** 3) * (a * a + k1 ** 2) * log_a
    return complex(1j / wt * br)


def sigma2_deg(p: DegenerateParams) -> complex:
    return sigma2_core(*_p(p))


def sigma_quant_deg(p: DegenerateParams) -> complex:
    """Quantum part ``sigma1 + sigma2`` from its combined closed form.

    Inside the series disk (``q + q^2/2 <= |z|/4``) the combined bracket
    cancels down to ``O(q^6)`` and the power series is returned instead.
    """
    x, y, q = _p(p)
    if (q + 0.5 * q * q) <= SERIES_RATIO * abs(p.z):
        return complex(sigma1_core(x, y, q) + sigma2_series_core(x, y, q))
    return quant_core(x, y, q)


def sigma_tr_deg_direct(p: DegenerateParams) -> complex:
    return total_core(*_p(p))


def sigma_tr_deg(p: DegenerateParams) -> DegenerateSigma:
    """Closed-form breakdown; ``total`` is ``classic + sigma1 + sigma2``."""
    x, y, q = _p(p)
    return DegenerateSigma(classic_core(x, y, q), sigma1_core(x, y, q),
                           sigma2_core(x, y, q), method="closed_form")


def _t_points(p: DegenerateParams):
    h = 0.5 * p.q * p.q
    pts = [p.x / p.q, (p.x - h) / p.q, (p.x + h) / p.q]
    return [t for t in pts if -1.0 < t < 1.0]


def sigma_tr_deg_quadrature(p: DegenerateParams, tol: float = DEFAULT_TOL) -> DegenerateSigma:
    """Breakdown from three integrals over ``t`` in ``[-1, 1]``.

    The kernels ``(1-t^2)/(qt-z)``, ``t(1-t^2)/(qt-z)`` and
    ``(1-t^2)^2/((qt-z)^2 - q^4/4)`` give the classical part, ``sigma1``
    and ``sigma2`` respectively.
    """
    x, y, q, z = p.x, p.y, p.q, p.z
    pts = _t_points(p)
    h2 = q ** 4 / 4

    def run(f):
        return integrate_finite(f, -1.0, 1.0, tol=tol, abs_tol=tol * 1e-3, points=pts)

    r0 = run(lambda t: (1 - t * t) / (q * t - z))
    r1 = run(lambda t: t * (1 - t * t) / (q * t - z))
    r2 = run(lambda t: (1 - t * t) ** 2 / ((q * t - z) ** 2 - h2))
    c0, c1, c2 = -0.75j * y, 0.75j * y * q / x, 3j * y * q * q / (16 * x)
    err = abs(c0) * r0.abs_error_estimate + abs(c1) * r1.abs_error_estimate \
        + abs(c2) * r2.abs_error_estimate
    return DegenerateSigma(c0 * r0.value, c1 * r1.value, c2 * r2.value,
                           method="quadrature", abs_error=err)


def sigma_quant_series(p: DegenerateParams) -> complex:
    """Two leading small-``q`` terms: ``i y q^6/(20 x z^4) + i y q^8/(14 x z^6)``."""
    x, y, q, z = p.x, p.y, p.q, p.z
    return complex(1j * y / x * (q ** 6 / (20 * z ** 4) + q ** 8 / (14 * z ** 6)))


def kohn_distance(p: DegenerateParams) -> float:
    """Smallest modulus among ``z -/+ q`` and the four ``z +/- q +/- q^2/2`` factors."""
    z, q, h = p.z, p.q, 0.5 * p.q * p.q
    return min(abs(z - q), abs(z + q), abs(z - q + h), abs(z + q - h),
               abs(z - q - h), abs(z + q + h))


def evaluate_safe(p: DegenerateParams, tol: float = DEFAULT_TOL) -> DegenerateSigma:
    """Evaluate along the most accurate path and tag which one was taken.

    Near-pole points go to quadrature. When ``q + q^2/2`` is small against
    ``|z|`` the quantum part comes from the convergent power series
    (``method='series'``). Small ``q`` outside the series disk also goes to
    quadrature; everything else uses the closed forms.
    """
    x, y, q = _p(p)
    ratio = (q + 0.5 * q * q) / abs(p.z)
    if kohn_distance(p) < KOHN_RADIUS:
        try:
            return sigma_tr_deg_quadrature(p, tol)
        except QuadratureError as exc:
            if exc.best is None:
                raise
            return _fallback(p, tol)
    if ratio <= SERIES_RATIO:
        return DegenerateSigma(classic_core(x, y, q), sigma1_core(x, y, q),
                               sigma2_series_core(x, y, q), method="series")
    if q < Q_SWITCH:
        return sigma_tr_deg_quadrature(p, tol)
    return sigma_tr_deg(p)


def evaluate_safe_arrays(x, y, q, tol: float = DEFAULT_TOL):
    """Vectorized :func:`evaluate_safe`.

    Returns ``(classic, sigma1, sigma2, method)`` arrays. Points that need
    quadrature are evaluated one by one; the rest in bulk.
    """
    x, y, q, z = _arrays(x, y, q)
    x, y, q, z = np.broadcast_arrays(x, y, q, z)
    h = 0.5 * q * q
    ratio = (q + h) / np.abs(z)
    kd = np.min(np.abs(np.stack([z - q, z + q, z - q + h, z + q - h, z - q - h, z + q + h])),
                axis=0)
    quad = (kd < KOHN_RADIUS) | ((ratio > SERIES_RATIO) & (q < Q_SWITCH))
    series = (ratio <= SERIES_RATIO) & ~quad
    closed = ~(quad | series)
    classic = np.empty(z.shape, complex)
    s1 = np.empty(z.shape, complex)
    s2 = np.empty(z.shape, complex)
    method = np.empty(z.shape, dtype=object)
    bulk = ~quad
    if np.any(bulk):
        classic[bulk] = classic_core(x[bulk], y[bulk], q[bulk])
        s1[bulk] = sigma1_core(x[bulk], y[bulk], q[bulk])
    if np.any(series):
        s2[series] = sigma2_series_core(x[series], y[series], q[series])
        method[series] = "series"
    if np.any(closed):
        s2[closed] = sigma2_core(x[closed], y[closed], q[closed])
        method[closed] = "closed_form"
    for idx in zip(*np.nonzero(quad)):
        r = evaluate_safe(DegenerateParams(float(x[idx]), float(y[idx]), float(q[idx])), tol)
        classic[idx], s1[idx], s2[idx], method[idx] = r.classic, r.sigma1, r.sigma2, r.method
    return classic, s1, s2, method


def _fallback(p: DegenerateParams, tol: float) -> DegenerateSigma:
    """Quadrature with a loosened tolerance, keeping best estimates on failure."""
    loose = max(tol, 1e-8)
    parts, err = [], 0.0
    q, z, h2 = p.q, p.z, p.q ** 4 / 4
    kernels = (lambda t: (1 - t * t) / (q * t - z),
               lambda t: t * (1 - t * t) / (q * t - z),
               lambda t: (1 - t * t) ** 2 / ((q * t - z) ** 2 - h2))
    coefs = (-0.75j * p.y, 0.75j * p.y * q / p.x, 3j * p.y * q * q / (16 * p.x))
    for f, c in zip(kernels, coefs):
        try:
            r = integrate_finite(f, -1.0, 1.0, tol=loose, points=_t_points(p))
        except QuadratureError as exc:
            r = exc.best
        parts.append(c * r.value)
        err += abs(c) * r.abs_error_estimate
    return DegenerateSigma(*parts, method="quadrature", abs_error=err)
