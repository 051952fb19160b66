"""Fermi-Dirac weights in thermal units.

Every function takes the squared dimensionless momentum ``P^2`` (or the
momentum itself for the log weight) and is built on the logistic sigmoid,
so nothing overflows for large ``|P^2 - alpha|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import expit

from .params import ParameterError
from .quad import integrate_finite

__all__ = ["FermiKernel", "f2", "f2_moment_form", "truncation_radius"]


def truncation_radius(alpha: float) -> float:
    """Momentum beyond which ``exp(alpha - P^2)`` drops below ``e^-45``."""
    return math.sqrt(max(alpha, 0.0) + 45.0)


@dataclass(frozen=True)
class FermiKernel:
    alpha: float

    def __post_init__(self):
        if not math.isfinite(self.alpha):
            raise ParameterError(f"alpha must be finite, got {self.alpha!r}")

    def f_F(self, t2):
        """Occupation ``1/(1 + exp(t2 - alpha))``."""
        return expit(self.alpha - np.asarray(t2, dtype=float))

    def log_weight(self, t):
        """``ln(1 + exp(alpha - t^2))``, the transverse-momentum integral of ``f_F``."""
        t = np.asarray(t, dtype=float)
        return np.logaddexp(0.0, self.alpha - t * t)

    def g(self, P2):
        """``-d f_F / d(P^2)``, equal to ``f_F (1 - f_F)``."""
        s = np.asarray(P2, dtype=float) - self.alpha
        return expit(s) * expit(-s)

    def g1(self, P2):
        """First derivative of ``g`` with respect to ``P^2``."""
        s = np.asarray(P2, dtype=float) - self.alpha
        return -self.g(P2) * np.tanh(0.5 * s)

    def g2(self, P2):
        """Second derivative of ``g`` with respect to ``P^2``."""
        s = np.asarray(P2, dtype=float) - self.alpha
        g = self.g(P2)
        th = np.tanh(0.5 * s)
        return g * (th * th - 2.0 * g)

    def G(self, Px, P2):
        """Cubic-order kernel ``Px (g'' Px^2 + 1.5 g')``; odd in ``Px``."""
        Px = np.asarray(Px, dtype=float)
        return Px * (self.g2(P2) * Px * Px + 1.5 * self.g1(P2))


_F2_TOL = 1e-13


@lru_cache(maxsize=256)
def f2(alpha: float) -> float:
    """``f2(alpha) = int_0^inf x^2 f_F dx``, evaluated as ``(1/2) int_0^inf ln(1+e^(alpha-x^2)) dx``.

    Memoized per ``alpha``; every conductivity in the general case is
    normalized by it.
    """
    alpha = float(alpha)
    kern = FermiKernel(alpha)
    points = [math.sqrt(alpha)] if alpha > 0 else []
    res = integrate_finite(kern.log_weight, 0.0, truncation_radius(alpha),
                           tol=_F2_TOL, abs_tol=0.0, points=points)
    return 0.5 * res.value.real


def f2_moment_form(alpha: float) -> float:
    """Same quantity from the defining moment ``int_0^inf x^2 f_F dx`` (uncached)."""
    kern = FermiKernel(alpha)
    points = [math.sqrt(alpha)] if alpha > 0 else []
    res = integrate_finite(lambda t: t * t * kern.f_F(t * t), 0.0,
                           truncation_radius(alpha), tol=_F2_TOL, abs_tol=0.0,
                           points=points)
    return res.value.real
