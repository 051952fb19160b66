"""Dimensionless parameter records and the shared complex-logarithm rule.

Two normalizations are in use:

* Fermi normalization (degenerate plasma): ``x = w/(kF vF)``, ``y = nu/(kF vF)``,
  ``q = k/kF``.
* Thermal normalization (arbitrary degeneracy): the same ratios built on the
  thermal wave number ``kT = m vT / hbar`` and velocity ``vT``, plus the
  degeneracy parameter ``alpha = mu / (kB T)``.

In both cases ``z = x + i y`` and every conductivity is reported as the ratio
``sigma / sigma0`` with ``sigma0 = e^2 N / (m nu)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "ParameterError",
    "PoleError",
    "as_complex",
    "DegenerateParams",
    "GeneralParams",
    "KineticAux",
    "to_kinetic_aux",
    "from_kinetic_aux",
    "log_ratio",
    "epsilon_tr",
    "fermi_to_thermal",
]


class ParameterError(ValueError):
    """Raised when a parameter record violates its invariants."""


class PoleError(ArithmeticError):
    """Raised when an expression is evaluated exactly on a logarithmic pole."""


def as_complex(value) -> complex:
    """Coerce ``value`` to a finite Python complex.

    Complex numbers are the value type of every result in this package; this
    enforces the finiteness invariant at the boundaries where it matters.
    """
    c = complex(value)
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        raise ParameterError(f"non-finite complex value {c!r}")
    return c


def _check_positive(**values: float) -> None:
    for name, v in values.items():
        if not math.isfinite(v) or v <= 0.0:
            raise ParameterError(f"{name} must be finite and > 0, got {v!r}")


@dataclass(frozen=True)
class DegenerateParams:
    """Fermi-normalized frequency ``x``, collision rate ``y`` and wave number ``q``."""

    x: float
    y: float
    q: float

    def __post_init__(self):
        _check_positive(x=self.x, y=self.y, q=self.q)

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)


@dataclass(frozen=True)
class GeneralParams:
    """Thermal-normalized ``(x, y, q)`` together with the degeneracy ``alpha``."""

    alpha: float
    x: float
    y: float
    q: float

    def __post_init__(self):
        if not math.isfinite(self.alpha):
            raise ParameterError(f"alpha must be finite, got {self.alpha!r}")
        _check_positive(x=self.x, y=self.y, q=self.q)

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)


@dataclass(frozen=True)
class KineticAux:
    """Kinetic variables: ``omega_tau = w tau``, ``k1 = k l`` and the quantum shift ``d``.

    ``d`` is ``hbar nu k1^2 / (2 m v^2)`` with ``v`` the thermal or Fermi
    velocity; in either normalization it reduces to ``q^2 / (2 y)``.
    """

    omega_tau: float
    k1: float
    d: float


def to_kinetic_aux(p: Union[DegenerateParams, GeneralParams]) -> KineticAux:
    if not p.y > 0.0:
        raise ParameterError("collision frequency y must be > 0")
    k1 = p.q / p.y
    return KineticAux(omega_tau=p.x / p.y, k1=k1, d=p.q * k1 / 2.0)


def from_kinetic_aux(aux: KineticAux, alpha: float | None = None):
    """Invert :func:`to_kinetic_aux`.

    Returns :class:`DegenerateParams` when ``alpha`` is None, otherwise
    :class:`GeneralParams` with that degeneracy.
    """
    q = 2.0 * aux.d / aux.k1
    y = q / aux.k1
    x = aux.omega_tau * y
    if alpha is None:
        return DegenerateParams(x=x, y=y, q=q)
    return GeneralParams(alpha=alpha, x=x, y=y, q=q)


def fermi_to_thermal(p: DegenerateParams, alpha: float) -> GeneralParams:
    """Express Fermi-normalized parameters in thermal units at degeneracy ``alpha``.

    Uses ``vF^2 = alpha vT^2`` (so ``kF = sqrt(alpha) kT``), valid for ``alpha > 0``.
    """
    if alpha <= 0.0:
        raise ParameterError("the Fermi/thermal map needs alpha > 0")
    return GeneralParams(alpha=alpha, x=p.x * alpha, y=p.y * alpha,
                         q=p.q * math.sqrt(alpha))


def log_ratio(z, q):
    """``ln(z - q) - ln(z + q)`` with each logarithm on the principal branch.

    Works on scalars or numpy arrays (broadcasting). This difference-of-logs
    form is the branch rule used for every logarithm in the package: with
    ``Im z > 0`` both arguments stay in the upper half-plane, so the result
    is continuous in ``q``.
    """
    z = np.asarray(z, dtype=complex)
    q = np.asarray(q)
    lo = z - q
    hi = z + q
    tiny = np.finfo(float).tiny
    if np.any(np.abs(lo) < tiny) or np.any(np.abs(hi) < tiny):
        raise PoleError("log_ratio evaluated at z = +/-q")
    out = np.log(lo) - np.log(hi)
    return complex(out) if out.ndim == 0 else out


def epsilon_tr(sigma_ratio, wp_over_omega: float,
               p: Union[DegenerateParams, GeneralParams]) -> complex:
    """Transverse dielectric function ``1 + (4 pi i / w) sigma``.

    With ``4 pi sigma0 = wp^2 / nu`` this is
    ``1 + i (wp/w)^2 (x/y) sigma/sigma0``.
    """
    if wp_over_omega < 0.0:
        raise ParameterError("wp_over_omega must be >= 0")
    return as_complex(1.0 + 1j * wp_over_omega ** 2 * (p.x / p.y) * complex(sigma_ratio))
