"""Lindhard-type conductivity in Fermi units and its comparison with the kinetic result.

``sigma_lindhard`` is the textbook transverse Lindhard conductivity with
``w -> w + i nu`` rewritten in ``(x, y, q)``; ``sigma2_lindhard`` drops the
gauge summand ``i y/x``. Both logarithms are differences of principal logs
of ``q^2/2 -/+ z +/- q``, whose imaginary parts are ``-/+ y``, so neither
difference crosses a branch cut.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .degenerate import _B, classic_core, sigma1_core, sigma2_core
from .params import DegenerateParams, PoleError

__all__ = [
    "COINCIDE_RTOL",
    "ComparisonRow",
    "lindhard_core",
    "sigma_lindhard",
    "sigma2_lindhard",
    "sigma_tr_corrected",
    "closed_form_difference",
    "compare",
    "COINCIDENCE_POINTS",
    "coincidence_gap",
    "coincidence_checks",
]

COINCIDE_RTOL = 1e-2


def lindhard_core(x, y, q, gauge: bool = True):
    """Vectorized Lindhard conductivity; ``gauge=False`` drops the summand ``i y/x``.

    The bracket is always evaluated with the leading -5/3 and the gauge summand
    added afterwards, so the two variants differ by exactly ``i y/x`` as evaluated.
    """
    x, y, q = (np.asarray(v, dtype=float) for v in (x, y, q))
    z = x + 1j * y
    h = 0.5 * q * q
    m, p = h - z, h + z
    for f in (m + q, m - q, p + q, p - q):
        if np.any(np.abs(f) < np.finfo(float).tiny):
            raise PoleError("Lindhard logarithm at a vanishing argument")
    log_m = np.log(m + q) - np.log(m - q)
    log_p = np.log(p + q) - np.log(p - q)
    br = (2 * (-5.0 / 3.0 + 3 * z * z / q ** 2 + q ** 2 / 4)
          - (q * q - m * m) ** 2 * log_m / q ** 5
          - (q * q - p * p) ** 2 * log_p / q ** 5)
    out = 3j * y / (16 * x) * br
    if gauge:
        out = out + 1j * y / x
    return complex(out) if np.ndim(out) == 0 else out


def sigma_lindhard(p: DegenerateParams) -> complex:
    return lindhard_core(p.x, p.y, p.q, gauge=True)


def sigma2_lindhard(p: DegenerateParams) -> complex:
    """Lindhard conductivity without the gauge summand."""
    return lindhard_core(p.x, p.y, p.q, gauge=False)


def sigma_tr_corrected(p: DegenerateParams) -> complex:
    """Gauge summand plus the kinetic ``sigma2``: ``i y/x + sigma2``."""
    return complex(1j * p.y / p.x + sigma2_core(p.x, p.y, p.q))


def closed_form_difference(p: DegenerateParams) -> complex:
    """``(3 y^2/(4x)) [2z/q^2 + (z^2 - q^2)/q^3 ln((z-q)/(z+q))]``.

    Equals the full kinetic conductivity minus :func:`sigma_tr_corrected`.
    """
    return complex(0.75 * p.y ** 2 / p.x * _B(p.z, p.q))


@dataclass(frozen=True)
class ComparisonRow:
    params: DegenerateParams
    sigma_tr: complex | None = None
    sigma_tr_1: complex | None = None
    sigma_L: complex | None = None
    sigma2: complex | None = None
    sigma2_L: complex | None = None
    sigma_classic: complex | None = None
    diff_closed: complex | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def _row(p: DegenerateParams) -> ComparisonRow:
    x, y, q = p.x, p.y, p.q
    try:
        classic = classic_core(x, y, q)
        s2 = sigma2_core(x, y, q)
        total = classic + sigma1_core(x, y, q) + s2
        return ComparisonRow(
            params=p, sigma_tr=complex(total), sigma_tr_1=complex(1j * y / x + s2),
            sigma_L=sigma_lindhard(p), sigma2=complex(s2), sigma2_L=sigma2_lindhard(p),
            sigma_classic=complex(classic), diff_closed=closed_form_difference(p))
    except (PoleError, ZeroDivisionError, FloatingPointError) as exc:
        return ComparisonRow(params=p, error=f"{type(exc).__name__}: {exc}")


def compare(p_grid: Iterable[DegenerateParams]) -> list[ComparisonRow]:
    """One :class:`ComparisonRow` per point; pole-adjacent points carry ``error``."""
    grid = list(p_grid)
    if not grid:
        raise ValueError("compare needs at least one parameter point")
    return [_row(p) for p in grid]


def _rel(a: complex, b: complex) -> float:
    return abs(a - b) / abs(b)


COINCIDENCE_POINTS = {
    "small_q_kinetic_vs_classical": (0.1, 0.01, 0.1),
    "large_q_kinetic_vs_corrected": (0.1, 0.01, 3.0),
    "high_x_all_three": (3.0, 0.01, 2.0),
}


def coincidence_gap(name: str, row: ComparisonRow) -> float:
    """Relative gap between the curves that the named check expects to coincide."""
    if name == "small_q_kinetic_vs_classical":
        return _rel(row.sigma_classic, row.sigma_tr)
    if name == "large_q_kinetic_vs_corrected":
        return _rel(row.sigma_tr_1, row.sigma_tr)
    if name == "high_x_all_three":
        return max(_rel(row.sigma_tr_1, row.sigma_tr), _rel(row.sigma_classic, row.sigma_tr))
    raise KeyError(name)


def coincidence_checks(rtol: float = COINCIDE_RTOL) -> list[tuple[str, float, bool]]:
    """Limits where the kinetic, corrected and classical curves should coincide.

    Returns ``(name, measured relative gap, passed)`` triples.
    """
    out = []
    for name, xyq in COINCIDENCE_POINTS.items():
        gap = coincidence_gap(name, _row(DegenerateParams(*xyq)))
        out.append((name, gap, gap < rtol))
    return out
