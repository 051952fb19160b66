"""Adaptive Gauss-Kronrod integration of complex-valued integrands.

The engine is a vectorized 21-point Kronrod / 10-point Gauss pair. Each pass
evaluates every active interval in a single integrand call, retires the
intervals that meet their share of the error budget and bisects the rest.
Semi-infinite pieces are mapped onto ``[0, 1)`` with ``t = p + s/(1-s)``.

Integrands must be pure and accept a 1-D float array, returning an array of
the same length (complex or real). Errors are measured in the max norm over
real and imaginary parts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "DEFAULT_TOL",
    "DEFAULT_LIMIT",
    "QuadResult",
    "QuadratureError",
    "integrate",
    "integrate_finite",
    "integrate_semi_infinite",
    "integrate_2d",
]

DEFAULT_TOL = 1e-10
DEFAULT_LIMIT = 10_000

# QUADPACK qk21 abscissae (descending, last is the centre) and weights.
_XK = np.array([
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0,
])
_WK = np.array([
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WK[:-1], _WK[::-1]])
GAUSS_WEIGHTS = np.zeros(21)
GAUSS_WEIGHTS[1:10:2] = _WG
GAUSS_WEIGHTS[11:20:2] = _WG[::-1]

_EPS = np.finfo(float).eps

# interval kinds in the mapped variable s
_FINITE, _RIGHT_INF, _LEFT_INF = 0, 1, 2


@dataclass(frozen=True)
class QuadResult:
    value: complex
    abs_error_estimate: float
    evaluations: int

    def __post_init__(self):
        if self.abs_error_estimate < 0:
            raise ValueError("negative error estimate")


class QuadratureError(RuntimeError):
    """Adaptive integration did not reach the requested tolerance.

    ``best`` holds the last :class:`QuadResult` estimate, ``owner`` the index
    of the failing integrand for batched (inner) integrations.
    """

    def __init__(self, message: str, best: QuadResult | None = None,
                 owner: int | None = None):
        super().__init__(message)
        self.best = best
        self.owner = owner


def _maxnorm(v):
    return np.maximum(np.abs(v.real), np.abs(v.imag))


def _cbincount(idx, weights, n):
    w = np.asarray(weights)
    if np.iscomplexobj(w):
        return (np.bincount(idx, w.real, minlength=n)
                + 1j * np.bincount(idx, w.imag, minlength=n))
    return np.bincount(idx, w, minlength=n).astype(complex)


def _segments(a: float, b: float, points: Sequence[float]):
    """Split ``[a, b]`` at ``points`` into (kind, base, s_lo, s_hi) pieces."""
    if not a < b:
        raise ValueError(f"need a < b, got a={a!r}, b={b!r}")
    inner = sorted({float(p) for p in points if a < p < b and math.isfinite(p)})
    if not math.isfinite(a) and not math.isfinite(b):
        if not inner:
            inner = [0.0]
    edges = [a, *inner, b]
    pieces = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        if math.isfinite(lo) and math.isfinite(hi):
            pieces.append((_FINITE, 0.0, lo, hi))
        elif math.isfinite(lo):
            pieces.append((_RIGHT_INF, lo, 0.0, 1.0))
        else:
            pieces.append((_LEFT_INF, hi, 0.0, 1.0))
    return pieces


def _map(kind, base, s):
    """Map mapped-variable nodes ``s`` to ``t`` and return ``(t, dt/ds)``."""
    t = s.copy()
    jac = np.ones_like(s)
    inf = kind != _FINITE
    if np.any(inf):
        si = s[inf]
        u = si / (1.0 - si)
        sign = np.where(kind[inf] == _RIGHT_INF, 1.0, -1.0)
        t[inf] = base[inf] + sign * u
        jac[inf] = 1.0 / (1.0 - si) ** 2
    return t, jac


def _rule(f, kind, base, lo, hi, owner):
    """Apply the G10/K21 pair on every interval; return (K, err, |f| mass)."""
    c = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)
    s = c[:, None] + h[:, None] * NODES[None, :]
    n = lo.size
    kk = np.repeat(kind, 21).reshape(n, 21)
    bb = np.repeat(base, 21).reshape(n, 21)
    t, jac = _map(kk.ravel(), bb.ravel(), s.ravel())
    out = f(t, np.repeat(owner, 21))
    inner_err = inner_mag = None
    if isinstance(out, tuple):
        out, inner_err, inner_mag = out
    fv = np.asarray(out).reshape(n, 21)
    if not np.all(np.isfinite(fv)):
        bad = np.argwhere(~np.isfinite(fv))[0]
        raise QuadratureError(
            f"non-finite integrand value at t={t.reshape(n, 21)[tuple(bad)]!r}",
            owner=int(owner[bad[0]]))
    vals = fv * jac.reshape(n, 21)
    k = h * (vals @ KRONROD_WEIGHTS)
    g = h * (vals @ GAUSS_WEIGHTS)
    err = _maxnorm(np.asarray(k - g, dtype=complex))
    w = np.abs(jac.reshape(n, 21))
    if inner_err is None:
        mag = h * (np.abs(vals) @ KRONROD_WEIGHTS)
    else:
        # nested integrand: carry the inner absolute mass for the roundoff floor
        mag = h * ((np.asarray(inner_mag).reshape(n, 21) * w) @ KRONROD_WEIGHTS)
        err = err + h * ((np.asarray(inner_err).reshape(n, 21) * w) @ KRONROD_WEIGHTS)
    return k, err, mag


def _integrate_many(f, pieces_per_owner, rel_tol, abs_tol, limit):
    """Core loop: integrate several integrands (owners) simultaneously.

    ``f(t, owner)`` receives flat arrays and returns either values or a
    ``(values, errors, magnitudes)`` triple for nested integrands. Returns
    (values, errors, evals, magnitudes), one entry per owner.
    """
    n_own = len(pieces_per_owner)
    rows = [(k, b, lo, hi, o) for o, pieces in enumerate(pieces_per_owner)
            for (k, b, lo, hi) in pieces]
    kind = np.array([r[0] for r in rows], dtype=int)
    base = np.array([r[1] for r in rows], dtype=float)
    lo = np.array([r[2] for r in rows], dtype=float)
    hi = np.array([r[3] for r in rows], dtype=float)
    owner = np.array([r[4] for r in rows], dtype=int)
    span = np.bincount(owner, hi - lo, minlength=n_own)

    done_val = np.zeros(n_own, complex)
    done_err = np.zeros(n_own)
    done_mag = np.zeros(n_own)
    evals = np.zeros(n_own, dtype=int)
    nsub = np.zeros(n_own, dtype=int)
    while lo.size:
        k, err, mag = _rule(f, kind, base, lo, hi, owner)
        evals += 21 * np.bincount(owner, minlength=n_own)
        tot_val = done_val + _cbincount(owner, k, n_own)
        tot_err = done_err + np.bincount(owner, err, minlength=n_own)
        tot_mag = done_mag + np.bincount(owner, mag, minlength=n_own)
        target = np.maximum(np.maximum(abs_tol, rel_tol * _maxnorm(tot_val)),
                            50 * _EPS * tot_mag)
        width = hi - lo
        unsplittable = width <= 64 * _EPS * np.maximum(1.0, np.abs(0.5 * (lo + hi)))
        accept = ((tot_err <= target)[owner]
                  | (err <= target[owner] * width / span[owner])
                  | unsplittable)
        done_val += _cbincount(owner[accept], k[accept], n_own)
        done_err += np.bincount(owner[accept], err[accept], minlength=n_own)
        done_mag += np.bincount(owner[accept], mag[accept], minlength=n_own)
        keep = ~accept
        if not np.any(keep):
            break
        nsub += np.bincount(owner[keep], minlength=n_own)
        if np.any(nsub > limit):
            o = int(np.argmax(nsub > limit))
            best = QuadResult(complex(tot_val[o]), float(tot_err[o]), int(evals[o]))
            raise QuadratureError(
                f"no convergence after {limit} subdivisions "
                f"(estimate {best.value!r}, error {best.abs_error_estimate:.3g})",
                best=best, owner=o)
        mid = 0.5 * (lo[keep] + hi[keep])
        kind = np.concatenate([kind[keep], kind[keep]])
        base = np.concatenate([base[keep], base[keep]])
        owner = np.concatenate([owner[keep], owner[keep]])
        lo, hi = (np.concatenate([lo[keep], mid]), np.concatenate([mid, hi[keep]]))

    target = np.maximum(np.maximum(abs_tol, rel_tol * _maxnorm(done_val)),
                        50 * _EPS * done_mag)
    bad = done_err > 10 * target
    if np.any(bad):
        o = int(np.argmax(bad))
        best = QuadResult(complex(done_val[o]), float(done_err[o]), int(evals[o]))
        raise QuadratureError(
            f"roundoff limits accuracy: error {best.abs_error_estimate:.3g} "
            f"exceeds target {target[o]:.3g}", best=best, owner=o)
    return done_val, done_err, evals, done_mag


def _single(f):
    return lambda t, owner: f(t)


def integrate(f: Callable, a: float, b: float, tol: float = DEFAULT_TOL,
              abs_tol: float | None = None, points: Sequence[float] = (),
              limit: int = DEFAULT_LIMIT) -> QuadResult:
    """Integrate ``f`` over ``[a, b]``; either end may be infinite.

    Convergence target is ``max(abs_tol, tol * |value|)`` with ``abs_tol``
    defaulting to ``tol``. ``points`` are split hints (kinks, near-poles).
    """
    if tol <= 0:
        raise ValueError("tol must be > 0")
    abs_tol = tol if abs_tol is None else abs_tol
    vals, errs, evals, _ = _integrate_many(_single(f), [_segments(a, b, points)],
                                        tol, abs_tol, limit)
    return QuadResult(complex(vals[0]), float(errs[0]), int(evals[0]))


def integrate_finite(f: Callable, a: float, b: float, tol: float = DEFAULT_TOL,
                     abs_tol: float | None = None, points: Sequence[float] = (),
                     limit: int = DEFAULT_LIMIT) -> QuadResult:
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("integrate_finite needs finite limits")
    return integrate(f, a, b, tol, abs_tol, points, limit)


def integrate_semi_infinite(f: Callable, tol: float = DEFAULT_TOL, a: float = 0.0,
                            abs_tol: float | None = None, points: Sequence[float] = (),
                            limit: int = DEFAULT_LIMIT) -> QuadResult:
    """Integrate ``f`` over ``[a, inf)``.

    The tail beyond the last split point is mapped with ``t = p + s/(1-s)``;
    put ``sqrt(alpha)`` in ``points`` for nearly degenerate Fermi integrands.
    """
    return integrate(f, a, math.inf, tol, abs_tol, points, limit)


def integrate_2d(f: Callable, outer_range: tuple[float, float],
                 inner_range: tuple[float, float] = (0.0, math.inf),
                 tol: float = DEFAULT_TOL, abs_tol: float | None = None,
                 outer_points: Sequence[float] = (), inner_points: Sequence[float] = (),
                 limit: int = DEFAULT_LIMIT) -> QuadResult:
    """Nested integral ``int du int dv f(u, v)``.

    ``f`` takes two equal-length arrays. For every batch of outer nodes the
    inner integrals are computed together and their error estimates are
    folded into the outer error. A loose first pass estimates the size of
    the result, so the inner integrals get an absolute target that stays
    meaningful when the outer integral cancels.
    """
    if tol <= 0:
        raise ValueError("tol must be > 0")
    abs_tol = tol if abs_tol is None else abs_tol
    inner_pieces = _segments(inner_range[0], inner_range[1], inner_points)
    outer_pieces = _segments(outer_range[0], outer_range[1], outer_points)
    span = sum(hi - lo for k, _, lo, hi in outer_pieces if k == _FINITE)
    span += sum(1.0 for k, *_ in outer_pieces if k != _FINITE)

    def make_outer(in_rel, in_abs):
        def outer(u, _owner):
            try:
                vals, errs, _, mags = _integrate_many(
                    lambda v, idx: f(u[idx], v), [inner_pieces] * u.size,
                    in_rel, in_abs, limit)
            except QuadratureError as exc:
                where = u[exc.owner] if exc.owner is not None else None
                raise QuadratureError(
                    f"inner integral failed at outer u={where!r}: {exc}",
                    best=exc.best) from exc
            return vals, errs, mags
        return outer

    loose = max(tol, 1e-4)
    try:
        est = _integrate_many(make_outer(0.1 * loose, 0.0), [outer_pieces],
                              loose, 0.0, limit)[0][0]
    except QuadratureError as exc:
        est = exc.best.value if exc.best is not None else 0.0
    target = max(abs_tol, tol * abs(est))
    vals, errs, evals, _ = _integrate_many(make_outer(0.0, 0.1 * target / span),
                                           [outer_pieces], tol, abs_tol, limit)
    return QuadResult(complex(vals[0]), float(errs[0]), int(evals[0]))
