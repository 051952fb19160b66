"""Declarative sweeps and the ten degenerate-plasma figure data sets."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .degenerate import evaluate_safe_arrays
from .lindhard import lindhard_core

__all__ = [
    "MODELS",
    "VARIABLES",
    "QUANTITIES",
    "SweepSpec",
    "FigureSpec",
    "FIGURES",
    "figure_spec",
    "grid",
    "figure_data",
    "svg_polylines",
]

MODELS = ("degenerate", "general", "lindhard", "corrected", "classical")
VARIABLES = ("x", "y", "q", "alpha")
QUANTITIES = ("total", "classic", "quant", "sigma1", "sigma2")


@dataclass(frozen=True)
class SweepSpec:
    model: str
    vary: str
    start: float
    stop: float
    points: int
    scale: str = "linear"
    fixed: dict = field(default_factory=dict)
    part: str = "re"
    quantity: str = "total"

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}; choose from {MODELS}")
        if self.vary not in VARIABLES:
            raise ValueError(f"cannot vary {self.vary!r}; choose from {VARIABLES}")
        if self.vary == "alpha" and self.model != "general":
            raise ValueError("alpha can only be varied for the general model")
        if self.points < 2:
            raise ValueError("a sweep needs at least 2 points")
        if not self.start < self.stop:
            raise ValueError("sweep needs from < to")
        if self.scale not in ("linear", "log"):
            raise ValueError("scale must be 'linear' or 'log'")
        if self.scale == "log" and self.start <= 0:
            raise ValueError("log scale needs from > 0")
        if self.part not in ("re", "im", "abs") or self.quantity not in QUANTITIES:
            raise ValueError("output selector must be {re,im,abs} x " + str(QUANTITIES))

    def values(self) -> np.ndarray:
        return grid(self.start, self.stop, self.points, self.scale)


def grid(start: float, stop: float, points: int, scale: str = "linear") -> np.ndarray:
    if scale == "log":
        return np.geomspace(start, stop, points)
    return np.linspace(start, stop, points)


@dataclass(frozen=True)
class FigureSpec:
    """One figure: the swept variable, the fixed parameters and the plotted part.

    ``kind`` is ``"sigma2_pair"`` (kinetic ``|sigma2|`` against the Lindhard
    integral part), ``"three_curves"`` (kinetic, corrected and classical
    conductivity) or ``"q_family"`` (the kinetic curve at several ``q``, with
    the other two models as companion columns).
    """

    id: int
    kind: str
    vary: str
    fixed: dict
    part: str
    start: float
    stop: float
    caption: str
    q_values: tuple = ()

    def __post_init__(self):
        if not 1 <= self.id <= 10:
            raise ValueError("figure id must be in 1..10")


_X_RANGE = (0.02, 3.0)
_Q_RANGE = (0.05, 3.0)
_Y = 0.01


def _make_figures():
    figs = [
        FigureSpec(1, "sigma2_pair", "x", {"q": 2.0, "y": _Y}, "abs", *_X_RANGE,
                   "q=2, y=0.01: |sigma2/sigma0| against x, kinetic vs Lindhard"),
        FigureSpec(2, "sigma2_pair", "q", {"x": 1.0, "y": _Y}, "abs", *_Q_RANGE,
                   "x=1, y=0.01: |sigma2/sigma0| against q, kinetic vs Lindhard"),
    ]
    for fid, xv in ((3, 0.001), (5, 0.1)):
        for off, part in ((0, "re"), (1, "im")):
            figs.append(FigureSpec(fid + off, "three_curves", "q", {"x": xv, "y": _Y}, part,
                                   *_Q_RANGE, f"x={xv}, y=0.01: {part} sigma_tr/sigma0 against q"))
    for off, part in ((0, "re"), (1, "im")):
        figs.append(FigureSpec(7 + off, "three_curves", "x", {"q": 0.5, "y": _Y}, part,
                               *_X_RANGE, f"q=0.5, y=0.01: {part} sigma_tr/sigma0 against x"))
    for off, part in ((0, "re"), (1, "im")):
        figs.append(FigureSpec(9 + off, "q_family", "x", {"y": _Y}, part, *_X_RANGE,
                               f"y=0.01, curves q=0.1, 1, 2: {part} sigma_tr/sigma0 against x",
                               q_values=(0.1, 1.0, 2.0)))
    return {f.id: f for f in figs}


FIGURES = _make_figures()


def figure_spec(fid: int) -> FigureSpec:
    try:
        return FIGURES[int(fid)]
    except KeyError:
        raise ValueError(f"figure id must be in 1..10, got {fid!r}") from None


def _part(v, part):
    return {"re": np.real, "im": np.imag, "abs": np.abs}[part](v)


def _three(x, y, q):
    classic, s1, s2, _ = evaluate_safe_arrays(x, y, q)
    total = classic + s1 + s2
    corrected = 1j * y / x + s2
    return total, corrected, classic


def figure_data(spec: FigureSpec, points: int = 400, start: float | None = None,
                stop: float | None = None):
    """Compute the curves of a figure.

    Returns ``(abscissa, columns, metadata)`` where ``columns`` maps a column
    name to a float array.
    """
    lo = spec.start if start is None else start
    hi = spec.stop if stop is None else stop
    if not 0 < lo < hi or points < 2:
        raise ValueError("figure range must satisfy 0 < from < to and points >= 2")
    t = np.linspace(lo, hi, points)
    fixed = dict(spec.fixed)
    cols: dict[str, np.ndarray] = {}
    if spec.kind == "sigma2_pair":
        args = {**fixed, spec.vary: t}
        x, y, q = (np.broadcast_to(np.asarray(args[k], float), t.shape) for k in "xyq")
        _, _, s2, _ = evaluate_safe_arrays(x, y, q)
        cols["abs_sigma2"] = np.abs(s2)
        cols["abs_sigma2_lindhard"] = np.abs(lindhard_core(x, y, q, gauge=False))
    elif spec.kind == "three_curves":
        args = {**fixed, spec.vary: t}
        x, y, q = (np.broadcast_to(np.asarray(args[k], float), t.shape) for k in "xyq")
        total, corrected, classic = _three(x, y, q)
        p = spec.part
        cols[f"{p}_sigma_tr"] = _part(total, p)
        cols[f"{p}_sigma_tr_1"] = _part(corrected, p)
        cols[f"{p}_sigma_classic"] = _part(classic, p)
    elif spec.kind == "q_family":
        p = spec.part
        y = np.full(t.shape, fixed["y"])
        fam = {qv: _three(t, y, np.full(t.shape, qv)) for qv in spec.q_values}
        for name, k in (("sigma_tr", 0), ("sigma_tr_1", 1), ("sigma_classic", 2)):
            for qv in spec.q_values:
                cols[f"{p}_{name}_q{qv:g}"] = _part(fam[qv][k], p)
    else:
        raise ValueError(f"unknown figure kind {spec.kind!r}")
    meta = {
        "figure": spec.id,
        "caption": spec.caption,
        "vary": spec.vary,
        "fixed": " ".join(f"{k}={v!r}" for k, v in sorted(fixed.items())),
        "range": f"[{lo!r}, {hi!r}]",
        "points": points,
        "note": "abscissa range and density are defaults chosen for this tool",
    }
    return t, cols, meta


def svg_polylines(t, cols: dict, width: int = 640, height: int = 400, title: str = "") -> str:
    """Render curves as a bare SVG polyline plot (no axes labels beyond the range)."""
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
              "#e377c2", "#7f7f7f", "#bcbd22"]
    t = np.asarray(t, float)
    ys = [np.asarray(v, float) for v in cols.values()]
    finite = np.concatenate([v[np.isfinite(v)] for v in ys]) if ys else np.array([0.0])
    ymin, ymax = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    if ymax == ymin:
        ymax = ymin + 1.0
    pad = 30

    def sx(v):
        return pad + (v - t[0]) / (t[-1] - t[0]) * (width - 2 * pad)

    def sy(v):
        return height - pad - (v - ymin) / (ymax - ymin) * (height - 2 * pad)

    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
             f'<title>{title}</title>',
             f'<rect x="{pad}" y="{pad}" width="{width - 2 * pad}" height="{height - 2 * pad}" '
             'fill="none" stroke="#999"/>']
    for i, (name, v) in enumerate(cols.items()):
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(t, v)
                       if math.isfinite(b))
        c = colors[i % len(colors)]
        lines.append(f'<polyline fill="none" stroke="{c}" stroke-width="1.5" points="{pts}">'
                     f'<title>{name}</title></polyline>')
        lines.append(f'<text x="{pad + 5}" y="{pad + 15 + 14 * i}" fill="{c}" '
                     f'font-size="11">{name}</text>')
    lines.append(f'<text x="{pad}" y="{height - 8}" font-size="10">'
                 f'{t[0]:g} .. {t[-1]:g}; y in [{ymin:.4g}, {ymax:.4g}]</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
