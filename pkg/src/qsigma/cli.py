"""``qsigma`` command line: eval, sweep, figure and compare.

Numbers are written with ``repr`` so every CSV/JSON float round-trips
exactly. Errors are reported as JSON objects ``{code, message, param_echo}``;
exit status 2 means invalid parameters, 3 a quadrature failure.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .degenerate import classic_core, evaluate_safe
from .figures import MODELS, SweepSpec, figure_data, figure_spec, svg_polylines
from .general import sigma2_general_2d, sigma_tr_general
from .lindhard import (COINCIDE_RTOL, COINCIDENCE_POINTS, coincidence_gap, compare,
                       sigma2_lindhard, sigma_lindhard)
from .params import DegenerateParams, GeneralParams, ParameterError, PoleError
from .quad import DEFAULT_TOL, QuadratureError

__all__ = ["main", "evaluate_point", "SWEEP_HEADER"]

SWEEP_HEADER = "var,re_total,im_total,re_classic,im_classic,re_s1,im_s1,re_s2,im_s2,method"

EXIT_OK, EXIT_FAIL, EXIT_PARAMS, EXIT_QUAD = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, code: str, message: str, status: int, echo: dict):
        super().__init__(message)
        self.code, self.status, self.echo = code, status, echo


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("invalid_arguments", message, EXIT_PARAMS, {"argv": sys.argv[1:]})


def default_tol() -> float:
    raw = os.environ.get("QSIGMA_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise CliError("invalid_params", f"QSIGMA_TOL={raw!r} is not a number",
                       EXIT_PARAMS, {"QSIGMA_TOL": raw}) from None
    if not tol > 0:
        raise CliError("invalid_params", "QSIGMA_TOL must be > 0", EXIT_PARAMS,
                       {"QSIGMA_TOL": raw})
    return tol


def _num(v):
    return "" if v is None else repr(float(v))


def _cx(v):
    return (None, None) if v is None else (float(v.real), float(v.imag))


def evaluate_point(model: str, x: float, y: float, q: float, alpha: float | None = None,
                   tol: float = DEFAULT_TOL, check_2d: bool = False) -> dict:
    """Evaluate one model at one point; the dict keys mirror the CSV columns.

    Entries for parts a model does not define are None.
    """
    out = {"model": model, "classic": None, "sigma1": None, "sigma2": None,
           "total": None, "method": "closed_form", "abs_error": 0.0}
    if model == "general":
        p = GeneralParams(alpha=0.0 if alpha is None else alpha, x=x, y=y, q=q)
        r = sigma_tr_general(p, tol)
        out.update(classic=r.classic, sigma1=r.sigma1, sigma2=r.sigma2, total=r.total,
                   method="quadrature", abs_error=r.abs_error)
        if check_2d:
            s2d = sigma2_general_2d(p, tol)
            out["sigma2_2d"] = s2d
            out["sigma2_delta_1d_2d"] = abs(s2d - r.sigma2)
        return out
    p = DegenerateParams(x, y, q)
    if model == "degenerate":
        r = evaluate_safe(p, tol)
        out.update(classic=r.classic, sigma1=r.sigma1, sigma2=r.sigma2, total=r.total,
                   method=r.method, abs_error=r.abs_error)
    elif model == "lindhard":
        out.update(sigma2=sigma2_lindhard(p), total=sigma_lindhard(p))
    elif model == "corrected":
        r = evaluate_safe(p, tol)
        out.update(sigma2=r.sigma2, total=1j * y / x + r.sigma2, method=r.method,
                   abs_error=r.abs_error)
    elif model == "classical":
        c = classic_core(x, y, q)
        out.update(classic=c, total=c)
    else:
        raise ParameterError(f"unknown model {model!r}; choose from {MODELS}")
    return out


def _echo(args) -> dict:
    keys = ("model", "x", "y", "q", "alpha", "tol", "vary", "start", "stop", "points",
            "scale", "id")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _json_complex(v):
    re, im = _cx(v)
    return None if re is None else {"re": re, "im": im}


def cmd_eval(args) -> int:
    model = args.model_pos or args.model or "degenerate"
    for k in ("x", "y", "q"):
        if getattr(args, k) is None:
            raise CliError("invalid_params", f"--{k} is required", EXIT_PARAMS, _echo(args))
    rec = evaluate_point(model, args.x, args.y, args.q, args.alpha, args.tol,
                         check_2d=(model == "general"))
    body = {"model": model, "params": {"x": args.x, "y": args.y, "q": args.q}}
    if model == "general":
        body["params"]["alpha"] = 0.0 if args.alpha is None else args.alpha
    for name in ("total", "classic", "sigma1", "sigma2"):
        body[name] = _json_complex(rec[name])
    short = {"total": "total", "classic": "classic", "sigma1": "s1", "sigma2": "s2"}
    for name, col in short.items():
        re, im = _cx(rec[name])
        body[f"re_{col}"], body[f"im_{col}"] = re, im
    quant = None if rec["sigma1"] is None else rec["sigma1"] + rec["sigma2"]
    body["quant"] = _json_complex(quant)
    body["method"] = rec["method"]
    body["abs_error"] = rec["abs_error"]
    if "sigma2_2d" in rec:
        body["sigma2_2d"] = _json_complex(rec["sigma2_2d"])
        body["sigma2_delta_1d_2d"] = rec["sigma2_delta_1d_2d"]
    _emit(args, json.dumps(body, indent=2) + "\n")
    return EXIT_OK


def _sweep_row(task):
    model, vary, value, fixed, tol = task
    params = {**fixed, vary: value}
    try:
        rec = evaluate_point(model, params["x"], params["y"], params["q"],
                             params.get("alpha"), tol)
    except (PoleError, QuadratureError, ParameterError, ZeroDivisionError):
        return ",".join([_num(value)] + [""] * 8 + ["skipped"])
    cells = [_num(value)]
    for name in ("total", "classic", "sigma1", "sigma2"):
        re, im = _cx(rec[name])
        cells += [_num(re), _num(im)]
    cells.append(rec["method"])
    return ",".join(cells)


def _map(fn, tasks, workers: int):
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    return [fn(t) for t in tasks]


def cmd_sweep(args) -> int:
    model = args.model_pos or args.model or "degenerate"
    vary = args.vary or "q"
    fixed = {k: getattr(args, k) for k in ("x", "y", "q", "alpha")
             if getattr(args, k) is not None and k != vary}
    needed = {"x", "y", "q"} - {vary}
    missing = sorted(needed - fixed.keys())
    if missing:
        raise CliError("invalid_params", f"missing fixed parameter(s): {', '.join(missing)}",
                       EXIT_PARAMS, _echo(args))
    try:
        spec = SweepSpec(model=model, vary=vary, start=args.start, stop=args.stop,
                         points=args.points or 50, scale=args.scale or "linear", fixed=fixed)
    except (ValueError, TypeError) as exc:
        raise CliError("invalid_params", str(exc), EXIT_PARAMS, _echo(args)) from None
    if model == "general":
        GeneralParams(alpha=fixed.get("alpha", 0.0), x=fixed.get("x", 1.0),
                      y=fixed.get("y", 1.0), q=fixed.get("q", 1.0))
    tasks = [(model, vary, float(v), fixed, args.tol) for v in spec.values()]
    rows = _map(_sweep_row, tasks, args.workers)
    buf = io.StringIO()
    buf.write(f"# qsigma sweep model={model} vary={vary} from={spec.start!r} "
              f"to={spec.stop!r} points={spec.points} scale={spec.scale}\n")
    buf.write("# fixed " + " ".join(f"{k}={v!r}" for k, v in sorted(fixed.items())) + "\n")
    buf.write(SWEEP_HEADER + "\n")
    for r in rows:
        buf.write(r + "\n")
    _emit(args, buf.getvalue())
    return EXIT_OK


def figure_csv(fid: int, points: int = 400, start=None, stop=None):
    """CSV text and the raw data for one figure."""
    spec = figure_spec(fid)
    t, cols, meta = figure_data(spec, points, start, stop)
    buf = io.StringIO()
    for k, v in meta.items():
        buf.write(f"# {k}: {v}\n")
    buf.write(",".join([spec.vary, *cols]) + "\n")
    for i in range(t.size):
        buf.write(",".join([_num(t[i])] + [_num(c[i]) for c in cols.values()]) + "\n")
    return buf.getvalue(), t, cols, spec


def cmd_figure(args) -> int:
    if args.id is None:
        raise CliError("invalid_params", "--id is required", EXIT_PARAMS, _echo(args))
    try:
        text, t, cols, spec = figure_csv(args.id, args.points or 400, args.start, args.stop)
    except ValueError as exc:
        raise CliError("invalid_params", str(exc), EXIT_PARAMS, _echo(args)) from None
    _emit(args, text)
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(svg_polylines(t, cols, title=spec.caption))
    return EXIT_OK


_COMPARE_FIELDS = ("sigma_tr", "sigma_tr_1", "sigma_L", "sigma2", "sigma2_L",
                   "sigma_classic", "diff_closed")
DIFF_TOL = 1e-10


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def cmd_compare(args) -> int:
    xs = args.x or [0.1, 0.5, 1.0, 3.0]
    ys = args.y or [0.01]
    qs = args.q or [0.1, 0.5, 1.0, 2.0, 3.0]
    try:
        grid = [DegenerateParams(x, y, q) for x in xs for y in ys for q in qs]
    except ParameterError as exc:
        raise CliError("invalid_params", str(exc), EXIT_PARAMS, _echo(args)) from None
    rows = compare(grid)
    checks = {v: k for k, v in COINCIDENCE_POINTS.items()}
    header = ["x", "y", "q"]
    for f in _COMPARE_FIELDS:
        header += [f"re_{f}", f"im_{f}"]
    header += ["diff_err", "diff_pass", "check", "check_gap", "check_pass", "error"]
    buf = io.StringIO()
    buf.write(f"# qsigma compare: diff_pass means |sigma_tr - sigma_tr_1 - diff_closed| "
              f"<= {DIFF_TOL!r}; check_pass means check_gap < {COINCIDE_RTOL!r}\n")
    buf.write(",".join(header) + "\n")
    all_pass = True
    for r in rows:
        p = r.params
        cells = [_num(p.x), _num(p.y), _num(p.q)]
        if not r.ok:
            all_pass = False
            cells += [""] * (2 * len(_COMPARE_FIELDS)) + ["", "fail", "", "", "", r.error]
            buf.write(",".join(cells) + "\n")
            continue
        for f in _COMPARE_FIELDS:
            re, im = _cx(getattr(r, f))
            cells += [_num(re), _num(im)]
        derr = abs(r.sigma_tr - r.sigma_tr_1 - r.diff_closed)
        dpass = derr <= DIFF_TOL
        name = checks.get((p.x, p.y, p.q), "")
        gap, cpass = "", ""
        if name:
            g = coincidence_gap(name, r)
            gap, cpass = _num(g), ("pass" if g < COINCIDE_RTOL else "fail")
            all_pass &= g < COINCIDE_RTOL
        all_pass &= dpass
        cells += [_num(derr), "pass" if dpass else "fail", name, gap, cpass, ""]
        buf.write(",".join(cells) + "\n")
    _emit(args, buf.getvalue())
    return EXIT_OK if all_pass else EXIT_FAIL


def _emit(args, text: str) -> None:
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="qsigma", description="Transverse conductivity of a quantum "
                  "collisional plasma: closed forms, quadrature and Lindhard comparison.")
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, point_type=float):
        sp.add_argument("--model", choices=MODELS)
        sp.add_argument("--x", type=point_type)
        sp.add_argument("--y", type=point_type)
        sp.add_argument("--q", type=point_type)
        sp.add_argument("--tol", type=float, default=None,
                        help="quadrature tolerance (default: $QSIGMA_TOL or 1e-10)")
        sp.add_argument("--out", help="write output to this file instead of stdout")

    sp = sub.add_parser("eval", help="evaluate one point, print JSON")
    sp.add_argument("model_pos", nargs="?", choices=MODELS, metavar="MODEL")
    common(sp)
    sp.add_argument("--alpha", type=float)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("sweep", help="sweep one parameter, print CSV")
    sp.add_argument("model_pos", nargs="?", choices=MODELS, metavar="MODEL")
    common(sp)
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--vary", choices=("x", "y", "q", "alpha"))
    sp.add_argument("--from", dest="start", type=float, required=True)
    sp.add_argument("--to", dest="stop", type=float, required=True)
    sp.add_argument("--points", type=int)
    sp.add_argument("--scale", choices=("linear", "log"))
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("figure", help="data for one of the ten figures, print CSV")
    sp.add_argument("--id", type=int)
    sp.add_argument("--points", type=int)
    sp.add_argument("--from", dest="start", type=float)
    sp.add_argument("--to", dest="stop", type=float)
    sp.add_argument("--svg", help="also write an SVG polyline plot here")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_figure)

    sp = sub.add_parser("compare", help="kinetic vs Lindhard comparison grid, print CSV")
    common(sp, point_type=_float_list)
    sp.set_defaults(func=cmd_compare)
    return top


def main(argv=None) -> int:
    args = None
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "tol", None) is None:
            args.tol = default_tol()
        return args.func(args)
    except CliError as exc:
        return _fail(exc.code, str(exc), exc.status, exc.echo)
    except ParameterError as exc:
        return _fail("invalid_params", str(exc), EXIT_PARAMS, _echo(args) if args else {})
    except QuadratureError as exc:
        return _fail("quadrature_failure", str(exc), EXIT_QUAD, _echo(args) if args else {})
    except PoleError as exc:
        return _fail("pole", str(exc), EXIT_PARAMS, _echo(args) if args else {})


def _fail(code: str, message: str, status: int, echo: dict) -> int:
    sys.stderr.write(json.dumps({"code": code, "message": message, "param_echo": echo}) + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
