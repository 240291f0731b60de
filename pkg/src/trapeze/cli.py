"""Command-line front end.

Every subcommand writes one JSON document (schema ``trapeze/1``) to stdout or
to ``--out``. Exit status is 0 on success, 1 on domain and input errors and 2
when a ``verify`` check fails.
"""

from __future__ import annotations

import argparse
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import approx, fixtures, io, spectral, svg
from .action import action, almost_elegant_action, elegant_action
from .curves import load_curve
from .errors import DomainError, TrapezeError, check_r, check_theta
from .inscribe import ALMOST, ELEGANT, find_inscriptions, width
from .trapezoid import TrapezoidClass


class _UsageError(TrapezeError):
    code = "usage_error"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


# --- argument helpers -----------------------------------------------------------------

def resolve_threads(arg):
    env = os.environ.get("TRAPEZE_THREADS")
    if env:
        return max(1, int(env))
    if arg:
        return max(1, int(arg))
    return os.cpu_count() or 1


def parse_thetas(text, degrees=False):
    """Comma list ``a,b,c`` or range ``start:stop:n`` (n points, both ends included)."""
    text = text.strip()
    if ":" in text:
        a, b, n = text.split(":")
        vals = np.linspace(float(a), float(b), int(n))
    else:
        vals = np.array([float(t) for t in text.split(",") if t])
    return np.deg2rad(vals) if degrees else vals


def _angle(x, degrees):
    return None if x is None else (float(np.deg2rad(x)) if degrees else float(x))


def get_curve(source):
    if source is None:
        raise DomainError("a curve is required (--curve FILE or a built-in name)")
    path = Path(source)
    if path.exists():
        return load_curve(path)
    name = source.removeprefix("builtin:")
    table = {"circle": fixtures.circle, "ellipse": fixtures.ellipse,
             "quartic": fixtures.quartic_oval, "square": fixtures.unit_square,
             "limacon": fixtures.limacon, "fig6": fixtures.fig6,
             "fig4_left": lambda: fixtures.fig4_left()[0],
             "fig4_right": lambda: fixtures.fig4_right()[0]}
    if name in table:
        return table[name]()
    raise DomainError(f"curve file not found: {source}")


def _class(args):
    r = check_r(args.r)
    theta = check_theta(_angle(args.theta, args.degrees))
    return TrapezoidClass(r, theta)


def _common(p):
    p.add_argument("--curve", help="curve JSON file or built-in name (circle, ellipse, ...)")
    p.add_argument("--out", help="write the JSON document here instead of stdout")
    p.add_argument("--csv", help="also write a CSV table")
    p.add_argument("--svg", help="also write an SVG drawing")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--degrees", action="store_true", help="read angles in degrees")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid-n", type=int, default=256)
    p.add_argument("--tol", type=float, default=None)


def build_parser():
    parser = _Parser(prog="trapeze", description="Inscribed isosceles trapezoids in Jordan curves.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    for name in ("inscribe", "action", "spectrum"):
        p = sub.add_parser(name)
        _common(p)
        p.add_argument("--r", type=float, required=True)
        p.add_argument("--theta", type=float, required=True)
        if name == "inscribe":
            p.add_argument("--width", action="store_true", help="also report the width")

    p = sub.add_parser("branch")
    _common(p)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--theta-start", type=float, required=True)
    p.add_argument("--theta-end", type=float, default=np.pi)
    p.add_argument("--index", type=int, default=None, help="seed inscription index")

    p = sub.add_parser("l2")
    _common(p)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--thetas", default=None, help="a,b,c or start:stop:n")
    p.add_argument("--n", type=int, default=32, help="uniform grid k*pi/n, k=1..n-1")
    p.add_argument("--threshold", type=float, default=None,
                   help="report whether l2 stays above this for theta >= 0.9 pi")

    p = sub.add_parser("verify")
    _common(p)
    p.add_argument("--check", required=True,
                   choices=["variation", "triangle", "shrinkout", "duality", "vertex"])
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--theta-start", type=float, default=None)
    p.add_argument("--n", type=int, default=32)

    p = sub.add_parser("mollify")
    _common(p)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--kernel", default="bump", choices=["bump"])
    p.add_argument("--rescale-area", action="store_true")

    p = sub.add_parser("constants")
    _common(p)
    p.add_argument("--K", type=float, required=True)

    p = sub.add_parser("theoremA")
    _common(p)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--thetas", required=True)
    p.add_argument("--eps-ladder", default="0.02,0.01,0.005")

    p = sub.add_parser("render")
    _common(p)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--theta", type=float, default=None)
    return parser


# --- commands --------------------------------------------------------------------------

class Failed(Exception):
    """A verification check ran to completion and failed."""

    def __init__(self, result):
        super().__init__("verification failed")
        self.result = result


def _pmap(fn, items, threads):
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    from concurrent.futures import ThreadPoolExecutor
    with ThreadPoolExecutor(threads) as pool:
        return list(pool.map(fn, items))


def cmd_inscribe(args, curve, threads):
    cls = _class(args)
    ins = find_inscriptions(curve, cls, grid_n=args.grid_n, tol=args.tol)
    res = {"curve": curve.metadata(), "count": len(ins), "flags": ins.flags,
           "diagnostics": ins.diagnostics, "inscriptions": [q.to_dict() for q in ins]}
    if args.width:
        res["width"] = vars(width(curve, cls))
    if args.svg:
        Path(args.svg).write_text(svg.render(curve, ins))
    if args.csv:
        io.write_csv(args.csv, ["s1", "s2", "s1p", "s2p", "diag_length", "kind"],
                     [(q.s1, q.s2, q.s1p, q.s2p, q.diag_length, q.kind) for q in ins])
    return res


def _action_row(curve, q):
    row = {"inscription": q.to_dict(), "action": action(curve, q).to_dict()}
    if q.kind == ELEGANT:
        row["area_form"] = elegant_action(curve, q).to_dict()
    elif q.kind == ALMOST:
        row["area_form"] = almost_elegant_action(curve, q).to_dict()
    return row


def cmd_action(args, curve, threads):
    cls = _class(args)
    ins = find_inscriptions(curve, cls, grid_n=args.grid_n, tol=args.tol)
    rows = _pmap(lambda q: _action_row(curve, q), list(ins), threads)
    if args.csv:
        io.write_csv(args.csv, ["s1", "s2", "action"],
                     [(r_["inscription"]["s1"], r_["inscription"]["s2"], r_["action"]["value"])
                      for r_ in rows])
    return {"area": curve.area, "flags": ins.flags, "actions": rows}


def cmd_spectrum(args, curve, threads):
    cls = _class(args)
    sp = spectral.spectrum(curve, cls, grid_n=args.grid_n)
    if args.csv:
        io.write_csv(args.csv, ["theta", "action"], [(cls.theta, v) for v in sp.values])
    return {"area": curve.area, "flags": sp.flags, "values": sp.values,
            "entries": [{"action": a.to_dict(), "inscription": q.to_dict()} for a, q in sp.entries]}


def _seed_branches(args, curve, r, t0, t1, threads):
    cls = TrapezoidClass(r, t0)
    ins = list(find_inscriptions(curve, cls, grid_n=args.grid_n))
    if getattr(args, "index", None) is not None:
        ins = [ins[args.index]]
    return _pmap(lambda q: spectral.continue_branch(curve, r, t0, t1, q), ins, threads)


def cmd_branch(args, curve, threads):
    r = check_r(args.r)
    t0 = check_theta(_angle(args.theta_start, args.degrees))
    t1 = check_theta(_angle(args.theta_end, args.degrees), closed=True)
    branches = _seed_branches(args, curve, r, t0, t1, threads)
    if args.csv:
        io.write_csv(args.csv, ["branch", "theta", "action"],
                     [(i, t, a) for i, b in enumerate(branches)
                      for t, a in zip(b.thetas, b.actions)])
    if args.svg:
        Path(args.svg).write_text(svg.branch_diagram(branches))
    return {"area": curve.area, "shrinkout_limits": spectral.shrinkout_limits(curve, r),
            "branches": [b.to_dict() for b in branches]}


def _grid(args):
    if args.thetas:
        return parse_thetas(args.thetas, args.degrees)
    return np.pi * np.arange(1, args.n) / args.n


def cmd_l2(args, curve, threads):
    r = check_r(args.r)
    grid = _grid(args)
    for t in grid:
        check_theta(float(t), closed=True)
    proxy = spectral.l2_proxy(curve, r, grid)
    if args.csv:
        io.write_csv(args.csv, ["theta", "l2"], list(zip(proxy.theta_grid, proxy.l2_values)))
    res = {"proxy": proxy.to_dict(), "triangle": spectral.check_triangle(proxy)}
    if args.threshold is not None:
        # a finite grid can only suggest the limit at pi, never certify it
        tail = proxy.l2_values[(proxy.theta_grid >= 0.9 * np.pi) & np.isfinite(proxy.l2_values)]
        res["near_pi"] = {"threshold": args.threshold, "points": int(tail.size),
                          "min": float(tail.min()) if tail.size else None,
                          "above": bool(tail.size and tail.min() > args.threshold),
                          "heuristic": True}
    return res


def cmd_verify(args, curve, threads):
    r = check_r(args.r)
    check = args.check
    if check in ("variation", "triangle"):
        proxy = spectral.l2_proxy(curve, r, np.pi * np.arange(1, args.n) / args.n)
        bound = 2 * r * (1 - r) * curve.radius ** 2
        slopes = np.diff(proxy.l2_values) / np.diff(proxy.theta_grid)
        if check == "variation":
            ok = bool(np.all(np.diff(proxy.l2_values) > 0) and np.all(slopes <= bound + 1e-6))
            res = {"bound": bound, "max_slope": float(np.max(slopes)), "proxy": proxy.to_dict()}
        else:
            rep = spectral.check_triangle(proxy)
            ok = rep["passed"]
            res = {"triangle": rep, "proxy": proxy.to_dict()}
    else:
        default = np.pi - 0.3 if check == "duality" else np.pi / 2
        t0 = check_theta(_angle(args.theta_start, args.degrees) or default)
        branches = _seed_branches(args, curve, r, t0, np.pi, threads)
        shrink = [b for b in branches if b.limit["type"] == "Shrinkout"]
        if check == "shrinkout":
            rows = []
            for b in shrink:
                m = spectral.match_shrinkout(curve, r, b.limit["limit_action"])
                rows.append({"limit_action": b.limit["limit_action"], "matched": m,
                             "point": b.limit["point"]})
            ok = bool(rows) and all(x["matched"] is not None for x in rows)
            res = {"admissible": spectral.shrinkout_limits(curve, r), "limits": rows}
        elif check == "vertex":
            rows = [spectral.vertex_check(curve, b) for b in shrink]
            ok = bool(rows) and all(x["passed"] for x in rows)
            res = {"checks": rows}
        else:
            quads = [b for b in branches if b.limit["type"] == "Quadrisecant"]
            pairs, used = [], set()
            for i, a in enumerate(quads):
                for j in range(i + 1, len(quads)):
                    if i in used or j in used:
                        continue
                    try:
                        rep = spectral.quadrisecant_duality(a, quads[j], curve)
                    except TrapezeError:
                        continue
                    pairs.append(rep)
                    used.update((i, j))
            ok = bool(pairs) and all(p["passed"] for p in pairs)
            res = {"pairs": pairs, "quadrisecant_branches": len(quads)}
    res["check"] = check
    res["passed"] = bool(ok)
    if not ok:
        raise Failed(res)
    return res


def cmd_mollify(args, curve, threads):
    m = approx.mollify(curve, args.eps, approx.MollifierKernel(name=args.kernel))
    if args.rescale_area:
        dev, mod = m.deviation, m.modulus
        m = approx.rescale_to_area(m, curve.area)
        m.deviation, m.modulus = dev, mod
    res = {"eps": args.eps, "kernel": args.kernel, "modes": m.K, "deviation": m.deviation,
           "modulus_of_continuity": m.modulus, "area": m.area, "curve": m.to_dict()}
    if args.svg:
        Path(args.svg).write_text(svg.render(m))
    return res


def cmd_constants(args, curve, threads):
    return approx.lipschitz_constants(curve, args.K).to_dict()


def cmd_theorem_a(args, curve, threads):
    r = check_r(args.r)
    thetas = parse_thetas(args.thetas, args.degrees)
    ladder = [float(e) for e in args.eps_ladder.split(",") if e]
    return approx.theorem_A_experiment(curve, r, thetas, ladder,
                                       grid_n=min(args.grid_n, 128))


def cmd_render(args, curve, threads):
    ins = []
    if args.r is not None and args.theta is not None:
        ins = find_inscriptions(curve, _class(args), grid_n=args.grid_n)
    text = svg.render(curve, ins)
    if args.svg:
        Path(args.svg).write_text(text)
    return {"svg": args.svg, "inscriptions": len(ins)}


COMMANDS = {"inscribe": cmd_inscribe, "action": cmd_action, "spectrum": cmd_spectrum,
            "branch": cmd_branch, "l2": cmd_l2, "verify": cmd_verify, "mollify": cmd_mollify,
            "constants": cmd_constants, "theoremA": cmd_theorem_a, "render": cmd_render}

def _config(args):
    skip = {"out", "csv", "svg", "threads"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def run(argv=None, stdout=None):
    """Parse, dispatch and emit; returns the exit status."""
    stdout = stdout or sys.stdout
    args = None
    try:
        # the aspect-ratio gate comes first, even before missing-option errors
        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument("--r", default=None)
        early, _ = pre.parse_known_args(argv)
        try:
            early_r = None if early.r is None else float(early.r)
        except ValueError:
            early_r = None  # left for the full parser to report
        if early_r is not None:
            check_r(early_r)
        args = build_parser().parse_args(argv)
        # numeric gates run before the curve is loaded
        if getattr(args, "r", None) is not None:
            check_r(args.r)
        for name in ("theta", "theta_start"):
            if getattr(args, name, None) is not None:
                check_theta(_angle(getattr(args, name), args.degrees))
        if args.grid_n < 32:
            raise DomainError("grid-n must be at least 32", grid_n=args.grid_n)
        threads = resolve_threads(args.threads)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            curve = get_curve(args.curve)
            result = COMMANDS[args.command](args, curve, threads)
        doc, status = io.envelope(args.command, _config(args), result), 0
    except Failed as exc:
        doc, status = io.envelope(args.command, _config(args), exc.result), 2
    except (TrapezeError, ValueError) as exc:
        code = getattr(exc, "code", "domain_error")
        err = {"code": code, "message": str(exc), "details": getattr(exc, "details", {})}
        doc = io.envelope(getattr(args, "command", None), _config(args) if args else {},
                          error=err)
        status = getattr(exc, "exit_status", 1)
    text = io.dumps(doc)
    if args is not None and getattr(args, "out", None) and status != 1:
        Path(args.out).write_text(text)
    else:
        stdout.write(text)
    return status


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
