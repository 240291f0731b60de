"""Action spectra, theta-continuation of inscription branches and limit diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .action import action, capping_path_general
from .curves import binormals
from .errors import MismatchedQuadrisecants, ProxyUnavailable, SeedInvalid
from .inscribe import (Inscription, classify, coefficients, find_inscriptions, make_inscription,
                       newton, system, theta_derivative)
from .trapezoid import TrapezoidClass


@dataclass
class ActionSpectrum:
    cls: TrapezoidClass
    entries: list  # (ActionValue, Inscription), ascending by value
    flags: list = field(default_factory=list)

    @property
    def values(self):
        return np.array([a.value for a, _ in self.entries])


def spectrum(curve, cls, grid_n=256):
    """Actions of every inscription found at (r, theta), sorted ascending."""
    ins = find_inscriptions(curve, cls, grid_n=grid_n)
    entries = sorted(((action(curve, q), q) for q in ins), key=lambda t: t[0].value)
    return ActionSpectrum(cls, entries, list(ins.flags))


# --- continuation -------------------------------------------------------------------

@dataclass
class StepControl:
    h0: float = 0.02
    h_min: float = 1e-9
    h_max: float = 0.1
    grow: float = 1.5
    max_corrector: int = 8
    max_steps: int = 5000


@dataclass
class Branch:
    r: float
    samples: list  # (theta, Inscription, ActionValue)
    limit: dict
    flags: list = field(default_factory=list)

    @property
    def thetas(self):
        return np.array([t for t, _, _ in self.samples])

    @property
    def actions(self):
        return np.array([a.value for _, _, a in self.samples])

    @property
    def diags(self):
        return np.array([q.diag_length for _, q, _ in self.samples])

    def to_dict(self):
        lim = {k: v for k, v in self.limit.items() if k != "vertices"}
        if "vertices" in self.limit:
            lim["vertices"] = [[float(v.real), float(v.imag)] for v in self.limit["vertices"]]
        if "point" in lim:
            p = lim["point"]
            lim["point"] = [float(p.real), float(p.imag)]
        return {"r": self.r, "limit": lim, "flags": list(self.flags),
                "samples": [{"theta": t, "action": a.value, "diag_length": q.diag_length,
                             "s1": q.s1, "s2": q.s2} for t, q, a in self.samples]}


def _corrector(curve, r, theta, x, tol, max_iter):
    coef = coefficients(r, theta)
    for it in range(max_iter + 1):
        F, J = system(curve, coef, x[None, :])
        if np.max(np.abs(F)) < tol:
            return x, True, it
        if it == max_iter:
            break
        step = -np.linalg.pinv(J[0], rcond=1e-10) @ F[0]
        if np.linalg.norm(step) > 0.05:
            return x, False, it
        x = x + step
    return x, False, max_iter


def _tangent(curve, r, theta, x):
    _, J = system(curve, coefficients(r, theta), x[None, :])
    dF = theta_derivative(curve, r, theta, x[None, :])[0]
    return -np.linalg.pinv(J[0], rcond=1e-10) @ dF


def _branch_action(curve, ins):
    return action(curve, ins, capping_path_general(curve, ins))


def _collinearity(vertices):
    v = np.array(vertices)
    m = np.column_stack([v.real, v.imag])
    m = m - m.mean(axis=0)
    return float(np.linalg.svd(m, compute_uv=False)[-1])


def _min_pair_sep(vertices):
    v = np.array(vertices)
    d = np.abs(v[:, None] - v[None, :])
    return float(np.min(d[np.triu_indices(4, 1)]))


def continue_branch(curve, r, theta_start, theta_end, seed, step_ctrl=None, stops=()):
    """Follow an inscription in theta with a secant predictor and Newton corrector.

    Parameters
    ----------
    curve : JordanCurve
    r : float
    theta_start, theta_end : float
        Continuation runs from ``theta_start`` towards ``theta_end``; either
        end may be 0 or pi.
    seed : Inscription
        Must solve the system at ``theta_start``.
    step_ctrl : StepControl, optional
    stops : sequence of float
        Angles that must appear exactly among the samples.

    Returns
    -------
    Branch
        ``limit["type"]`` is one of Shrinkout, Quadrisecant, Fold, RangeEnd
        or StepCollapse.
    """
    ctrl = step_ctrl or StepControl()
    diam = curve.diameter
    tol = 1e-10 * diam
    delta = 1e-3 * diam
    x = np.array(seed.params, dtype=float)
    _, ok, _ = _corrector(curve, r, theta_start, x, tol, ctrl.max_corrector)
    if not ok:
        raise SeedInvalid("seed does not solve the system at theta_start", theta=theta_start)
    sgn = 1.0 if theta_end >= theta_start else -1.0
    stops = sorted({float(t) for t in stops if (t - theta_start) * sgn > 0
                    and (theta_end - t) * sgn >= 0}, key=lambda t: sgn * t)
    targets = stops + ([theta_end] if theta_end not in stops else [])
    cls0 = TrapezoidClass.limit(r, theta_start)
    ins0 = make_inscription(curve, cls0, x, classify_kind=False)
    samples = [(theta_start, ins0, _branch_action(curve, ins0))]
    flags = []
    bound = 2 * r * (1 - r) * curve.radius ** 2
    theta, h = theta_start, ctrl.h0
    prev = None
    limit = None
    if theta_end == theta_start:
        limit = {"type": "RangeEnd", "theta": float(theta)}
    steps = 0
    while limit is None and steps < ctrl.max_steps:
        steps += 1
        target = next(t for t in targets if (t - theta) * sgn > 1e-15)
        tn = theta + sgn * min(h, abs(target - theta))
        if abs(target - tn) < 1e-12:
            tn = target
        if prev is None:
            xp = x + (tn - theta) * _tangent(curve, r, theta, x)
        else:
            xp = x + (tn - theta) * (x - prev[1]) / (theta - prev[0])
        xn, ok, its = _corrector(curve, r, tn, xp, tol, ctrl.max_corrector)
        d_old = samples[-1][1].diag_length
        if ok:
            dn = abs(complex(curve.eval(xn[0])) - complex(curve.eval(xn[1])))
            ok = 0.5 <= dn / d_old <= 2.0 and np.linalg.norm(xn - xp) <= 0.05
        if not ok:
            h *= 0.5
            if h < ctrl.h_min:
                limit = {"type": "Fold", "theta_fold": float(theta)}
                break
            continue
        cls = TrapezoidClass.limit(r, tn)
        ins = make_inscription(curve, cls, xn, classify_kind=False)
        act = _branch_action(curve, ins)
        if abs(act.value - samples[-1][2].value) > bound * abs(tn - theta) + 1e-8 * curve.area:
            flags.append(f"variation_bound_exceeded@{tn:.6g}")
        prev = (theta, x)
        theta, x = tn, xn
        samples.append((theta, ins, act))
        if its <= 3:
            h = min(h * ctrl.grow, ctrl.h_max)
        if ins.diag_length < delta:
            limit = _shrinkout(curve, samples)
            break
        if _collinearity(ins.vertices) < 1e-7 * diam and _min_pair_sep(ins.vertices) > delta:
            limit = {"type": "Quadrisecant", "theta": float(theta),
                     "vertices": list(ins.vertices), "action": act.value}
            break
        if abs(theta - theta_end) < 1e-15:
            limit = {"type": "RangeEnd", "theta": float(theta)}
            break
    if limit is None:
        limit = {"type": "StepCollapse", "theta": float(theta)}
    for _, q, _ in (samples[0], samples[-1]):
        if q.cls.theta > 0 and q.cls.theta < np.pi:
            q.kind = classify(curve, q)
    return Branch(r, samples, limit, flags)


def _extrapolate(t, y, t0=0.0, deg=2):
    """Least-squares polynomial in t evaluated at t0 (Richardson-type extrapolation)."""
    deg = min(deg, len(t) - 1)
    c = np.polyfit(t, y, deg)
    return float(np.polyval(c, t0))


def _shrinkout(curve, samples):
    last = samples[-5:]
    th = np.array([s[0] for s in last])
    diag = np.array([s[1].diag_length for s in last])
    acts = np.array([s[2].value for s in last])
    # angle where the diagonal reaches zero, from a linear fit of the last samples
    if len(th) >= 2:
        c = np.polyfit(th[-3:], diag[-3:], 1)
        theta_lim = float(-c[1] / c[0]) if c[0] != 0 else float(th[-1])
    else:
        theta_lim = float(th[-1])
    if abs(theta_lim - th[-1]) > 10 * abs(th[-1] - th[0]) + 1e-3:
        theta_lim = float(th[-1])
    t = theta_lim - th
    limit_action = _extrapolate(t, acts)
    cents = np.array([np.mean(np.array(s[1].vertices)) for s in last])
    pars, _, _ = curve.project(cents)
    pars = np.unwrap(2 * np.pi * pars) / (2 * np.pi)
    par = _extrapolate(t, pars, deg=1) % 1.0
    point = complex(curve.eval(par))
    return {"type": "Shrinkout", "theta_limit": theta_lim, "point": point,
            "param": float(par), "centroid_param": float(pars[-1] % 1.0),
            "limit_action": limit_action, "last_action": float(acts[-1]),
            "last_diag": float(diag[-1])}


# --- l2 proxy ------------------------------------------------------------------------

@dataclass
class SpectralProxy:
    r: float
    theta_grid: np.ndarray
    l2_values: np.ndarray
    provenance: list
    area: float
    radius: float
    flags: list = field(default_factory=list)

    def to_dict(self):
        return {"r": self.r, "theta_grid": [float(t) for t in self.theta_grid],
                "l2_values": [float(v) for v in self.l2_values],
                "provenance": list(self.provenance), "flags": list(self.flags)}


def binormal_seeds(curve, r, theta, binormal):
    """Newton starting points near a binormal chord, both orientations."""
    out = []
    for a, b in ((binormal.s1, binormal.s2), (binormal.s2, binormal.s1)):
        z, w = complex(curve.eval(a)), complex(curve.eval(b))
        p = (1 - r) * z + r * w
        e = np.exp(-1j * theta)
        zp, wp = p + e * (z - p), p + e * (w - p)
        ta, tb = complex(curve.deriv(a)), complex(curve.deriv(b))
        da = np.real(np.conj(ta) * (zp - z)) / abs(ta) ** 2
        db = np.real(np.conj(tb) * (wp - w)) / abs(tb) ** 2
        out.append([a, b, a + da, b + db])
    return np.array(out)


def l2_proxy(curve, r, theta_grid, grid_n=128):
    """Continuation proxy for the degree-2 spectral invariant.

    The proxy follows the inscription branches that emanate from the longest
    binormal at the smallest grid angle and records, at each grid angle, the
    largest action among them.

    Parameters
    ----------
    curve : FourierCurve
    r : float
    theta_grid : array_like
        Increasing angles in (0, pi].

    Returns
    -------
    SpectralProxy
    """
    grid = np.sort(np.asarray(theta_grid, dtype=float))
    t0 = float(grid[0])
    bn = binormals(curve)
    if not bn:
        raise ProxyUnavailable("no binormal found")
    top = bn[0]
    diam = curve.diameter
    tol = 1e-10 * diam
    coef = coefficients(r, t0)
    x, conv, _, _ = newton(curve, coef, binormal_seeds(curve, r, t0, top), 0.5 * tol)
    seeds = []
    for xi, ok in zip(x, conv):
        if not ok:
            continue
        ins = make_inscription(curve, TrapezoidClass.limit(r, t0), xi, classify_kind=False)
        if abs(ins.diag_length - top.length) <= 0.05 * top.length:
            if not any(np.allclose(ins.params[:2] % 1, q.params[:2] % 1, atol=1e-7)
                       for q in seeds):
                seeds.append(ins)
    if not seeds:
        raise ProxyUnavailable("no inscription branch connects to the longest binormal", theta=t0)
    flags = []
    tracks = []
    for ins in seeds:
        br = continue_branch(curve, r, t0, float(grid[-1]), ins, stops=grid[1:])
        vals = {}
        for t, _, a in br.samples:
            vals[round(float(t), 12)] = a.value
        lim = br.limit
        if lim["type"] == "Shrinkout":
            # the degenerate end of the branch carries its extrapolated limit
            for t in grid:
                if t >= br.samples[-1][0] and abs(t - lim["theta_limit"]) < 1e-6:
                    vals[round(float(t), 12)] = lim["limit_action"]
        tracks.append((br, vals))
    values = np.full(grid.size, np.nan)
    prov = []
    for j, t in enumerate(grid):
        key = round(float(t), 12)
        cands = [v[key] for _, v in tracks if key in v]
        if cands:
            values[j] = max(cands)
            prov.append("binormal_branch")
        else:
            last = values[j - 1] if j else 0.0
            if not 0 < t < np.pi:
                flags.append(f"no_spectrum@{t:.6g}")
                prov.append("missing")
                continue
            sp = spectrum(curve, TrapezoidClass(r, float(t)), grid_n=grid_n)
            if len(sp.entries) == 0:
                flags.append(f"no_spectrum@{t:.6g}")
                prov.append("missing")
                continue
            vals_t = sp.values
            values[j] = float(vals_t[np.argmin(np.abs(vals_t - last))])
            prov.append("heuristic_jump")
            flags.append(f"heuristic@{t:.6g}")
    bound = 2 * r * (1 - r) * curve.radius ** 2
    inc = np.diff(values)
    if np.any(inc < 0):
        flags.append("not_monotone")
    if np.any(inc > bound * np.diff(grid) + 1e-6):
        flags.append("slope_bound_exceeded")
    return SpectralProxy(r, grid, values, prov, curve.area, curve.radius, flags)


def check_triangle(proxy, tol=1e-6):
    """Triangle inequality l(a+b) <= l(a) + l(b) over grid pairs summing to a grid angle."""
    grid = proxy.theta_grid
    vals = proxy.l2_values
    scale = max(np.max(np.abs(grid)), 1.0)
    violations = []
    checked = 0
    for i in range(grid.size):
        for j in range(i, grid.size):
            s = grid[i] + grid[j]
            if s > np.pi + 1e-12:
                continue
            k = np.nonzero(np.abs(grid - s) <= 1e-9 * scale)[0]
            if k.size == 0:
                continue
            k = int(k[0])
            checked += 1
            excess = vals[k] - vals[i] - vals[j]
            if excess > tol * proxy.area:
                violations.append({"i": i, "j": j, "k": k, "excess": float(excess)})
    return {"pairs_checked": checked, "violations": violations, "passed": not violations}


# --- closed-form limits ----------------------------------------------------------------

def max_turn_angle(r, theta):
    """arctan(cot(theta/2) / (1 - 2r)); pi/2 by continuity at r = 1/2."""
    if r >= 0.5:
        return np.pi / 2
    return float(np.arctan(1.0 / np.tan(theta / 2) / (1 - 2 * r)))


def elegance_threshold(r, K):
    """Angle above which (1 - 2r) tan(theta/2) > K."""
    return float(np.pi - 2 * np.arctan((1 - 2 * r) / K))


def shrinkout_limits(curve, r):
    """Admissible shrinkout actions {0, r Area, (1-r) Area}, as representatives mod Area."""
    a = curve.area
    return sorted({0.0, r * a, (1 - r) * a})


def match_shrinkout(curve, r, value, rel=0.01):
    """Entry of :func:`shrinkout_limits` within ``rel * Area`` of value mod Area, or None."""
    a = curve.area
    for cand in shrinkout_limits(curve, r):
        d = (value - cand) % a
        if min(d, a - d) <= rel * a:
            return cand
    return None


def quadrisecant_duality(branch_a, branch_b, curve, rel=0.01):
    """Check that the actions of two branches ending at one quadrisecant sum to the area."""
    for br in (branch_a, branch_b):
        if br.limit.get("type") != "Quadrisecant":
            raise MismatchedQuadrisecants("branch did not end at a quadrisecant",
                                          limit=br.limit.get("type"))
    va = np.array(branch_a.limit["vertices"])
    vb = np.array(branch_b.limit["vertices"])
    gap = max(np.min(np.abs(va[:, None] - vb[None, :]), axis=1).max(),
              np.min(np.abs(vb[:, None] - va[None, :]), axis=1).max())
    if gap > 1e-6 * curve.diameter:
        raise MismatchedQuadrisecants("quadrisecant vertex sets differ", gap=float(gap))
    total = branch_a.limit["action"] + branch_b.limit["action"]
    resid = abs(total - curve.area)
    return {"action_a": branch_a.limit["action"], "action_b": branch_b.limit["action"],
            "sum": total, "area": curve.area, "residual": resid,
            "passed": bool(resid < rel * curve.area)}


def kappa_prime_roots(curve, n=4096):
    s = np.arange(n + 1) / n
    k = curve.dkappa_ds(s)
    roots = []
    for i in range(n):
        if k[i] == 0:
            roots.append(s[i])
        elif k[i] * k[i + 1] < 0:
            roots.append(brentq(lambda u: float(curve.dkappa_ds(u)), s[i], s[i + 1], xtol=1e-14))
    return np.mod(np.array(roots), 1.0)


def vertex_check(curve, branch, rel=1e-3):
    """Does the shrinkout point sit at a zero of the curvature derivative?"""
    if branch.limit.get("type") != "Shrinkout":
        raise ValueError("vertex_check needs a Shrinkout branch")
    s = branch.limit["param"]
    dk = float(curve.dkappa_ds(s))
    kap = float(curve.curvature(s))
    kmax = float(np.max(np.abs(curve.curvature(np.arange(1024) / 1024))))
    scale = max(abs(kap), 1e-3 * kmax) ** 2
    relative = abs(dk) / scale
    roots = kappa_prime_roots(curve)
    if roots.size:
        d = np.abs(roots - s)
        dist = float(np.min(np.minimum(d, 1 - d)))
    else:
        dist = 0.0  # curvature derivative vanishes identically or never changes sign
    constant = np.max(np.abs(curve.dkappa_ds(np.arange(256) / 256))) < 1e-9 * max(kmax, 1.0) ** 2
    return {"param": s, "dkappa_ds": dk, "kappa": kap, "relative": relative,
            "nearest_root_distance": 0.0 if constant else dist,
            "passed": bool(constant or relative < rel or dist < rel)}
