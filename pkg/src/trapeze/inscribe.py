"""Inscribed isosceles trapezoids: solver, width, and classification.

Unknowns are the four curve parameters (s1, s2, s1', s2') of z, w, z', w';
the equations say that z' and w' are the images of z and w under the
rotation map. The system is solved by batched damped Newton from grid seeds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import NoInscriptionFound
from .trapezoid import TrapezoidClass, coefficients, g_map

ELEGANT = "Elegant"
ALMOST = "AlmostElegant"
OTHER = "Other"


@dataclass
class Inscription:
    s1: float
    s2: float
    s1p: float
    s2p: float
    vertices: tuple  # (z, z', w, w')
    diag_length: float
    residual: float
    cls: TrapezoidClass
    kind: str = OTHER
    family: bool = False
    flags: list = field(default_factory=list)

    @property
    def params(self):
        return np.array([self.s1, self.s2, self.s1p, self.s2p])

    @property
    def z(self):
        return self.vertices[0]

    @property
    def zp(self):
        return self.vertices[1]

    @property
    def w(self):
        return self.vertices[2]

    @property
    def wp(self):
        return self.vertices[3]

    def to_dict(self):
        return {
            "s1": self.s1, "s2": self.s2, "s1p": self.s1p, "s2p": self.s2p,
            "vertices": {k: [float(v.real), float(v.imag)]
                         for k, v in zip(("z", "zp", "w", "wp"), self.vertices)},
            "diag_length": self.diag_length, "residual": self.residual,
            "r": self.cls.r, "theta": self.cls.theta, "kind": self.kind,
            "family": self.family, "flags": list(self.flags),
        }


class InscriptionList(list):
    """List of inscriptions carrying run flags and solver diagnostics."""

    def __init__(self, items=(), flags=(), diagnostics=None):
        super().__init__(items)
        self.flags = list(flags)
        self.diagnostics = dict(diagnostics or {})


# --- the system ---------------------------------------------------------------

def system(curve, coef, x):
    """Residual (n, 4) and Jacobian (n, 4, 4) of the inscription equations."""
    a, b, c, d = coef
    s = x.reshape(-1)
    g = curve.eval(s).reshape(-1, 4)
    dg = curve.deriv(s).reshape(-1, 4)
    f1 = g[:, 2] - a * g[:, 0] - b * g[:, 1]
    f2 = g[:, 3] - c * g[:, 0] - d * g[:, 1]
    F = np.stack([f1.real, f1.imag, f2.real, f2.imag], axis=1)
    n = x.shape[0]
    cols = np.zeros((n, 2, 4), dtype=complex)
    cols[:, 0, 0] = -a * dg[:, 0]
    cols[:, 1, 0] = -c * dg[:, 0]
    cols[:, 0, 1] = -b * dg[:, 1]
    cols[:, 1, 1] = -d * dg[:, 1]
    cols[:, 0, 2] = dg[:, 2]
    cols[:, 1, 3] = dg[:, 3]
    J = np.empty((n, 4, 4))
    J[:, 0], J[:, 1] = cols[:, 0].real, cols[:, 0].imag
    J[:, 2], J[:, 3] = cols[:, 1].real, cols[:, 1].imag
    return F, J


def theta_derivative(curve, r, theta, x):
    """Partial derivative of the residual with respect to theta."""
    z = curve.eval(x[:, 0])
    w = curve.eval(x[:, 1])
    p = (1 - r) * z + r * w
    e = np.exp(-1j * theta)
    dz = 1j * e * (z - p)
    dw = 1j * e * (w - p)
    return np.stack([dz.real, dz.imag, dw.real, dw.imag], axis=1)


def newton(curve, coef, x, tol, max_iter=50, max_step=0.25):
    """Batched Armijo-damped Newton with pseudo-inverse steps.

    Returns
    -------
    x, converged, F, J
    """
    x = np.array(x, dtype=float)
    n = x.shape[0]
    conv = np.zeros(n, dtype=bool)
    dead = np.zeros(n, dtype=bool)
    F, J = system(curve, coef, x)
    for _ in range(max_iter):
        res = np.max(np.abs(F), axis=1)
        conv = res < tol
        act = ~(conv | dead)
        if not np.any(act):
            break
        idx = np.nonzero(act)[0]
        Fa, Ja = F[idx], J[idx]
        step = -np.einsum("nij,nj->ni", np.linalg.pinv(Ja, rcond=1e-10), Fa)
        big = np.linalg.norm(step, axis=1)
        step *= np.minimum(1.0, max_step / np.maximum(big, 1e-300))[:, None]
        norm0 = np.linalg.norm(Fa, axis=1)
        alpha = np.ones(idx.size)
        pending = np.ones(idx.size, dtype=bool)
        xa = x[idx].copy()
        Fn, Jn = Fa.copy(), Ja.copy()
        for _ in range(30):
            if not np.any(pending):
                break
            p = np.nonzero(pending)[0]
            trial = xa[p] + alpha[p, None] * step[p]
            Ft, Jt = system(curve, coef, trial)
            ok = np.linalg.norm(Ft, axis=1) <= (1 - 1e-4 * alpha[p]) * norm0[p]
            q = p[ok]
            xa[q] = trial[ok]
            Fn[q], Jn[q] = Ft[ok], Jt[ok]
            pending[q] = False
            alpha[p[~ok]] *= 0.5
        dead[idx[pending]] = True
        x[idx], F[idx], J[idx] = xa, Fn, Jn
    conv = np.max(np.abs(F), axis=1) < tol
    return x, conv, F, J


def _wrap(d):
    return np.mod(d + 0.5, 1.0) - 0.5


def deflated_newton(curve, coef, x, roots, tol, max_iter=60, max_step=0.05, power=2.0):
    """Newton on F scaled by (|x - root|^-power + 1), one known root per row.

    The scaling makes the known root repel the iteration, so a seed that
    fell into the basin of ``roots[i]`` can reach a second solution nearby.
    The deflated step is the plain Newton step times 1 / (1 - grad(log m) . d).
    """
    x = np.array(x, dtype=float)
    roots = np.asarray(roots, dtype=float)
    conv = np.zeros(len(x), dtype=bool)
    dead = np.zeros(len(x), dtype=bool)
    for _ in range(max_iter):
        act = np.nonzero(~(conv | dead))[0]
        if act.size == 0:
            break
        F, J = system(curve, coef, x[act])
        e = _wrap(x[act] - roots[act])
        dist = np.linalg.norm(e, axis=1)
        res = np.max(np.abs(F), axis=1)
        conv[act] = (res < tol) & (dist > 1e-6)
        d = -np.einsum("nij,nj->ni", np.linalg.pinv(J, rcond=1e-10), F)
        q = dist ** -power
        glog = (-power * dist ** (-power - 2) / (q + 1.0))[:, None] * e
        denom = 1.0 - np.sum(glog * d, axis=1)
        step = d / np.where(np.abs(denom) > 1e-12, denom, 1e-12)[:, None]
        big = np.linalg.norm(step, axis=1)
        step *= np.minimum(1.0, max_step / np.maximum(big, 1e-300))[:, None]
        move = ~conv[act]
        x[act[move]] += step[move]
        dead[act] |= ~np.isfinite(big) | (dist < 1e-9)
    return np.mod(x, 1.0), conv


# --- seeding ------------------------------------------------------------------

def grid_seeds(curve, cls, grid_n, delta):
    """Local minima of the approximate residual on a grid_n x grid_n torus grid."""
    n = grid_n
    m = max(curve.dense_n(), 8 * n)
    while m % n:
        m += 1
    dense = curve.sample(m)
    tree = curve._tree(m)
    step = m // n
    p = dense[::step]
    z = np.repeat(p[:, None], n, axis=1)
    w = np.repeat(p[None, :], n, axis=0)
    zp, wp = g_map(cls, z, w)
    pts = np.concatenate([zp.ravel(), wp.ravel()])
    dist, idx = tree.query(np.column_stack([pts.real, pts.imag]))
    dz, dw = dist[: n * n].reshape(n, n), dist[n * n:].reshape(n, n)
    rho = np.maximum(dz, dw)
    chord = np.abs(z - w)
    rho = np.where(chord > delta, rho, np.inf)
    nb = np.full_like(rho, np.inf)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di or dj:
                nb = np.minimum(nb, np.roll(np.roll(rho, di, 0), dj, 1))
    thresh = 3.0 * curve.max_speed() / n + 4.0 * curve.arc_length / m
    ii, jj = np.nonzero((rho <= nb) & (rho < thresh))
    s3 = idx[: n * n].reshape(n, n)[ii, jj] / m
    s4 = idx[n * n:].reshape(n, n)[ii, jj] / m
    return np.column_stack([ii / n, jj / n, s3, s4])


# --- families -------------------------------------------------------------------

def _torus_dist(a, b):
    d = np.abs(np.mod(a - b + 0.5, 1.0) - 0.5)
    return np.hypot(d[..., 0], d[..., 1])


def trace_family(curve, coef, x0, h, tol, max_steps=2000):
    """Points along a solution continuum through x0, followed both ways.

    Steps of size ``h`` go along the Jacobian null direction and are
    corrected by Newton; a direction stops when the corrector fails or
    stalls, the continuum stops being degenerate, or the path closes up.
    """
    x0 = np.asarray(x0, dtype=float)
    path = [x0]
    for sign in (1.0, -1.0):
        x = x0.copy()
        prev_t = None
        for k in range(max_steps):
            _, J = system(curve, coef, x[None, :])
            _, sv, vt = np.linalg.svd(J[0])
            if sv[-1] > 1e-6 * sv[0]:
                break
            t = vt[-1]
            if prev_t is None:
                t = sign * t
            elif np.dot(t, prev_t) < 0:
                t = -t
            xn, conv, _, _ = newton(curve, coef, (x + h * t)[None, :], tol, max_iter=20)
            if not conv[0]:
                break
            xn = xn[0]
            if np.linalg.norm(xn - x) < 0.25 * h:
                break  # corrector pulled back to the end of the continuum
            path.append(xn)
            if k > 2 and _torus_dist(xn[:2], x0[:2]) < h:
                return np.mod(np.array(path), 1.0)
            prev_t, x = t, xn
    return np.mod(np.array(path), 1.0)


def _on_continuum(curve, coef, xi, path, h, tol):
    """True if xi is joined to the traced path by solutions (checked at the midpoint)."""
    d = _torus_dist(xi[None, :2], path[:, :2])
    k = int(np.argmin(d))
    if d[k] > 1.5 * h or d[k] < 1e-12:
        return d[k] < 1e-12
    mid = np.mod(xi + 0.5 * _wrap(path[k] - xi), 1.0)
    xm, conv, _, _ = newton(curve, coef, mid[None, :], tol, max_iter=20)
    return bool(conv[0]) and _torus_dist(xm[0, :2], mid[:2]) < 0.05 * d[k]


# --- main solver ------------------------------------------------------------------

def make_inscription(curve, cls, x, family=False, classify_kind=True):
    s1, s2, s3, s4 = (float(v) for v in np.mod(x, 1.0))
    z, w = complex(curve.eval(s1)), complex(curve.eval(s2))
    zp, wp = g_map(cls, z, w)
    _, d, _ = curve.project(np.array([zp, wp]))
    ins = Inscription(s1, s2, s3, s4, (z, complex(zp), w, complex(wp)), abs(z - w),
                      float(np.max(np.abs(d))), cls, family=family)
    if classify_kind:
        ins.kind = classify(curve, ins)
        if cls.r == 0.5:
            ins.flags.append("RectangleAmbiguity")
    return ins


def find_inscriptions(curve, cls, grid_n=256, tol=None, seeds=None):
    """All inscriptions of the class found from a grid of seeds.

    Parameters
    ----------
    curve : JordanCurve
    cls : TrapezoidClass
    grid_n : int
        Seeding grid resolution (at least 32).
    tol : float, optional
        Newton tolerance on vertex mismatch; default 1e-10 times the diameter.
    seeds : ndarray, optional
        Extra (n, 4) starting points appended to the grid seeds.

    Returns
    -------
    InscriptionList
        Sorted by (s1, s2). Members of a continuous family are collapsed to
        one representative with ``family=True``.
    """
    if grid_n < 32:
        raise ValueError("grid_n must be at least 32")
    diam = curve.diameter
    tol = 1e-10 * diam if tol is None else tol
    delta = 1e-3 * diam
    x0 = grid_seeds(curve, cls, grid_n, delta)
    if seeds is not None:
        x0 = np.vstack([x0, np.atleast_2d(seeds)])
    coef = coefficients(cls.r, cls.theta)
    diag = {"seeds": int(len(x0))}
    if len(x0) == 0:
        return InscriptionList([], ["NoInscriptionFound"], diag)
    x, conv, F, J = newton(curve, coef, x0, 0.5 * tol)
    diag["diverged"] = int(np.sum(~conv))
    # second roots sharing a seed basin: restart each seed with its root deflated
    sv0 = np.linalg.svd(J, compute_uv=False)
    iso = conv & (sv0[:, -1] >= 1e-6 * sv0[:, 0])
    if np.any(iso):
        xd, cd = deflated_newton(curve, coef, x0[iso], x[iso], 0.25 * tol)
        if np.any(cd):
            xd, cdn, _, Jd = newton(curve, coef, xd[cd], 0.5 * tol)
            x = np.vstack([x[conv], xd[cdn]])
            J = np.concatenate([J[conv], Jd[cdn]])
            diag["deflated"] = int(np.sum(cdn))
        else:
            x, J = x[conv], J[conv]
    else:
        x, J = x[conv], J[conv]
    x = np.mod(x, 1.0)
    chord = np.abs(curve.eval(x[:, 0]) - curve.eval(x[:, 1]))
    keep = chord > delta
    diag["near_diagonal"] = int(np.sum(~keep))
    x, J, chord = x[keep], J[keep], chord[keep]
    if len(x) == 0:
        return InscriptionList([], ["NoInscriptionFound"], diag)
    sv = np.linalg.svd(J, compute_uv=False)
    ratio = sv[:, -1] / sv[:, 0]
    # deduplicate in (s1, s2)
    order = np.lexsort((x[:, 1], x[:, 0]))
    x, ratio = x[order], ratio[order]
    uniq = []
    for i in range(len(x)):
        if not any(_torus_dist(x[i, :2], x[j, :2]) < 1e-6 for j in uniq):
            uniq.append(i)
    x, ratio = x[uniq], ratio[uniq]
    fam = ratio < 1e-6
    reps = [i for i in range(len(x)) if not fam[i]]
    fam_idx = np.nonzero(fam)[0]
    if fam_idx.size:
        h = 2.0 / grid_n
        # trace from the most degenerate point first; end points may stall at once
        remaining = sorted(fam_idx, key=lambda i: ratio[i])
        while remaining:
            path = trace_family(curve, coef, x[remaining[0]], h, tol)
            d = np.min(_torus_dist(x[remaining][:, None, :2], path[None, :, :2]), axis=1)
            members = [i for i, di in zip(remaining, d) if di < 1.5 * h]
            members = members or remaining[:1]
            remaining = [i for i in remaining if i not in members]
            # earlier representatives on this continuum: stalled family end points,
            # or end points (e.g. at a corner) whose one-sided Jacobian is regular
            for i in list(reps):
                near = np.min(_torus_dist(x[i, :2], path[:, :2])) < 1.5 * h
                if (fam[i] and near) or (not fam[i] and _on_continuum(curve, coef, x[i], path, h, tol)):
                    reps.remove(i)
                    if fam[i]:
                        members.append(i)
            reps.append(int(min(members, key=lambda i: (x[i, 0], x[i, 1]))))
    out = [make_inscription(curve, cls, x[i], family=bool(fam[i])) for i in reps]
    out = [q for q in out if q.residual <= max(tol, 1e-10 * diam) * 10]
    out.sort(key=lambda q: (q.s1, q.s2))
    flags = []
    if not out:
        flags.append("NoInscriptionFound")
    if any(q.family for q in out):
        flags.append("family")
    if out:
        wmin = min(q.diag_length for q in out)
        diag["min_diag_over_bound"] = float(wmin / max(delta, 0.5 * wmin))
    return InscriptionList(out, flags, diag)


# --- width ------------------------------------------------------------------------

@dataclass
class WidthReport:
    width: float
    theta_width: float
    theta_argmin: float


def _width_at(curve, r, phi, grid_n):
    ins = find_inscriptions(curve, TrapezoidClass(r, phi), grid_n=grid_n)
    if not ins:
        raise NoInscriptionFound("no inscription at this angle", phi=phi)
    return min(q.diag_length for q in ins)


def width(curve, cls, grid_n=128, n_phi=16):
    """Width at (r, theta) and the theta-width over angles in (0, theta]."""
    w = _width_at(curve, cls.r, cls.theta, grid_n)
    phis = cls.theta * np.arange(1, n_phi + 1) / n_phi
    vals = [_width_at(curve, cls.r, phi, grid_n) for phi in phis[:-1]] + [w]
    j = int(np.argmin(vals))
    best, arg = vals[j], phis[j]
    if 0 < j < n_phi - 1 or j == 0:
        lo = phis[j - 1] if j > 0 else 0.5 * phis[0]
        hi = phis[min(j + 1, n_phi - 1)]
        res = minimize_scalar(lambda p: _width_at(curve, cls.r, p, grid_n),
                              bounds=(lo, hi), method="bounded", options={"xatol": 1e-6})
        if res.fun < best:
            best, arg = float(res.fun), float(res.x)
    return WidthReport(w, min(best, w), arg)


# --- classification -----------------------------------------------------------------

def _circumcenter(a, b, c):
    d = 2 * np.imag(np.conj(b - a) * (c - a))
    return a - 1j * ((c - a) * abs(b - a) ** 2 - (b - a) * abs(c - a) ** 2) / d


def _winding(poly, q):
    v = poly - q
    return float(np.sum(np.angle(np.roll(v, -1) / v)) / (2 * np.pi))


def _arc_points(curve, sa, sb, n_min=400):
    span = (sb - sa) % 1.0
    n = max(n_min, int(span * curve.dense_n() / 2))
    return curve.eval(sa + span * np.arange(n + 1) / n)


def _circle_arc(o, a, b, ccw, n=200):
    pa, pb = np.angle(a - o), np.angle(b - o)
    span = (pb - pa) % (2 * np.pi) if ccw else -((pa - pb) % (2 * np.pi))
    rad = abs(a - o)
    return o + rad * np.exp(1j * (pa + span * np.arange(n + 1) / n))


def classification_data(curve, ins):
    """Cyclic orders and arc windings used by :func:`classify`."""
    labels = ("z", "zp", "w", "wp")
    pts = dict(zip(labels, ins.vertices))
    pars = dict(zip(labels, (ins.s1, ins.s1p, ins.s2, ins.s2p)))
    o = _circumcenter(pts["z"], pts["w"], pts["zp"])
    circ = sorted(labels, key=lambda k: np.angle(pts[k] - o) % (2 * np.pi))
    gam = sorted(labels, key=lambda k: pars[k] % 1.0)

    def canon(seq):
        i = seq.index("w")
        return tuple(seq[i:] + seq[:i])

    same = canon(gam) == canon(circ)
    rev = canon(gam) == canon(circ[::-1])
    windings = {}
    for i in range(4):
        a, b = gam[i], gam[(i + 1) % 4]
        arc = _arc_points(curve, pars[a], pars[b])
        # circle arc from b back to a that avoids the other two vertices
        back = _circle_arc(o, pts[b], pts[a], ccw=not same)
        loop = np.concatenate([arc, back[1:-1]])
        others = [k for k in labels if k not in (a, b)]
        windings[(a, b)] = tuple(int(round(_winding(loop, pts[k]))) for k in others)
    return {"circle_order": canon(circ), "curve_order": canon(gam), "same": same,
            "reversed": rev, "windings": windings}


def classify(curve, ins):
    """Elegant, AlmostElegant or Other.

    Elegant: the vertices appear along the curve in the counterclockwise
    order of the circumscribed circle, and every curve arc between
    consecutive vertices closes up with the matching circle arc into a loop
    that does not wind around the remaining vertices. AlmostElegant: the
    order is reversed, the arc joining w and w' (the long parallel edge)
    winds once around both z and z', and every other arc is unwound.
    """
    data = classification_data(curve, ins)
    wind = data["windings"]
    if data["same"] and all(v == (0, 0) for v in wind.values()):
        return ELEGANT
    if ins.cls.r == 0.5 or not data["reversed"]:
        return OTHER
    long_edge = {"w", "wp"}
    ok = True
    for (a, b), v in wind.items():
        if {a, b} == long_edge:
            ok &= abs(v[0]) == 1 and v[0] == v[1]
        else:
            ok &= v == (0, 0)
    return ALMOST if ok else OTHER
