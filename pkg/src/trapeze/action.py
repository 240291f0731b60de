"""Actions of inscriptions via diagonal-avoiding capping paths.

The action of an inscription is the Hamiltonian term minus the integral of
eta = (1-r) x1 dy1 + r x2 dy2 around the loop made of a capping path p
(forward) and the flow trajectory tau (backward). Each component of tau is a
circular arc about the crossing point p, so its contribution is analytic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConstructionFailure, DiagonalTouch, WrongKind
from .inscribe import ALMOST, ELEGANT
from .trapezoid import flow


@dataclass
class PairPath:
    """Capping path sampled as lifted curve parameters.

    ``u1`` and ``u2`` are lifted parameters of p1 and p2 (not reduced mod 1),
    so ``u1[-1] - u1[0]`` records how far p1 travels along the curve.
    """

    u1: np.ndarray
    u2: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    winding: int = 0
    min_separation: float = 0.0
    flags: list = field(default_factory=list)

    @property
    def lift1(self):
        return float(self.u1[0]), float(self.u1[-1])

    @property
    def lift2(self):
        return float(self.u2[0]), float(self.u2[-1])


@dataclass
class ActionValue:
    value: float
    hamiltonian_term: float
    capping_term: float
    A1: float | None = None
    A2: float | None = None
    A3: float | None = None
    A4: float | None = None
    winding: int = 0
    method: str = "path"

    def to_dict(self):
        d = {"value": self.value, "hamiltonian_term": self.hamiltonian_term,
             "capping_term": self.capping_term, "winding": self.winding, "method": self.method}
        for k in ("A1", "A2", "A3", "A4"):
            v = getattr(self, k)
            if v is not None:
                d[k] = v
        return d


# --- winding -------------------------------------------------------------------

def winding_number(p1, p2, diameter=1.0):
    """Winding of p1 - p2 around 0 along a closed sampled loop.

    Parameters
    ----------
    p1, p2 : array_like of complex
        Samples of the loop; the last sample is joined back to the first.
    diameter : float
        Length scale for the diagonal-touch test.
    """
    d = np.asarray(p1, dtype=complex) - np.asarray(p2, dtype=complex)
    sep = np.abs(d)
    if np.min(sep) < 1e-12 * diameter:
        raise DiagonalTouch("loop touches the diagonal", min_separation=float(np.min(sep)))
    turn = np.sum(np.angle(np.roll(d, -1) / d)) / (2 * np.pi)
    k = int(round(turn))
    if abs(turn - k) > 1e-6:
        raise DiagonalTouch("winding is not integral; refine the sampling", turn=float(turn))
    return k


def _tau_samples(ins, n=64):
    t = np.linspace(0.0, 1.0, n + 1)
    return flow(ins.cls, t, ins.z, ins.w)


def loop_winding(curve, ins, u1, u2):
    """Winding of the loop (p forward, tau backward) for lifted parameter paths."""
    p1, p2 = curve.eval(u1), curve.eval(u2)
    t1, t2 = _tau_samples(ins)
    l1 = np.concatenate([p1, t1[::-1][1:-1]])
    l2 = np.concatenate([p2, t2[::-1][1:-1]])
    return winding_number(l1, l2, curve.diameter), p1, p2


def _build(curve, ins, legs, samples_per_unit=4096, min_samples=64):
    """Assemble a PairPath from legs (start1, end1, start2, end2) in lifted params."""
    u1, u2 = [], []
    for a1, b1, a2, b2 in legs:
        span = max(abs(b1 - a1), abs(b2 - a2))
        n = max(min_samples, int(np.ceil(span * samples_per_unit)))
        t = np.arange(n) / n
        u1.append(a1 + (b1 - a1) * t)
        u2.append(a2 + (b2 - a2) * t)
    u1.append([legs[-1][1]])
    u2.append([legs[-1][3]])
    u1, u2 = np.concatenate(u1), np.concatenate(u2)
    k, p1, p2 = loop_winding(curve, ins, u1, u2)
    # refinement check: the count must not change when sampling doubles
    if samples_per_unit < 16384:
        k2, _, _ = loop_winding(curve, ins, *_refine(u1, u2))
        if k2 != k:
            return _build(curve, ins, legs, 4 * samples_per_unit, 4 * min_samples)
    return PairPath(u1, u2, p1, p2, k, float(np.min(np.abs(p1 - p2))))


def _refine(u1, u2):
    m1 = 0.5 * (u1[1:] + u1[:-1])
    m2 = 0.5 * (u2[1:] + u2[:-1])
    v1 = np.empty(2 * u1.size - 1)
    v2 = np.empty_like(v1)
    v1[0::2], v1[1::2] = u1, m1
    v2[0::2], v2[1::2] = u2, m2
    return v1, v2


def _cw(a, b):
    """Lifted end of a clockwise run from parameter a to parameter b."""
    return a - ((a - b) % 1.0)


def arc_capping(curve, ins, scheme="elegant"):
    """Capping path built from arcs of the curve.

    ``scheme`` is ``"elegant"`` (both points run clockwise at once, p1 from z
    to z' and p2 from w to w'), ``"almost"`` (p1 runs clockwise from z through
    w' and w to z', p2 from w through z' and z to w', staggered so they never
    meet), or ``"swapped"`` (p1 and p2 run counterclockwise, the wrong way
    round, used as a negative control).
    """
    s1, s2, s1p, s2p = ins.s1, ins.s2, ins.s1p, ins.s2p
    if scheme == "elegant":
        legs = [(s1, _cw(s1, s1p), s2, _cw(s2, s2p))]
    elif scheme == "swapped":
        legs = [(s1, s1 + ((s1p - s1) % 1.0), s2, s2 + ((s2p - s2) % 1.0))]
    elif scheme == "almost":
        a = _cw(s1, s2p)            # p1: z -> w'
        b = _cw(s2, s1)             # p2: w -> z' -> z
        c = _cw(a, s1p)             # p1: w' -> w -> z'
        d = _cw(b, s2p)             # p2: z -> w'
        legs = [(s1, a, s2, s2), (a, a, s2, b), (a, c, b, b), (c, c, b, d)]
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    return _build(curve, ins, legs)


def capping_path(curve, ins):
    """Preferred capping from the arc recipe of an elegant or almost-elegant inscription."""
    if ins.kind == ELEGANT:
        path = arc_capping(curve, ins, "elegant")
    elif ins.kind == ALMOST:
        path = arc_capping(curve, ins, "almost")
    else:
        raise WrongKind("arc recipe needs an Elegant or AlmostElegant inscription", kind=ins.kind)
    if path.winding != 0 or path.min_separation <= 0:
        raise ConstructionFailure("arc recipe did not give a zero-winding capping",
                                  winding=path.winding, min_separation=path.min_separation)
    return path


def capping_path_general(curve, ins, winding=0):
    """Diagonal-avoiding capping for any inscription, with a chosen winding.

    The path interpolates linearly in the coordinates u = s1 - s2 (kept inside
    one open unit interval, so the two points never meet) and v = s2; the
    lift of the end value of v is chosen to give the requested winding.
    """
    u0 = (ins.s1 - ins.s2) % 1.0
    u1 = (ins.s1p - ins.s2p) % 1.0
    v0 = ins.s2

    def legs_for(m):
        v1 = ins.s2p + np.floor(v0) + m
        return [(u0 + v0, u1 + v1, v0, v1)]

    base = _build(curve, ins, legs_for(0))
    m = winding - base.winding
    path = base if m == 0 else _build(curve, ins, legs_for(m))
    if path.winding != winding:
        raise ConstructionFailure("winding correction failed", winding=path.winding)
    if ins.kind not in (ELEGANT, ALMOST):
        path.flags.append("general_capping")
    return path


# --- line integrals --------------------------------------------------------------

def arc_xdy(center, z0, dphi):
    """Integral of x dy along the circular arc about ``center`` from z0 through angle dphi."""
    rho = abs(z0 - center)
    f0 = np.angle(z0 - center)
    f1 = f0 + dphi
    return (center.real * rho * (np.sin(f1) - np.sin(f0))
            + rho ** 2 * (0.5 * dphi + 0.25 * (np.sin(2 * f1) - np.sin(2 * f0))))


def arc_sym(center, z0, dphi):
    """Integral of (x dy - y dx) along the same arc (sector formula)."""
    rho = abs(z0 - center)
    f0 = np.angle(z0 - center)
    f1 = f0 + dphi
    return (rho ** 2 * dphi + rho * (center.real * (np.sin(f1) - np.sin(f0))
                                     - center.imag * (np.cos(f1) - np.cos(f0))))


def _hamiltonian_term(ins):
    r, theta = ins.cls.r, ins.cls.theta
    return 0.5 * theta * r * (1 - r) * ins.diag_length ** 2


def _center(ins):
    r = ins.cls.r
    return (1 - r) * ins.z + r * ins.w


def action(curve, ins, path=None):
    """Hamiltonian term minus the capping integral of eta.

    Parameters
    ----------
    curve : JordanCurve
    ins : Inscription
    path : PairPath, optional
        Defaults to the preferred capping (arc recipe when available,
        otherwise the general construction).

    Returns
    -------
    ActionValue
    """
    if path is None:
        if ins.kind in (ELEGANT, ALMOST):
            path = capping_path(curve, ins)
        else:
            path = capping_path_general(curve, ins)
    r, theta = ins.cls.r, ins.cls.theta
    c = _center(ins)
    x1 = curve.xdy(*path.lift1) - arc_xdy(c, ins.z, -theta)
    x2 = curve.xdy(*path.lift2) - arc_xdy(c, ins.w, -theta)
    cap = (1 - r) * x1 + r * x2
    h = _hamiltonian_term(ins)
    return ActionValue(h - cap, h, cap, winding=path.winding, method="path")


def _area_form(curve, ins, path, method):
    r, theta = ins.cls.r, ins.cls.theta
    L = ins.diag_length
    c = _center(ins)
    a1 = 0.5 * theta * r ** 2 * L ** 2
    a2 = 0.5 * theta * (1 - r) ** 2 * L ** 2
    a3 = 0.5 * (curve.sym_area(*path.lift1) - arc_sym(c, ins.z, -theta))
    a4 = 0.5 * (curve.sym_area(*path.lift2) - arc_sym(c, ins.w, -theta))
    value = (1 - r) * (a1 - a3) + r * (a2 - a4)
    cap = (1 - r) * a3 + r * a4
    h = (1 - r) * a1 + r * a2
    return ActionValue(value, h, cap, a1, a2, a3, a4, path.winding, method)


def elegant_action(curve, ins):
    """Weighted cone-minus-arc-region areas (1-r)(A1-A3) + r(A2-A4)."""
    if ins.kind != ELEGANT:
        raise WrongKind("elegant_action needs an Elegant inscription", kind=ins.kind)
    return _area_form(curve, ins, capping_path(curve, ins), "elegant")


def almost_elegant_action(curve, ins):
    """Same area form over the sweep-around capping."""
    if ins.kind != ALMOST:
        raise WrongKind("almost_elegant_action needs an AlmostElegant inscription",
                        kind=ins.kind)
    return _area_form(curve, ins, capping_path(curve, ins), "almost_elegant")
