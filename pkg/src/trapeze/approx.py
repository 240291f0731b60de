"""Smooth approximation of curves by mollification and local graph constants."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .curves import FourierCurve, PolygonCurve
from .errors import NotGraphical, NotSimple, TrapezeError, WitnessNotFound
from .inscribe import find_inscriptions
from .trapezoid import TrapezoidClass

TWO_PI = 2 * np.pi


def _bump(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1
    out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
    return out


class MollifierKernel:
    """Smooth nonnegative profile on [-1, 1] normalized to unit integral.

    Parameters
    ----------
    profile : callable, optional
        Unnormalized profile; defaults to exp(-1/(1-u^2)).
    nodes : int
        Gauss-Legendre nodes used for the Fourier transform, which is
        resolved for |xi| <= XI_MAX and taken as zero beyond (the bump's
        transform is below 1e-12 there).
    """

    XI_MAX = 100.0

    def __init__(self, profile=None, name="bump", nodes=1500):
        self.name = name
        self._profile = profile or _bump
        mass, _ = quad(lambda u: float(self._profile(np.array(u))), -1, 1,
                       epsabs=1e-15, epsrel=1e-13, limit=200)
        self.c = 1.0 / mass
        x, w = np.polynomial.legendre.leggauss(nodes)
        self._x, self._w = x, w * self.c * self._profile(x)
        self.mass_error = abs(float(np.sum(self._w)) - 1.0)
        if self.mass_error > 1e-10:
            raise TrapezeError("kernel normalization failed", error=self.mass_error)

    def __call__(self, u):
        return self.c * self._profile(np.asarray(u, dtype=float))

    def fourier(self, xi):
        """Integral of phi(u) exp(-2 pi i u xi) du (real, the profile is even)."""
        xi = np.asarray(xi, dtype=float)
        out = np.zeros(xi.shape)
        flat = xi.ravel()
        res = out.ravel()
        idx = np.nonzero(np.abs(flat) <= self.XI_MAX)[0]
        for i in range(0, idx.size, 2048):
            j = idx[i:i + 2048]
            res[j] = np.cos(TWO_PI * np.outer(flat[j], self._x)) @ self._w
        return res.reshape(xi.shape)


def polygon_fourier(poly, K):
    """Exact Fourier coefficients (k = -K..K) of a polygon's arc-length parametrization."""
    v = poly.vertices
    t = poly.cum[:-1]
    vel = poly.edges / poly.edge_len * poly.perimeter
    jump = vel - np.roll(vel, 1)  # velocity jump at each vertex
    k = np.arange(-K, K + 1)
    c = np.empty(k.size, dtype=complex)
    nz = k != 0
    kk = k[nz]
    e = np.exp(-TWO_PI * 1j * np.outer(kk, t))
    c[nz] = -(e @ jump) / (TWO_PI * kk) ** 2
    mids = v + 0.5 * poly.edges
    c[K] = np.sum(mids * poly.edge_len) / poly.perimeter
    return c


def _mode_cut(kernel, eps, scale, tol):
    """Smallest K beyond which kernel-damped modes of size scale/k^2 fall below tol."""
    k = np.arange(1, int(kernel.XI_MAX / eps) + 2)
    damp = np.abs(kernel.fourier(k * eps)) * scale / k.astype(float) ** 2
    tail = np.cumsum(damp[::-1])[::-1]
    idx = np.nonzero(tail < tol)[0]
    return int(k[idx[0]]) if idx.size else int(k[-1])


def mollify(curve, eps, kernel=None, tol=1e-10, validate=True):
    """Convolve the parametrization with the scaled kernel.

    Works mode by mode: Fourier mode k is multiplied by phi_hat(k eps).

    Parameters
    ----------
    curve : FourierCurve or PolygonCurve
    eps : float
        Kernel half-width in parameter units (parameters live in [0, 1)).
    kernel : MollifierKernel, optional
    tol : float
        Dropped modes contribute less than ``tol * diameter``.

    Returns
    -------
    FourierCurve
        With attributes ``deviation`` (max pointwise distance to the input on
        a dense sample) and ``modulus`` (modulus of continuity of the input at
        radius eps).
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    kernel = kernel or MollifierKernel()
    if isinstance(curve, PolygonCurve):
        scale = np.sum(np.abs(np.diff(np.concatenate([curve.edges, curve.edges[:1]])
                                      / np.concatenate([curve.edge_len, curve.edge_len[:1]]))))
        scale *= curve.perimeter / TWO_PI ** 2
        K = _mode_cut(kernel, eps, scale, tol * curve.diameter)
        coeffs = polygon_fourier(curve, K)
    elif isinstance(curve, FourierCurve):
        coeffs, K = curve.coeffs, curve.K
    else:
        raise TypeError("mollify needs a Fourier or polygon curve")
    k = np.arange(-K, K + 1)
    new = coeffs * kernel.fourier(k * eps)
    mag = np.abs(new)
    keep = np.nonzero(mag > 1e-16 * mag.max())[0]
    Kt = max(1, int(np.max(np.abs(k[keep]))))
    new = new[K - Kt:K + Kt + 1]
    try:
        out = FourierCurve(new, validate=validate, orient=False)
    except NotSimple:
        raise
    except TrapezeError as exc:
        raise NotSimple("mollified curve is not simple at this eps; shrink eps",
                        eps=eps) from exc
    n = 8192
    s = np.arange(n) / n
    g = curve.eval(s)
    out.deviation = float(np.max(np.abs(out.eval(s) - g)))
    shifts = np.linspace(-eps, eps, 41)
    out.modulus = float(max(np.max(np.abs(curve.eval(s + u) - g)) for u in shifts))
    out.eps = eps
    out.kernel = kernel.name
    return out


def rescale_to_area(curve, area):
    return curve.scaled_about_centroid(np.sqrt(area / curve.area))


# --- graph constants -----------------------------------------------------------------

@dataclass
class GraphicalConstants:
    K: float
    mu_K: float | None
    mu: float
    theta_argmin: float = 0.0
    n_base: int = 0
    n_directions: int = 720
    flags: list = field(default_factory=list)

    def to_dict(self):
        return {"K": self.K, "mu_K": self.mu_K, "mu": self.mu, "theta_argmin": self.theta_argmin,
                "n_base": self.n_base, "n_directions": self.n_directions,
                "resolution": "grid-limited estimate", "flags": list(self.flags)}


def _sample_params(curve, n):
    s = np.arange(n) / n
    if isinstance(curve, PolygonCurve):
        s = np.unique(np.concatenate([s, curve.cum[:-1]]))
    return s


def _window_mu(g, ok, base):
    """Margin min(|g(t)-g(t1)|, |g(t)-g(t2)|) over the maximal run of good segments.

    ``ok[i]`` says segment i (sample i to i+1, cyclic) may lie in the window.
    Base indices are sample indices; the window must contain both adjacent
    segments.
    """
    n = g.size
    if np.all(ok):
        return np.full(base.size, np.inf)
    # distance to the next bad segment forward and backward, cyclically
    bad = np.nonzero(~ok)[0]
    nxt = bad[np.searchsorted(bad, base) % bad.size]     # first bad segment index >= base
    prv = bad[(np.searchsorted(bad, base) - 1) % bad.size]  # last bad segment index < base
    end = nxt % n                                       # window ends at sample nxt
    start = (prv + 1) % n                               # window starts at sample prv+1
    empty = (ok[base] == False) | (ok[(base - 1) % n] == False)  # noqa: E712
    mu = np.minimum(np.abs(g[base] - g[start]), np.abs(g[base] - g[end]))
    mu[empty] = 0.0
    return mu


def _mu_direction(pts, alpha, base, K, slack=0.0):
    v = np.exp(1j * alpha)
    g = np.real(pts * np.conj(v))
    f = np.imag(pts * np.conj(v))
    dg = np.roll(g, -1) - g
    df = np.roll(f, -1) - f
    res = []
    for sense in (1.0, -1.0):
        mono = sense * dg > 0
        good = mono if K is None else mono & (np.abs(df) <= K * (1 + 1e-9) * np.abs(dg) + slack)
        res.append(_window_mu(g, good, base))
    return np.maximum(res[0], res[1])


def _golden_max(fun, a, b, iters=30):
    gr = (np.sqrt(5) - 1) / 2
    c, d = b - gr * (b - a), a + gr * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = fun(d)
    return max(fc, fd)


def _local_constant(curve, K, n_samples, n_base, n_dir):
    s = _sample_params(curve, n_samples)
    pts = curve.eval(s)
    stride = max(1, s.size // n_base)
    base = np.arange(0, s.size, stride)
    if isinstance(curve, PolygonCurve):
        base = np.unique(np.concatenate([base, np.searchsorted(s, curve.cum[:-1])]))
    alphas = np.pi * np.arange(n_dir) / n_dir
    # samples of a truncated series are exact only to ~1e-10 diam, so each
    # segment gets an absolute allowance on top of the relative K tolerance
    slack = 1e-9 * curve.diameter
    table = np.stack([_mu_direction(pts, a, base, K, slack) for a in alphas])
    best = table.max(axis=0)
    arg = table.argmax(axis=0)
    step = np.pi / n_dir
    refined = best.copy()
    # golden refinement of the direction at the base points that set the minimum
    order = np.argsort(best)[:32]
    for j in order:
        b = base[j:j + 1]
        a0 = alphas[arg[j]]
        val = _golden_max(lambda a: float(_mu_direction(pts, a, b, K, slack)[0]),
                          a0 - step, a0 + step)
        refined[j] = max(best[j], val)
    j = int(np.argmin(refined))
    return float(refined[j]), float(s[base[j]]), base.size


def lipschitz_constants(curve, K, n_samples=4096, n_base=1024, n_dir=720):
    """Local K-Lipschitz-graphical constant mu_K and local monotonicity constant mu.

    For each base parameter, directions v are scanned (with golden-section
    refinement near the best grid direction) and the largest window around
    the base point is grown on which the projection onto v is strictly
    monotone (and, for mu_K, the normal component is K-Lipschitz over it).
    The window margin is the smaller of the two projected distances from the
    base point to the window ends. Values are grid-limited estimates.

    Raises
    ------
    NotGraphical
        If some base point admits no qualifying direction at this K.
    """
    if not K > 0:
        raise ValueError("K must be positive")
    mu_k, t_k, nb = _local_constant(curve, K, n_samples, n_base, n_dir)
    if mu_k <= 0:
        raise NotGraphical("curve is not locally K-Lipschitz-graphical at this K",
                           K=K, theta=t_k)
    mu, _, _ = _local_constant(curve, None, n_samples, n_base, n_dir)
    return GraphicalConstants(K, mu_k, mu, t_k, nb, n_dir)


def mollify_preserves(curve, K, eps_seq, kernel=None, rel=0.05, **kw):
    """Track mu_K and mu of mollified curves along a decreasing eps sequence.

    Passes when the constants at the finest eps are at least (1 - rel) times
    those of the input and the deviation from the input shrinks monotonically.
    """
    base = lipschitz_constants(curve, K, **kw)  # raises if the input fails K
    rows = []
    for eps in sorted(eps_seq, reverse=True):
        m = mollify(curve, eps, kernel)
        c = lipschitz_constants(m, K, **kw)
        rows.append({"eps": eps, "mu_K": c.mu_K, "mu": c.mu, "deviation": m.deviation,
                     "modes": m.K})
    muk = np.array([r["mu_K"] for r in rows])
    mu = np.array([r["mu"] for r in rows])
    dev = np.array([r["deviation"] for r in rows])
    trend = bool(np.all(np.diff(muk) >= -rel * base.mu_K))
    ok_k = bool(muk[-1] >= (1 - rel) * base.mu_K)
    ok_m = bool(mu[-1] >= (1 - rel) * base.mu)
    dev_ok = bool(np.all(np.diff(dev) < 0))
    return {"K": K, "base": base.to_dict(), "ladder": rows, "mu_K_trend": trend,
            "mu_K_liminf": ok_k, "mu_liminf": ok_m, "deviation_monotone": dev_ok,
            "passed": trend and ok_k and ok_m and dev_ok}


# --- existence experiment ---------------------------------------------------------------

def admissible_angle(curve, r):
    """Upper end Area / (2 (1-r) Rad^2) of the angle range."""
    return curve.area / (2 * (1 - r) * curve.radius ** 2)


def theorem_A_experiment(curve, r, theta_samples, eps_ladder=(0.02, 0.01, 0.005),
                         grid_n=128, K_candidates=(1.0, 2.0, 5.0, 10.0), kernel=None):
    """Search for non-degenerate inscriptions along a mollification ladder.

    For each angle below :func:`admissible_angle`, every rung curve is
    rescaled to the input area and searched; the witness is the inscription
    with the longest diagonal. A theta passes when every rung has a witness
    and the smallest witness diagonal stays above 1e-2 times the diameter.

    Returns
    -------
    dict
        Per-theta rows with the witnesses and ``min_diag``; missing
        witnesses are reported as ``WitnessNotFound`` without aborting.
    """
    consts = None
    for K in K_candidates:
        try:
            consts = lipschitz_constants(curve, K)
            break
        except NotGraphical:
            continue
    if consts is None:
        raise NotGraphical("no candidate K qualifies", K=list(K_candidates))
    bound = admissible_angle(curve, r)
    smooth = isinstance(curve, FourierCurve)
    ladder = [None] if smooth else sorted(eps_ladder, reverse=True)
    rungs = []
    for eps in ladder:
        if eps is None:
            rungs.append((None, curve))
        else:
            rungs.append((eps, rescale_to_area(mollify(curve, eps, kernel), curve.area)))
    floor = 1e-2 * curve.diameter
    rows = []
    for theta in theta_samples:
        row = {"theta": float(theta), "admissible": bool(theta < bound), "witnesses": []}
        if not 0 < theta < bound:
            row["status"] = "outside_range"
            rows.append(row)
            continue
        try:
            for eps, c in rungs:
                ins = find_inscriptions(c, TrapezoidClass(r, theta), grid_n=grid_n)
                if len(ins) == 0:
                    raise WitnessNotFound("no inscription on this rung", theta=theta, eps=eps)
                w = max(ins, key=lambda q: q.diag_length)
                row["witnesses"].append({"eps": eps, "diag_length": w.diag_length,
                                         "vertices": [[v.real, v.imag] for v in w.vertices],
                                         "kind": w.kind, "family": w.family})
            diags = [w["diag_length"] for w in row["witnesses"]]
            row["min_diag"] = float(min(diags))
            row["status"] = "ok" if row["min_diag"] > floor else "degenerate"
        except WitnessNotFound as exc:
            row["status"] = exc.code
            row["error"] = str(exc)
        rows.append(row)
    ok = [r_ for r_ in rows if r_["admissible"]]
    return {"r": r, "bound": bound, "K": consts.K, "mu_K": consts.mu_K,
            "eps_ladder": [e for e, _ in rungs], "rows": rows,
            "min_diag": min((r_["min_diag"] for r_ in ok if "min_diag" in r_), default=None),
            "passed": bool(ok) and all(r_["status"] == "ok" for r_ in ok)}
