"""Planar Jordan curves: evaluation, global scalars, projection and binormals.

Points in the plane are complex numbers throughout. Curves are parametrized
over [0, 1) and stored counterclockwise.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import minimize
from scipy.spatial import cKDTree

from .errors import DomainError, NonSimpleCurve
from .quadrature import adaptive_gl

TWO_PI = 2.0 * np.pi


def _as_params(s):
    return np.asarray(s, dtype=float)


class JordanCurve:
    """Common interface of the curve representations.

    Subclasses provide ``eval``, ``deriv``, ``sample``, ``xdy``, ``sym_area``,
    ``project`` and the raw scalars. Scalars are computed once at
    construction and cached.
    """

    kind = "abstract"
    smooth = False

    def _finish(self, validate=True):
        self.reversed_on_load = getattr(self, "reversed_on_load", False)
        self._samples = {}
        self._trees = {}
        self.arc_length = self._compute_length()
        self.diameter, self.diameter_params = self._compute_diameter()
        self.radius = 0.5 * self.diameter
        if validate:
            self.check_simple()
        self.area = self._compute_area()
        if not self.area > 0:
            raise NonSimpleCurve("signed area is not positive", area=self.area)

    # --- sampling helpers -------------------------------------------------
    def sample(self, n):
        """Points at parameters j/n, j = 0..n-1 (cached)."""
        pts = self._samples.get(n)
        if pts is None:
            pts = self.eval(np.arange(n) / n)
            self._samples[n] = pts
        return pts

    def _tree(self, n):
        tree = self._trees.get(n)
        if tree is None:
            p = self.sample(n)
            tree = cKDTree(np.column_stack([p.real, p.imag]))
            self._trees[n] = tree
        return tree

    def dense_n(self):
        return 4096

    # --- scalars ----------------------------------------------------------
    def _compute_diameter(self):
        n = 512
        p = self.sample(n)
        d = np.abs(p[:, None] - p[None, :])
        flat = np.argsort(d, axis=None)[::-1][:40:2]
        best = (-1.0, (0.0, 0.0))
        for idx in flat:
            i, j = np.unravel_index(idx, d.shape)
            x0 = np.array([i / n, j / n])

            def negf(x):
                dz = self.eval(x[0]) - self.eval(x[1])
                g0 = 2 * np.real(np.conj(dz) * self.deriv(x[0]))
                g1 = -2 * np.real(np.conj(dz) * self.deriv(x[1]))
                return -abs(dz) ** 2, -np.array([g0, g1])

            res = minimize(negf, x0, jac=True, method="L-BFGS-B",
                           options={"ftol": 1e-16, "gtol": 1e-14, "maxiter": 200})
            val = float(np.sqrt(max(-res.fun, 0.0)))
            if val > best[0]:
                best = (val, (float(res.x[0] % 1.0), float(res.x[1] % 1.0)))
        return best

    def _compute_area(self):
        return 0.5 * self.sym_area(0.0, 1.0)

    def _compute_length(self):
        return adaptive_gl(lambda s: np.abs(self.deriv(s)), 0.0, 1.0,
                           nodes_per_unit=self._quad_density())

    def _quad_density(self):
        return 64

    def enclosing_radius(self):
        """Radius of the smallest enclosing circle (dense-sample estimate)."""
        pts = self.sample(self.dense_n())
        _, rad = smallest_enclosing_circle(pts)
        return rad

    def check_simple(self):
        """Raise NonSimpleCurve unless the curve passes both simplicity checks.

        A dense self-distance grid bounded away from the diagonal is checked
        against ``1e-9 * diameter``; a dense polyline is also checked for
        crossings, which the distance grid alone can miss.
        """
        import shapely

        n = max(self.dense_n(), 2048)
        p = self.sample(n)
        tree = self._tree(n)
        tol = 1e-9 * self.diameter
        gap = max(int(np.ceil(1e-3 * n)), 1)
        pairs = tree.query_pairs(max(tol, 1e-300), output_type="ndarray")
        if len(pairs):
            sep = np.abs(pairs[:, 0] - pairs[:, 1])
            sep = np.minimum(sep, n - sep)
            if np.any(sep >= gap):
                raise NonSimpleCurve("curve comes back onto itself", tol=tol)
        ring = shapely.LinearRing(np.column_stack([p.real, p.imag]))
        if not ring.is_simple:
            raise NonSimpleCurve("dense polyline self-intersects")
        return True

    def max_speed(self):
        return float(np.max(np.abs(self.deriv(np.arange(2048) / 2048))))

    def metadata(self):
        return {"area": self.area, "radius": self.radius, "length": self.arc_length,
                "enclosing_radius": self.enclosing_radius(),
                "reversed_on_load": bool(self.reversed_on_load)}

    def scaled_about_centroid(self, factor):
        c = self.centroid()
        return self.affine(factor, c * (1 - factor))

    def centroid(self):
        p = self.sample(self.dense_n())
        return complex(np.mean(p))


class FourierCurve(JordanCurve):
    """gamma(s) = sum_k c_k exp(2 pi i k s) for k = -K..K.

    Parameters
    ----------
    coeffs : array_like of complex, length 2K+1
        Coefficients ordered from k=-K to k=K.
    validate : bool
        Run the simplicity check.
    """

    kind = "fourier"
    smooth = True

    def __init__(self, coeffs, validate=True, orient=True):
        c = np.asarray(coeffs, dtype=complex).ravel()
        if c.size % 2 == 0:
            raise DomainError("Fourier coefficient list must have odd length 2K+1")
        self.K = c.size // 2
        self.k = np.arange(-self.K, self.K + 1)
        self.reversed_on_load = False
        if orient and np.sum(self.k * np.abs(c) ** 2) < 0:
            warnings.warn("clockwise curve reversed to counterclockwise", stacklevel=2)
            c = c[::-1].copy()
            self.reversed_on_load = True
        self.coeffs = c
        self._finish(validate)

    def _series(self, coef, s):
        s = _as_params(s)
        flat = np.mod(s.ravel(), 1.0)
        if self.K <= 8 or flat.size * (2 * self.K + 1) < 2_000_000:
            # direct matrix product is fastest and most accurate for small sizes
            e = np.exp(TWO_PI * 1j * np.outer(flat, self.k))
            out = e @ coef
        else:
            z = np.exp(TWO_PI * 1j * flat)
            acc = np.full(flat.shape, coef[-1], dtype=complex)
            for a in coef[-2::-1]:
                acc = acc * z + a
            out = acc * np.exp(-TWO_PI * 1j * self.K * flat)
        return out.reshape(s.shape)

    def eval(self, s):
        return self._series(self.coeffs, s)

    def deriv(self, s, order=1):
        return self._series(self.coeffs * (TWO_PI * 1j * self.k) ** order, s)

    def sample(self, n):
        pts = self._samples.get(n)
        if pts is None:
            m = n
            while m < 2 * self.K + 1:
                m *= 2
            spec = np.zeros(m, dtype=complex)
            spec[np.mod(self.k, m)] = self.coeffs
            pts = (np.fft.ifft(spec) * m)[:: m // n]
            self._samples[n] = pts
        return pts

    def dense_n(self):
        n = 4096
        while n < 8 * self.K:
            n *= 2
        return n

    def _quad_density(self):
        return max(64, 4 * self.K)

    def sym_area(self, sa, sb):
        """Integral of (x dy - y dx) along the curve from lifted parameter sa to sb."""
        def f(s):
            g = self.eval(s)
            d = self.deriv(s)
            return np.imag(np.conj(g) * d)
        return adaptive_gl(f, sa, sb, nodes_per_unit=self._quad_density())

    def xdy(self, sa, sb):
        """Integral of x dy along the curve from lifted parameter sa to sb."""
        def f(s):
            return np.real(self.eval(s)) * np.imag(self.deriv(s))
        return adaptive_gl(f, sa, sb, nodes_per_unit=self._quad_density())

    def area_closed_form(self):
        return float(np.pi * np.sum(self.k * np.abs(self.coeffs) ** 2))

    def max_speed(self):
        return float(np.sum(TWO_PI * np.abs(self.k) * np.abs(self.coeffs)))

    def curvature(self, s):
        d1 = self.deriv(s, 1)
        d2 = self.deriv(s, 2)
        return np.imag(np.conj(d1) * d2) / np.abs(d1) ** 3

    def dkappa_ds(self, s):
        """Derivative of curvature with respect to arc length."""
        d1 = self.deriv(s, 1)
        d2 = self.deriv(s, 2)
        d3 = self.deriv(s, 3)
        sp = np.abs(d1)
        cr = np.imag(np.conj(d1) * d2)
        dk = np.imag(np.conj(d1) * d3) / sp ** 3 - 3 * cr * np.real(np.conj(d1) * d2) / sp ** 5
        return dk / sp

    def affine(self, a, b=0.0):
        """Image under z -> a z + b (a nonzero complex: rotation and scaling)."""
        c = self.coeffs * a
        c[self.K] += b
        return FourierCurve(c, validate=False)

    def project(self, p):
        """Nearest curve parameter and signed distance for each point of ``p``.

        Returns
        -------
        s, d, ambiguous : ndarray
            ``d`` is positive outside the enclosed region.
        """
        p = np.atleast_1d(np.asarray(p, dtype=complex))
        shape = p.shape
        p = p.ravel()
        n = self.dense_n()
        tree = self._tree(n)
        kq = 8
        _, idx = tree.query(np.column_stack([p.real, p.imag]), k=kq)
        h = 1.0 / n
        s0 = idx / n
        s = s0.copy()
        pp = np.repeat(p[:, None], kq, axis=1)
        for _ in range(40):
            g = self.eval(s) - pp
            d1 = self.deriv(s, 1)
            d2 = self.deriv(s, 2)
            f1 = np.real(np.conj(g) * d1)
            f2 = np.abs(d1) ** 2 + np.real(np.conj(g) * d2)
            step = np.where(f2 > 0, -f1 / np.where(f2 > 0, f2, 1.0), -np.sign(f1) * h)
            s_new = np.clip(s + step, s0 - 1.5 * h, s0 + 1.5 * h)
            if np.max(np.abs(s_new - s)) < 1e-15:
                s = s_new
                break
            s = s_new
        dist = np.abs(self.eval(s) - pp)
        best = np.argmin(dist, axis=1)
        rows = np.arange(p.size)
        dmin = dist[rows, best]
        sb = np.mod(s[rows, best], 1.0)
        tol = 1e-9 * self.diameter
        sm = np.mod(s, 1.0)
        gap = np.abs(sm - sb[:, None])
        gap = np.minimum(gap, 1 - gap)
        near = (dist <= dmin[:, None] + tol) & (gap > 3 * h)
        ambiguous = np.any(near, axis=1)
        # tie toward smaller s among near-equal minimizers
        cand = np.where(dist <= dmin[:, None] + tol, sm, np.inf)
        sb = np.where(ambiguous, np.min(cand, axis=1), sb)
        gs = self.eval(sb)
        normal = -1j * self.deriv(sb)
        sign = np.where(np.real(np.conj(p - gs) * normal) >= 0, 1.0, -1.0)
        dmin = np.abs(gs - p)
        return sb.reshape(shape), (sign * dmin).reshape(shape), ambiguous.reshape(shape)

    def to_dict(self):
        return {"kind": "fourier",
                "coefficients": [[float(c.real), float(c.imag)] for c in self.coeffs]}


class PolygonCurve(JordanCurve):
    """Closed polygon parametrized proportionally to arc length."""

    kind = "polygon"
    smooth = False

    def __init__(self, vertices, validate=True, orient=True):
        v = np.asarray(vertices)
        if v.ndim == 2:
            v = v[:, 0] + 1j * v[:, 1]
        v = np.asarray(v, dtype=complex)
        if v.size >= 2 and v[0] == v[-1]:
            v = v[:-1]
        if v.size < 3:
            raise DomainError("polygon needs at least 3 vertices")
        self.reversed_on_load = False
        sa = np.sum(v.real * np.roll(v.imag, -1) - np.roll(v.real, -1) * v.imag)
        if orient and sa < 0:
            warnings.warn("clockwise curve reversed to counterclockwise", stacklevel=2)
            v = v[::-1].copy()
            self.reversed_on_load = True
        self.vertices = v
        self.edges = np.roll(v, -1) - v
        self.edge_len = np.abs(self.edges)
        self.perimeter = float(np.sum(self.edge_len))
        self.cum = np.concatenate([[0.0], np.cumsum(self.edge_len)]) / self.perimeter
        self._finish(validate)

    def _locate(self, s):
        u = np.mod(_as_params(s), 1.0)
        i = np.clip(np.searchsorted(self.cum, u, side="right") - 1, 0, len(self.vertices) - 1)
        t = (u - self.cum[i]) * self.perimeter / self.edge_len[i]
        return i, t

    def eval(self, s):
        i, t = self._locate(s)
        return self.vertices[i] + t * self.edges[i]

    def deriv(self, s, order=1):
        i, _ = self._locate(s)
        if order == 1:
            return self.edges[i] / self.edge_len[i] * self.perimeter
        return np.zeros(np.shape(i), dtype=complex)

    def _compute_length(self):
        return self.perimeter

    def _compute_area(self):
        v = self.vertices
        return 0.5 * float(np.sum(v.real * np.roll(v.imag, -1) - np.roll(v.real, -1) * v.imag))

    def _compute_diameter(self):
        v = self.vertices
        d = np.abs(v[:, None] - v[None, :])
        i, j = np.unravel_index(np.argmax(d), d.shape)
        return float(d[i, j]), (float(self.cum[i]), float(self.cum[j]))

    def max_speed(self):
        return self.perimeter

    def enclosing_radius(self):
        _, rad = smallest_enclosing_circle(self.vertices)
        return rad

    def centroid(self):
        v = self.vertices
        cr = v.real * np.roll(v.imag, -1) - np.roll(v.real, -1) * v.imag
        return complex(np.sum((v + np.roll(v, -1)) * cr) / (6 * self._compute_area()))

    def _path_points(self, sa, sb):
        """Polyline from lifted parameter sa to sb through the vertices crossed."""
        lo, hi = (sa, sb) if sb >= sa else (sb, sa)
        k0, k1 = np.floor(lo), np.floor(hi)
        knots = []
        for base in np.arange(k0, k1 + 1):
            knots.extend(base + self.cum[:-1])
        knots = np.array([x for x in knots if lo < x < hi])
        pars = np.concatenate([[lo], knots, [hi]])
        pts = self.eval(pars)
        return pts if sb >= sa else pts[::-1]

    def xdy(self, sa, sb):
        p = self._path_points(sa, sb)
        return float(np.sum(0.5 * (p[1:].real + p[:-1].real) * np.diff(p.imag)))

    def sym_area(self, sa, sb):
        p = self._path_points(sa, sb)
        return float(np.sum(p[:-1].real * p[1:].imag - p[1:].real * p[:-1].imag))

    def affine(self, a, b=0.0):
        return PolygonCurve(self.vertices * a + b, validate=False)

    def project(self, p):
        import shapely

        p = np.atleast_1d(np.asarray(p, dtype=complex))
        shape = p.shape
        p = p.ravel()
        a = self.vertices[None, :]
        e = self.edges[None, :]
        t = np.real(np.conj(e) * (p[:, None] - a)) / self.edge_len[None, :] ** 2
        t = np.clip(t, 0.0, 1.0)
        q = a + t * e
        dist = np.abs(p[:, None] - q)
        best = np.argmin(dist, axis=1)
        rows = np.arange(p.size)
        dmin = dist[rows, best]
        s = np.mod(self.cum[best] + t[rows, best] * self.edge_len[best] / self.perimeter, 1.0)
        tol = 1e-9 * self.diameter
        spar = np.mod(self.cum[None, :-1] + t * self.edge_len[None, :] / self.perimeter, 1.0)
        gap = np.abs(spar - s[:, None])
        gap = np.minimum(gap, 1 - gap)
        near = (dist <= dmin[:, None] + tol) & (gap > 1e-9)
        ambiguous = np.any(near, axis=1)
        cand = np.where(dist <= dmin[:, None] + tol, spar, np.inf)
        s = np.where(ambiguous, np.min(cand, axis=1), s)
        poly = shapely.Polygon(np.column_stack([self.vertices.real, self.vertices.imag]))
        inside = shapely.contains_xy(poly, p.real, p.imag)
        sign = np.where(inside, -1.0, 1.0)
        return s.reshape(shape), (sign * dmin).reshape(shape), ambiguous.reshape(shape)

    def to_dict(self):
        return {"kind": "polygon",
                "vertices": [[float(v.real), float(v.imag)] for v in self.vertices]}


def fourier_from_points(points, max_modes=1024, rel_tol=1e-8, dense=None):
    """Fourier curve through a closed point list.

    The points are joined by a periodic cubic spline in centripetal
    parametrization, densely resampled, and transformed; the mode count is the
    smallest that reproduces the spline within ``rel_tol * diameter``.
    """
    p = np.asarray(points)
    if p.ndim == 2:
        p = p[:, 0] + 1j * p[:, 1]
    p = np.asarray(p, dtype=complex)
    if p[0] == p[-1]:
        p = p[:-1]
    seg = np.sqrt(np.abs(np.diff(np.concatenate([p, p[:1]]))))
    knots = np.concatenate([[0.0], np.cumsum(seg)])
    knots /= knots[-1]
    closed = np.concatenate([p, p[:1]])
    spl = CubicSpline(knots, np.column_stack([closed.real, closed.imag]), bc_type="periodic")
    m = dense or max(8192, 64 * len(p))
    u = np.arange(m) / m
    xy = spl(u)
    z = xy[:, 0] + 1j * xy[:, 1]
    spec = np.fft.fft(z) / m
    diam = np.max(np.abs(z[:, None][::8] - z[None, ::8]))
    kmax = min(max_modes, m // 2 - 1)
    K = 8
    while True:
        k = np.arange(-K, K + 1)
        c = spec[np.mod(k, m)]
        approx = np.exp(TWO_PI * 1j * np.outer(u[::4], k)) @ c
        if np.max(np.abs(approx - z[::4])) <= rel_tol * diam or K >= kmax:
            break
        K = min(2 * K, kmax)
    return FourierCurve(c)


def curve_from_dict(d, validate=True):
    kind = d.get("kind")
    if kind == "fourier":
        c = np.array([complex(a, b) for a, b in d["coefficients"]])
        return FourierCurve(c, validate=validate)
    if kind == "polygon":
        return PolygonCurve(np.array(d["vertices"], dtype=float), validate=validate)
    if kind == "samples":
        return fourier_from_points(np.array(d["points"], dtype=float),
                                   max_modes=int(d.get("max_modes", 1024)))
    raise DomainError(f"unknown curve kind {kind!r}")


def load_curve(path):
    """Curve from a JSON file; a command output document carrying a curve also works."""
    with open(path) as fh:
        d = json.load(fh)
    if "schema" in d and isinstance(d.get("result"), dict) and "curve" in d["result"]:
        d = d["result"]["curve"]
    return curve_from_dict(d)


# --- binormals ----------------------------------------------------------------

@dataclass
class Binormal:
    s1: float
    s2: float
    endpoints: tuple
    length: float
    family: bool = False


def _chord_grad_hess(curve, s1, s2):
    g1, g2 = curve.eval(s1), curve.eval(s2)
    a1, a2 = curve.deriv(s1), curve.deriv(s2)
    b1, b2 = curve.deriv(s1, 2), curve.deriv(s2, 2)
    dz = g1 - g2
    grad = np.stack([2 * np.real(np.conj(dz) * a1), -2 * np.real(np.conj(dz) * a2)], axis=-1)
    h11 = 2 * (np.abs(a1) ** 2 + np.real(np.conj(dz) * b1))
    h22 = 2 * (np.abs(a2) ** 2 - np.real(np.conj(dz) * b2))
    h12 = -2 * np.real(np.conj(a1) * a2)
    hess = np.stack([np.stack([h11, h12], -1), np.stack([h12, h22], -1)], -2)
    return grad, hess


def binormals(curve, grid_n=256, max_iter=60):
    """Critical chords of the squared distance, longest first.

    Parameters
    ----------
    curve : FourierCurve
    grid_n : int
        Seeding grid resolution per parameter.

    Returns
    -------
    list of Binormal
        When the critical set is a continuum (a circle, say), a single
        representative with ``family=True``.
    """
    if not curve.smooth:
        raise DomainError("binormals need a smooth curve; polygon input rejected")
    n = grid_n
    s = np.arange(n) / n
    p = curve.sample(n)
    d = curve.deriv(s)
    dz = p[:, None] - p[None, :]
    g1 = np.real(np.conj(dz) * d[:, None])
    g2 = -np.real(np.conj(dz) * d[None, :])
    gn = np.hypot(g1, g2) / (np.abs(dz) + 1e-300)
    band = np.abs(dz) <= 0.05 * curve.diameter
    gn[band] = np.inf
    nb = np.full_like(gn, np.inf)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di or dj:
                nb = np.minimum(nb, np.roll(np.roll(gn, di, 0), dj, 1))
    seeds = np.argwhere((gn <= nb) & np.isfinite(gn))
    x = seeds / n
    x = x[x[:, 0] < x[:, 1] + 0.5]  # both orders will be merged later anyway
    for _ in range(max_iter):
        grad, hess = _chord_grad_hess(curve, x[:, 0], x[:, 1])
        step = np.einsum("nij,nj->ni", np.linalg.pinv(hess, rcond=1e-10), grad)
        step = np.clip(step, -2.0 / n, 2.0 / n)
        x = x - step
        if np.max(np.abs(step)) < 1e-15:
            break
    grad, hess = _chord_grad_hess(curve, x[:, 0], x[:, 1])
    chord = curve.eval(x[:, 0]) - curve.eval(x[:, 1])
    length = np.abs(chord)
    scale = length * np.maximum(np.abs(curve.deriv(x[:, 0])), np.abs(curve.deriv(x[:, 1])))
    ok = (np.max(np.abs(grad), axis=1) < 1e-9 * scale) & (length > 1e-3 * curve.diameter)
    x, length, hess = x[ok], length[ok], hess[ok]
    x = np.mod(x, 1.0)
    sv = np.linalg.svd(hess, compute_uv=False)
    degenerate = sv[:, -1] < 1e-6 * sv[:, 0]
    if np.any(degenerate) and np.mean(degenerate) > 0.5:
        i = int(np.argmax(length))
        a, b = sorted(x[i])
        return [Binormal(float(a), float(b), (complex(curve.eval(a)), complex(curve.eval(b))),
                         float(length[i]), family=True)]
    out = []
    for (a, b), L in sorted(zip(x.tolist(), length.tolist()), key=lambda t: -t[1]):
        a, b = sorted((a, b))
        dup = False
        for q in out:
            da = abs(q.s1 - a) % 1.0
            db = abs(q.s2 - b) % 1.0
            if min(da, 1 - da) < 1e-6 and min(db, 1 - db) < 1e-6:
                dup = True
                break
        if not dup:
            out.append(Binormal(a, b, (complex(curve.eval(a)), complex(curve.eval(b))), L))
    out.sort(key=lambda q: (-q.length, q.s1, q.s2))
    return out


# --- smallest enclosing circle --------------------------------------------------

def _circle_two(a, b):
    c = 0.5 * (a + b)
    return c, abs(a - c)


def _circle_three(a, b, c):
    ax, ay, bx, by, cx, cy = a.real, a.imag, b.real, b.imag, c.real, c.imag
    d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if abs(d) < 1e-300:
        pts = [a, b, c]
        far = max(((p, q) for p in pts for q in pts), key=lambda t: abs(t[0] - t[1]))
        return _circle_two(*far)
    ux = ((ax ** 2 + ay ** 2) * (by - cy) + (bx ** 2 + by ** 2) * (cy - ay)
          + (cx ** 2 + cy ** 2) * (ay - by)) / d
    uy = ((ax ** 2 + ay ** 2) * (cx - bx) + (bx ** 2 + by ** 2) * (ax - cx)
          + (cx ** 2 + cy ** 2) * (bx - ax)) / d
    o = complex(ux, uy)
    return o, abs(a - o)


def smallest_enclosing_circle(points, seed=0):
    """Welzl-style incremental minimum enclosing circle (center, radius)."""
    pts = np.asarray(points, dtype=complex).ravel().tolist()
    rng = np.random.default_rng(seed)
    rng.shuffle(pts)
    eps = 1e-12
    c, rad = pts[0], 0.0
    for i, p in enumerate(pts):
        if abs(p - c) <= rad * (1 + eps):
            continue
        c, rad = p, 0.0
        for j in range(i):
            q = pts[j]
            if abs(q - c) <= rad * (1 + eps):
                continue
            c, rad = _circle_two(p, q)
            for k in range(j):
                t = pts[k]
                if abs(t - c) <= rad * (1 + eps):
                    continue
                c, rad = _circle_three(p, q, t)
    return c, float(rad)
