"""Similarity-class geometry of isosceles trapezoids.

A pair (z, w) is sent to (z', w') by rotating both points clockwise by theta
about p = (1-r) z + r w. The same map is the composite F_r^{-1} R_theta F_r of
a linear change of coordinates and a rotation of the second coordinate, and it
is the time-one flow of H = theta r (1-r) |z-w|^2 / 2 for the form
(1-r) dx1^dy1 + r dx2^dy2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import check_r, check_theta


@dataclass(frozen=True)
class TrapezoidClass:
    r: float
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "r", check_r(self.r))
        object.__setattr__(self, "theta", check_theta(self.theta))

    @classmethod
    def limit(cls, r, theta):
        """Build a class with theta allowed on the closed interval [0, pi]."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "r", check_r(r))
        object.__setattr__(obj, "theta", check_theta(theta, closed=True))
        return obj


def _rt(cls_or_r, theta=None):
    """(r, theta) from a class, an (r, theta) pair of arrays, or two arguments."""
    if theta is None:
        if isinstance(cls_or_r, tuple):
            return cls_or_r
        return cls_or_r.r, cls_or_r.theta
    return cls_or_r, theta


def coefficients(r, theta):
    """Complex weights with z' = a z + b w and w' = c z + d w."""
    e = np.exp(-1j * theta)
    return (1 - r) + r * e, r * (1 - e), (1 - r) * (1 - e), r + (1 - r) * e


def f_forward(r, z, w):
    """((1-r) z + r w, sqrt(r(1-r)) (z - w))."""
    return (1 - r) * z + r * w, np.sqrt(r * (1 - r)) * (z - w)


def f_inverse(r, u, v):
    q = v / np.sqrt(r * (1 - r))
    return u + r * q, u - (1 - r) * q


def g_map(cls, z, w):
    """Rotate z and w clockwise by theta about (1-r) z + r w."""
    r, theta = _rt(cls)
    p = (1 - r) * z + r * w
    e = np.exp(-1j * theta)
    return p + e * (z - p), p + e * (w - p)


def g_map_matrix(cls, z, w):
    """The same map through the F_r coordinates (cross-check route)."""
    r, theta = _rt(cls)
    u, v = f_forward(r, z, w)
    return f_inverse(r, u, v * np.exp(-1j * theta))


def hamiltonian(cls, z, w):
    r, theta = _rt(cls)
    return 0.5 * theta * r * (1 - r) * np.abs(z - w) ** 2


def flow(cls, t, z, w):
    """Rotate the pair clockwise by t * theta about its fixed point p."""
    r, theta = _rt(cls)
    if np.all(np.asarray(t) == 0):
        return z, w
    p = (1 - r) * z + r * w
    e = np.exp(-1j * theta * np.asarray(t))
    return p + e * (z - p), p + e * (w - p)


def real_jacobian(cls, theta=None):
    """4x4 Jacobian of g_map on (x1, y1, x2, y2); the map is linear.

    With array ``r`` and ``theta`` the result has shape (..., 4, 4).
    """
    a, b, c, d = coefficients(*_rt(cls, theta))

    def block(q):
        q = np.asarray(q)
        return np.stack([np.stack([q.real, -q.imag], -1), np.stack([q.imag, q.real], -1)], -2)

    top = np.concatenate([block(a), block(b)], -1)
    bottom = np.concatenate([block(c), block(d)], -1)
    return np.concatenate([top, bottom], -2)


def omega_matrix(r):
    r = np.asarray(r, dtype=float)[..., None, None]
    j = np.array([[0.0, 1.0], [-1.0, 0.0]])
    z = np.zeros((2, 2))
    return np.block([[(1 - r) * j, z + 0 * r], [z + 0 * r, r * j]])


def symplectic_residual(cls, theta=None):
    """max |J^T Omega J - Omega| for the map's Jacobian (elementwise over arrays)."""
    r, th = _rt(cls, theta)
    jac = real_jacobian(r, th)
    om = omega_matrix(r)
    res = np.abs(np.swapaxes(jac, -1, -2) @ om @ jac - om).max(axis=(-2, -1))
    return float(res) if res.ndim == 0 else res


def diagonal_geometry(r, z, zp, w, wp):
    """Crossing point, split ratios, crossing angle and lengths of the diagonals.

    Returns a dict with ``p`` (intersection), ``t1`` and ``t2`` (fractions
    along z->w and z'->w'), ``angle`` (clockwise angle from z-p to z'-p) and
    the two diagonal lengths. Works on arrays.
    """
    d1 = w - z
    d2 = wp - zp
    rhs = zp - z
    den = np.imag(np.conj(d1) * d2)
    t1 = np.imag(np.conj(rhs) * d2) / den
    t2 = np.imag(np.conj(rhs) * d1) / den
    p = z + t1 * d1
    ang = np.angle((z - p) / (zp - p))
    return {"p": p, "t1": t1, "t2": t2, "angle": np.mod(ang, 2 * np.pi),
            "len1": np.abs(d1), "len2": np.abs(d2)}
