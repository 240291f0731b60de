"""Standard test curves."""

import numpy as np

from .curves import FourierCurve, PolygonCurve, fourier_from_points


def circle(radius=1.0, center=0.0):
    return FourierCurve([0.0, center, radius])


def ellipse(a=2.0, b=1.0):
    # a cos + i b sin = (a+b)/2 e^{i phi} + (a-b)/2 e^{-i phi}
    return FourierCurve([(a - b) / 2, 0.0, (a + b) / 2])


def quartic_oval(n=1024, tol=1e-15):
    """The oval x^4/16 + y^2 = 1, sampled in polar form and truncated in Fourier."""
    phi = 2 * np.pi * np.arange(n) / n
    c, s = np.cos(phi), np.sin(phi)
    a = c ** 4 / 16
    b = s ** 2
    # a rho^4 + b rho^2 = 1, solved for rho^2 without cancellation
    rho2 = 2.0 / (b + np.sqrt(b * b + 4 * a))
    z = np.sqrt(rho2) * np.exp(1j * phi)
    spec = np.fft.fft(z) / n
    mag = np.abs(spec)
    keep = mag > tol * mag.max()
    kk = np.fft.fftfreq(n, 1.0 / n).astype(int)
    K = int(np.max(np.abs(kk[keep])))
    k = np.arange(-K, K + 1)
    return FourierCurve(spec[np.mod(k, n)])


def unit_square():
    return PolygonCurve([[0, 0], [1, 0], [1, 1], [0, 1]])


def limacon(b=0.9):
    """rho = 1 + b cos(phi); a dimpled non-convex curve for b > 1/2."""
    return FourierCurve([0.0, 0.0, b / 2, 1.0, b / 2])


# Control polygons traced from the two sweep-around sketches. In both the
# trapezoid has z, z' on top and w, w' on the bottom edge.
FIG4_LEFT_TRAPEZOID = (-6.25 + 1.25j, -4.25 + 1.25j, -3.5 - 2.75j, -7.0 - 2.75j)
FIG4_LEFT_POINTS = [
    -7.0 - 2.75j, -7.75 - 1.0j, -7.75 + 0.25j, -6.25 + 1.25j, -5.25 + 2.0j,
    -4.25 + 1.25j, -3.0 - 0.5j, -3.0 - 2.0j, -3.5 - 2.75j, -2.5 - 3.25j,
    -1.75 - 1.0j, -2.5 + 1.25j, -4.5 + 3.0j, -6.75 + 1.75j, -8.75 + 0.75j,
    -8.5 - 1.5j, -8.0 - 3.5j,
]
FIG4_RIGHT_TRAPEZOID = (4.5 + 1.25j, 6.5 + 1.25j, 7.25 - 2.75j, 3.75 - 2.75j)
FIG4_RIGHT_POINTS = [
    3.75 - 2.75j, 3.0 - 1.0j, 3.0 + 0.25j, 4.5 + 1.25j, 5.5 + 2.0j,
    6.5 + 1.25j, 7.5 + 1.5j, 6.75 + 3.0j, 4.25 + 2.5j, 2.75 + 1.25j,
    1.75 - 1.25j, 3.5 - 4.0j, 5.5 - 5.25j, 8.0 - 3.75j, 7.25 - 2.75j,
    5.0 - 3.75j,
]


def _trapezoid_class(z, zp, w, wp):
    """(r, theta) of the trapezoid with diagonals z-w and z'-w'."""
    # z + t (w - z) = z' + u (w' - z')
    m = np.array([[(w - z).real, -(wp - zp).real], [(w - z).imag, -(wp - zp).imag]])
    t, _ = np.linalg.solve(m, [(zp - z).real, (zp - z).imag])
    p = z + t * (w - z)
    theta = float(np.angle((z - p) / (zp - p)))
    return float(t), theta


def fig4_left():
    """Curve whose arc from w to w' runs around the rest of the curve.

    Returns the curve and the class (r, theta) of the traced trapezoid.
    """
    curve = fourier_from_points(np.array(FIG4_LEFT_POINTS) / 4.0, max_modes=128, rel_tol=1e-5)
    return curve, _trapezoid_class(*FIG4_LEFT_TRAPEZOID)


def fig4_right():
    """Curve whose arc from z' to w runs around the rest of the curve."""
    curve = fourier_from_points(np.array(FIG4_RIGHT_POINTS) / 4.0, max_modes=128, rel_tol=1e-5)
    return curve, _trapezoid_class(*FIG4_RIGHT_TRAPEZOID)


def fig6():
    """Dimpled curve with a vertical quadrisecant of ratio 1:3."""
    return limacon(0.9)


def corpus():
    """Named fixtures used by the oracle and property tests."""
    return {
        "circle": circle(),
        "ellipse": ellipse(),
        "quartic": quartic_oval(),
        "square": unit_square(),
        "limacon": limacon(),
        "fig4_left": fig4_left()[0],
        "fig4_right": fig4_right()[0],
    }
