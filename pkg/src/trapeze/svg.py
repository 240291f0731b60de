"""Static SVG drawings of curves, inscriptions and branch diagrams."""

from __future__ import annotations

import numpy as np

# diagonal pieces: z-p and z'-p carry weight r, p-w and p-w' carry weight 1-r
COLOR_R = "#d62728"
COLOR_1MR = "#1f77b4"


def _fmt(x):
    return format(float(x), ".6g")


class _Frame:
    def __init__(self, pts, size, margin=0.06):
        lo = np.array([pts.real.min(), pts.imag.min()])
        hi = np.array([pts.real.max(), pts.imag.max()])
        span = max(hi - lo)
        self.lo = lo - margin * span
        self.scale = size / (span * (1 + 2 * margin))
        self.height = (hi[1] - lo[1] + 2 * margin * span) * self.scale
        self.width = (hi[0] - lo[0] + 2 * margin * span) * self.scale

    def xy(self, z):
        x = (np.real(z) - self.lo[0]) * self.scale
        y = self.height - (np.imag(z) - self.lo[1]) * self.scale
        return x, y


def _path(frame, pts, closed=True):
    x, y = frame.xy(pts)
    d = "M" + " L".join(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(x, y))
    return d + (" Z" if closed else "")


def render(curve, inscriptions=(), size=480, n=1024):
    """SVG text with the curve and, per inscription, its sides and weighted diagonals."""
    pts = curve.sample(n)
    frame = _Frame(pts, size)
    lw = _fmt(size / 300)
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(frame.width)}" '
             f'height="{_fmt(frame.height)}" viewBox="0 0 {_fmt(frame.width)} '
             f'{_fmt(frame.height)}">',
             f'<path class="curve" d="{_path(frame, pts)}" fill="none" stroke="black" '
             f'stroke-width="{lw}"/>']
    for q in inscriptions:
        r = q.cls.r
        z, zp, w, wp = q.vertices
        p = (1 - r) * z + r * w
        quad = np.array([z, zp, w, wp])
        # the trapezoid's sides run z, z', w, w' in circle order (w, z', z, w')
        ring = np.array([w, zp, z, wp])
        parts.append(f'<path class="trapezoid" d="{_path(frame, ring)}" fill="none" '
                     f'stroke="gray" stroke-dasharray="4 3" stroke-width="{lw}"/>')
        for a, b, cls, color in ((z, p, "weight-r", COLOR_R), (p, w, "weight-1mr", COLOR_1MR),
                                 (zp, p, "weight-r", COLOR_R), (p, wp, "weight-1mr", COLOR_1MR)):
            (x1, x2), (y1, y2) = frame.xy(np.array([a, b]))
            parts.append(f'<line class="diagonal {cls}" x1="{_fmt(x1)}" y1="{_fmt(y1)}" '
                         f'x2="{_fmt(x2)}" y2="{_fmt(y2)}" stroke="{color}" '
                         f'stroke-width="{lw}"/>')
        for v, name in zip(quad, ("z", "z'", "w", "w'")):
            x, y = frame.xy(v)
            parts.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(size / 120)}"/>')
            parts.append(f'<text x="{_fmt(x + 4)}" y="{_fmt(y - 4)}" font-size="12">{name}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def branch_diagram(branches, size=480):
    """Action against theta for each branch, one polyline per branch."""
    data = [(b.thetas, b.actions) for b in branches if len(b.samples) > 1]
    if not data:
        return '<svg xmlns="http://www.w3.org/2000/svg" width="10" height="10"></svg>\n'
    th = np.concatenate([d[0] for d in data])
    ac = np.concatenate([d[1] for d in data])
    frame = _Frame(th + 1j * ac, size)
    lw = _fmt(size / 300)
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(frame.width)}" '
             f'height="{_fmt(frame.height)}">']
    palette = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"]
    for i, (t, a) in enumerate(data):
        parts.append(f'<path class="branch" d="{_path(frame, t + 1j * a, closed=False)}" '
                     f'fill="none" stroke="{palette[i % len(palette)]}" stroke-width="{lw}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
