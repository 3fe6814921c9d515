"""Plain SVG figures of domains and trajectory graphs.

Output is byte-stable for fixed input; the only line that may change
between releases is the version comment right after the XML header.
"""

import numpy as np

from . import __version__

PALETTE = {"boundary": "#222222", "+": "#1f5fbf", "-": "#c4452b", "zero": "#000000"}


def _fmt(x):
    return f"{x:.6g}"


class Canvas:
    def __init__(self, points, size=480, pad=0.06):
        p = np.concatenate([np.ravel(np.asarray(q, dtype=complex)) for q in points])
        x0, x1, y0, y1 = p.real.min(), p.real.max(), p.imag.min(), p.imag.max()
        span = max(x1 - x0, y1 - y0) or 1.0
        self.x0 = x0 - pad * span
        self.y1 = y1 + pad * span
        self.scale = size / (span * (1 + 2 * pad))
        self.size = size
        self.items = []

    def xy(self, z):
        return (z.real - self.x0) * self.scale, (self.y1 - z.imag) * self.scale

    def polyline(self, z, cls, color, width=1.5, dash=None, closed=False):
        pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in zip(*self.xy(np.asarray(z))))
        tag = "polygon" if closed else "polyline"
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.items.append(f'<{tag} class="{cls}" points="{pts}" fill="none" stroke="{color}" '
                          f'stroke-width="{width}"{extra}/>')

    def dot(self, z, cls, color, r=3.0):
        x, y = self.xy(complex(z))
        self.items.append(f'<circle class="{cls}" cx="{_fmt(x)}" cy="{_fmt(y)}" r="{r}" fill="{color}"/>')

    def render(self):
        head = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f"<!-- extremal-domains {__version__} -->",
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.size}" height="{self.size}" '
            f'viewBox="0 0 {self.size} {self.size}">',
        ]
        return "\n".join(head + self.items + ["</svg>"]) + "\n"


def domain_svg(domain, n=512):
    t = 2 * np.pi * np.arange(n) / n
    curves = [c.evaluate(t) for c in domain.curves]
    cv = Canvas(curves)
    for z in curves:
        cv.polyline(z, "boundary", PALETTE["boundary"], closed=True)
    return cv


def stokes_svg(domain, graph, n=512):
    """Boundary, Sigma+ arcs solid, Sigma- arcs dashed, zeros as dots."""
    cv = domain_svg(domain, n)
    for arc in graph.arcs:
        if arc.family == "+":
            cv.polyline(arc.points, "sigma-plus", PALETTE["+"])
        else:
            cv.polyline(arc.points, "sigma-minus", PALETTE["-"], dash="5,3")
    for loop in graph.loops:
        cv.polyline(loop.points, "sigma-plus loop", PALETTE["+"])
    for zr in graph.zeros:
        cv.dot(zr.z, "zero", PALETTE["zero"])
    return cv.render()
