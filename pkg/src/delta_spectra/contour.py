"""Closed contours and argument-principle quadrature.

A contour is a list of parameterised pieces (line segments and circular
arcs), each mapping ``s in [0, 1]`` to the complex plane.  The winding
integral ``(1/2 pi i) oint h'/h`` is computed with panel-adaptive
Gauss-Legendre quadrature: a panel is accepted when its ``n``-point rule
agrees with the rule applied to its two halves, otherwise it is split.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ContourDegenerateError, ResolutionError

__all__ = ["Line", "Arc", "rectangle", "circle", "annular_sector", "graded", "argument_integral", "phase_winding"]


@dataclass(frozen=True)
class Line:
    start: complex
    end: complex

    def __call__(self, s):
        return self.start + (self.end - self.start) * s, np.full_like(s, self.end - self.start, dtype=complex)

    @property
    def length(self) -> float:
        return abs(self.end - self.start)


@dataclass(frozen=True)
class Arc:
    center: complex
    radius: float
    phi0: float
    phi1: float

    def __call__(self, s):
        phi = self.phi0 + (self.phi1 - self.phi0) * s
        e = np.exp(1j * phi)
        return self.center + self.radius * e, 1j * (self.phi1 - self.phi0) * self.radius * e

    @property
    def length(self) -> float:
        return abs(self.phi1 - self.phi0) * self.radius


def rectangle(x0: float, x1: float, y0: float, y1: float) -> list:
    """Counterclockwise boundary of ``[x0, x1] x [y0, y1]``."""
    c = [complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)]
    return [Line(c[i], c[(i + 1) % 4]) for i in range(4)]


def circle(center: complex, radius: float) -> list:
    return [Arc(center, radius, 0.0, np.pi), Arc(center, radius, np.pi, 2 * np.pi)]


def annular_sector(r_inner: float, r_outer: float, phi0: float, phi1: float) -> list:
    """Boundary of ``{r e^{i phi}: r_inner <= r <= r_outer, phi0 <= phi <= phi1}``, counterclockwise."""
    return [
        Arc(0j, r_outer, phi0, phi1),
        Line(r_outer * np.exp(1j * phi1), r_inner * np.exp(1j * phi1)),
        Arc(0j, r_inner, phi1, phi0),
        Line(r_inner * np.exp(1j * phi0), r_outer * np.exp(1j * phi0)),
    ]


def graded(pieces: Sequence, center: complex = 0j) -> list:
    """Split lines that run close to ``center`` into geometrically growing segments.

    On a long line ending near ``center`` the node positions carry absolute
    errors of order ``eps * length``, which swamp ``1 / (w - center)``-type
    integrands; short segments near the close end keep them relative.
    """
    out = []
    for p in pieces:
        if not isinstance(p, Line) or p.length == 0:
            out.append(p)
            continue
        d0, d1 = abs(p.start - center), abs(p.end - center)
        near = min(d0, d1)
        if near == 0 or p.length < 4 * near:
            out.append(p)
            continue
        u = (p.end - p.start) / p.length
        # breakpoints measured from each end: near, 2 near, 4 near, ... up to the midpoint
        cuts = {0.0, p.length}
        for base, sign, anchor in ((d0, 1, 0.0), (d1, -1, p.length)):
            step = max(base, near)
            while step < p.length / 2:
                cuts.add(anchor + sign * step)
                step *= 2
        cuts = sorted(cuts)
        pts = [p.start + u * c if c <= p.length / 2 else p.end - u * (p.length - c) for c in cuts]
        pts[0], pts[-1] = p.start, p.end
        out.extend(Line(pts[i], pts[i + 1]) for i in range(len(pts) - 1))
    return out


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss_legendre(n: int):
    if n not in _GL_CACHE:
        x, w = np.polynomial.legendre.leggauss(n)
        _GL_CACHE[n] = (0.5 * (x + 1.0), 0.5 * w)
    return _GL_CACHE[n]


def argument_integral(
    h: Callable,
    dh: Callable,
    pieces: Sequence,
    n_nodes: int = 10,
    tol: float = 1e-4,
    zero_tol: float = 1e-12,
    scale: float = 1.0,
    max_levels: int = 48,
    moments: int = 0,
) -> np.ndarray:
    """``(1/2 pi i) oint w^j h'(w)/h(w) dw`` for ``j = 0..moments``.

    ``tol`` bounds the total error of the ``j = 0`` value, in units of whole
    windings.  Half of it is shared equally between the pieces and half by
    length, so a tiny inner arc still gets a usable share.  Raises
    :class:`ContourDegenerateError` when ``|h| < zero_tol * scale`` at a node,
    :class:`ResolutionError` when panels stop converging.
    """
    x, w = _gauss_legendre(n_nodes)
    total_len = sum(p.length for p in pieces)
    if total_len == 0:
        raise ContourDegenerateError("contour has zero length")
    n_pieces = len(pieces)
    result = np.zeros(moments + 1, dtype=complex)

    for piece in pieces:
        budget = tol * 2 * np.pi * (0.5 / n_pieces + 0.5 * piece.length / total_len)
        n0 = max(2, int(np.ceil(piece.length / 0.25)))
        lo = np.linspace(0.0, 1.0, n0 + 1)
        a, b = lo[:-1], lo[1:]
        for _ in range(max_levels):
            if a.size == 0:
                break
            mid = 0.5 * (a + b)
            width = b - a
            # nodes for the whole panel and both halves
            s_whole = a[:, None] + width[:, None] * x[None, :]
            s_left = a[:, None] + 0.5 * width[:, None] * x[None, :]
            s_right = mid[:, None] + 0.5 * width[:, None] * x[None, :]
            s_all = np.concatenate([s_whole, s_left, s_right], axis=1)
            z, dz = piece(s_all)
            hv = h(z)
            if np.any(np.abs(hv) < zero_tol * scale) or not np.all(np.isfinite(hv)):
                raise ContourDegenerateError(
                    f"integrand denominator vanishes near {z.flat[np.argmin(np.abs(hv))]:.6g}")
            integrand = dh(z) / hv * dz
            nn = n_nodes
            powers = [np.ones_like(z)]
            for _j in range(moments):
                powers.append(powers[-1] * z)
            whole0 = (integrand[:, :nn] * w).sum(axis=1) * width
            halves0 = ((integrand[:, nn:2 * nn] * w).sum(axis=1) + (integrand[:, 2 * nn:] * w).sum(axis=1)) * 0.5 * width
            err = np.abs(whole0 - halves0)
            # rounding floor for panels whose integrand is dominated by cancellation noise
            mag = ((np.abs(integrand[:, nn:2 * nn]) * w).sum(axis=1)
                   + (np.abs(integrand[:, 2 * nn:]) * w).sum(axis=1)) * 0.5 * width
            ok = (err <= budget * width + 1e-15) | (err <= 1e-13 * mag)
            for j in range(moments + 1):
                term = integrand * powers[j]
                halves = ((term[:, nn:2 * nn] * w).sum(axis=1) + (term[:, 2 * nn:] * w).sum(axis=1)) * 0.5 * width
                result[j] += halves[ok].sum()
            bad = ~ok
            if not bad.any():
                a = a[:0]
                break
            if np.min(width[bad]) < 1e-14:
                raise ContourDegenerateError("panel collapsed: integrand singular on the contour")
            a, b = np.concatenate([a[bad], mid[bad]]), np.concatenate([mid[bad], b[bad]])
        if a.size:
            raise ResolutionError("adaptive quadrature did not converge")
    return result / (2j * np.pi)


def phase_winding(h: Callable, pieces: Sequence, n_per_unit: int = 200, max_step_angle: float = 0.5,
                  max_refine: int = 30) -> float:
    """Winding number of ``h`` along the contour by phase unwrapping.

    Independent of :func:`argument_integral` (no derivative needed); used as a
    cross-check.  Samples are refined until successive phase increments stay
    below ``max_step_angle``.
    """
    total = 0.0
    for piece in pieces:
        n = max(16, int(piece.length * n_per_unit))
        s = np.linspace(0.0, 1.0, n + 1)
        for _ in range(max_refine):
            z, _dz = piece(s)
            ph = np.angle(h(z))
            d = np.angle(np.exp(1j * np.diff(ph)))
            big = np.abs(d) > max_step_angle
            if not big.any():
                break
            s = np.sort(np.concatenate([s, 0.5 * (s[:-1] + s[1:])[big]]))
        total += d.sum()
    return total / (2 * np.pi)
