"""Overlap matrix K between eigenfunctions of H and of its adjoint.

``K`` multiplies ``delta(k - q)`` in the inner products of the scattering
eigenfunctions; a biorthonormal partner basis exists exactly where ``K`` is
invertible, so the nonzero real zeros of ``det K`` are the spectral
singularities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .core_model import CouplingConfig, w_coefficients
from .errors import InvalidInputError
from .transfer import f_factor, f_plus

__all__ = [
    "OverlapMatrix",
    "overlap_matrix",
    "det_k",
    "det_k_expanded",
    "det_k_pt",
    "f_pt",
    "real_zeros_det_k",
]


@dataclass(frozen=True)
class OverlapMatrix:
    k11: complex
    k12: complex
    k21: complex
    k22: complex
    k: float

    @property
    def det(self):
        return self.k11 * self.k22 - self.k12 * self.k21

    def as_array(self) -> np.ndarray:
        return np.array([[self.k11, self.k12], [self.k21, self.k22]])


def _positive_k(k):
    karr = np.asarray(k, dtype=float)
    if np.any(~(karr > 0)):
        raise InvalidInputError("K is defined for real k > 0")
    return karr if karr.ndim else float(karr)


def overlap_matrix(cc: CouplingConfig, k) -> OverlapMatrix:
    k = _positive_k(k)
    wm, wp = w_coefficients(cc, k)
    e2 = np.exp(2j * cc.a * k)
    e2i = np.conj(e2)
    k11 = 1 - wm * wm - wp * wp
    k12 = wm * (1 - wm) * e2 - wp * (1 + wp) * e2i
    k21 = -wm * (1 + wm) * e2i + wp * (1 - wp) * e2
    return OverlapMatrix(k11, k12, k21, k11, k)


def det_k(cc: CouplingConfig, k):
    """``det K = f_-(k) f_+(k)``; zero iff ``M22(k) = 0`` or ``M22(-k) = 0``."""
    k = _positive_k(k)
    return f_factor(cc, k) * f_plus(cc, k)


def det_k_expanded(cc: CouplingConfig, k):
    """Trigonometric long form of ``det K``.

    Kept as an independent cross-check of :func:`det_k`; it loses accuracy
    through cancellation once ``|z| / k`` is large.
    """
    k = _positive_k(k)
    zm, zp, a = cc.z_minus, cc.z_plus, cc.a
    k2 = k * k
    prod = zm * zp
    bracket = (1 - prod / (4 * k2)) * np.cos(4 * a * k) + (zm + zp) / (2 * k) * np.sin(4 * a * k)
    return 1 + (zm**2 + zp**2) / (4 * k2) + prod**2 / (8 * k2 * k2) + prod / (2 * k2) * bracket


def f_pt(z: complex, a: float, k):
    """``f`` on the PT-symmetric plane ``z_+ = conj(z_-) = z``."""
    k = _positive_k(k)
    z = complex(z)
    return abs(z) ** 2 * np.sin(2 * a * k) / (2 * k * k) + np.exp(-2j * a * k) * (z.real / k - 1j)


def det_k_pt(z: complex, a: float, k):
    """``det K = |f(z, a, k)|^2`` for PT-symmetric couplings, built from its real and imaginary parts."""
    k = _positive_k(k)
    z = complex(z)
    s, c = np.sin(2 * a * k), np.cos(2 * a * k)
    re = (abs(z) ** 2 / (2 * k * k) - 1) * s + z.real / k * c
    im = -(c + z.real / k * s)
    return re * re + im * im


def real_zeros_det_k(cc: CouplingConfig, k_max: float, n_grid: int = 20001, atol: float = 1e-9,
                     k_min: float = 1e-6) -> list[float]:
    """Nonzero real zeros of ``det K`` on ``(k_min, k_max]`` by grid bracketing.

    ``|det K|`` is scanned on a uniform grid; every local minimum is refined by
    a bounded scalar minimisation of ``|det K|``, polished by Newton steps on
    the vanishing factor ``f(k)`` or ``f_+(k)``, and kept when the refined
    value is below ``atol``.  Sign changes cannot be used directly because
    ``det K`` is complex in general and touches zero without crossing it on
    the PT plane.
    """
    grid = np.linspace(k_min, k_max, n_grid)
    vals = np.abs(det_k(cc, grid))
    idx = np.flatnonzero((vals[1:-1] <= vals[:-2]) & (vals[1:-1] <= vals[2:])) + 1
    if vals[-1] < vals[-2]:
        idx = np.append(idx, n_grid - 1)
    zeros: list[float] = []
    for i in idx:
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, n_grid - 1)]
        res = minimize_scalar(lambda x: abs(det_k(cc, x)), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-14})
        x = _polish(cc, float(res.x))
        if lo - 1e-9 <= x <= hi + 1e-9 and abs(det_k(cc, x)) < atol and not any(abs(x - z) < 1e-7 for z in zeros):
            zeros.append(x)
    return zeros


def _polish(cc: CouplingConfig, x: float, steps: int = 6) -> float:
    # Newton on the smaller factor; the zero is real so the real part is kept
    fac = f_factor if abs(f_factor(cc, x)) <= abs(f_plus(cc, x)) else f_plus
    for _ in range(steps):
        h = 1e-6 * max(1.0, x)
        d = (fac(cc, x + h) - fac(cc, x - h)) / (2 * h)
        if d == 0:
            break
        xn = x - (fac(cc, x) / d).real
        if not xn > 0 or abs(fac(cc, xn)) >= abs(fac(cc, x)):
            break
        x = xn
    return float(x)
