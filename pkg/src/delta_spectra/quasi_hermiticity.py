"""A coupling-space neighbourhood free of spectral singularities and bound states.

Write ``zf_+- = r_+- + i s_+-``.  For ``s_+- = 0`` and ``r_+- > 0`` the function
``G(K) = F(K) / K`` has no zero on the half-disc ``D`` of radius
``sqrt(8) r_max``, so ``|G_r|`` has a positive minimum ``m_r`` on its boundary.
Turning on small imaginary parts changes ``G`` by ``J = G_z - G_r`` with
``|J| <= 2 (3 r_max + 1) s_max``; hence ``|s_+-| < B_r = m_r / (2 (3 r_max + 1))``
keeps ``G`` zero-free on ``D`` and the Hamiltonian has a real spectrum free
of singularities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.optimize import minimize_scalar

from .core_model import ScaledCoupling
from .errors import InvalidInputError
from .zero_locator import eval_F

__all__ = [
    "eval_L",
    "eval_G",
    "eval_J",
    "j_closed_form",
    "HalfDiscSpec",
    "BoundaryMinimum",
    "QuasiBound",
    "compute_bound",
    "Lemma1Report",
    "Lemma2Report",
    "verify_lemma1",
    "verify_lemma2",
]

_SERIES_RADIUS = 1e-4


def eval_L(kappa):
    """``L(K) = (1 - exp(2K)) / K`` with ``L(0) = -2``; scalar or array."""
    k = np.asarray(kappa, dtype=complex)
    small = np.abs(k) < _SERIES_RADIUS
    safe = np.where(small, 1.0, k)
    direct = -np.expm1(2 * safe) / safe
    series = -2 - 2 * k - (4 / 3) * k**2 - (2 / 3) * k**3 - (4 / 15) * k**4
    out = np.where(small, series, direct)
    return out if out.ndim else complex(out)


def eval_G(zf: ScaledCoupling, kappa):
    """``G(K) = F(K) / K`` continued to ``G(0) = F'(0)``.

    Evaluated as ``K - (zf_- + zf_+) + zf_- zf_+ L(K)``, which is entire term
    by term and so needs no special case at the origin.
    """
    k = np.asarray(kappa, dtype=complex)
    out = k - (zf.zf_minus + zf.zf_plus) + zf.product * eval_L(k)
    return out if np.ndim(out) else complex(out)


def _split(zf: ScaledCoupling):
    return zf.zf_minus.real, zf.zf_plus.real, zf.zf_minus.imag, zf.zf_plus.imag


def j_closed_form(zf: ScaledCoupling, kappa):
    """``J = -i (s_- + s_+) + [-s_- s_+ + i (r_- s_+ + r_+ s_-)] L(K)``."""
    rm, rp, sm, sp = _split(zf)
    out = -1j * (sm + sp) + (-sm * sp + 1j * (rm * sp + rp * sm)) * np.asarray(eval_L(kappa))
    return out if np.ndim(out) else complex(out)


def eval_J(zf: ScaledCoupling, kappa, rtol: float = 1e-10):
    """``J = G_z - G_r``, the change in ``G`` caused by the imaginary parts of the couplings.

    The difference is checked against :func:`j_closed_form`; a mismatch
    beyond ``rtol`` (relative to the size of ``G``) raises ``ArithmeticError``.
    ``K = 0`` is handled through ``L(0) = -2``.
    """
    rm, rp, _, _ = _split(zf)
    g_z = np.asarray(eval_G(zf, kappa))
    g_r = np.asarray(eval_G(ScaledCoupling(rm, rp), kappa))
    diff = g_z - g_r
    closed = np.asarray(j_closed_form(zf, kappa))
    size = np.maximum(1.0, np.maximum(np.abs(g_z), np.abs(g_r)))
    if np.any(np.abs(diff - closed) > rtol * size):
        raise ArithmeticError("G_z - G_r disagrees with the closed form of J")
    return diff if diff.ndim else complex(diff)


Preset = Literal["theorem", "fig10"]
_PRESET_FACTOR = {"theorem": math.sqrt(8.0), "fig10": 2.0}


@dataclass(frozen=True)
class HalfDiscSpec:
    """Left half-disc ``|K| <= radius, Re K <= 0`` and its boundary curve.

    ``preset="theorem"`` uses ``radius = sqrt(8) r_max`` (the disc on which
    ``G_r`` is proven zero-free); ``preset="fig10"`` uses ``2 r_max``, the
    radius that reproduces the published minimum for ``r_+- = 1``.
    """

    r_max: float
    preset: Preset = "theorem"

    def __post_init__(self):
        if not self.r_max > 0:
            raise InvalidInputError("r_max must be positive")
        if self.preset not in _PRESET_FACTOR:
            raise InvalidInputError(f"unknown preset {self.preset!r}")

    @property
    def radius(self) -> float:
        return _PRESET_FACTOR[self.preset] * self.r_max

    def gamma(self, t):
        """Boundary point for ``t in [-1, 1]``: the imaginary segment for ``t < 0``, the arc for ``t > 0``."""
        t = np.asarray(t, dtype=float)
        step_neg = np.where(t < 0, 1.0, np.where(t == 0, 0.5, 0.0))
        out = 1j * self.radius * ((2 * t + 1) * step_neg + np.exp(1j * np.pi * t) * (1 - step_neg))
        return out if out.ndim else complex(out)


@dataclass(frozen=True)
class BoundaryMinimum:
    t: float
    kappa: complex
    value: float


@dataclass(frozen=True)
class QuasiBound:
    r_minus: float
    r_plus: float
    m_r: float
    kappa_min: complex
    B_r: float
    t_min: float
    minima: tuple[BoundaryMinimum, ...]
    spec: HalfDiscSpec
    t_grid: np.ndarray = field(repr=False, compare=False)
    g_abs: np.ndarray = field(repr=False, compare=False)
    l_abs: np.ndarray = field(repr=False, compare=False)


def compute_bound(r_minus: float, r_plus: float, n_boundary: int = 4096, preset: Preset = "theorem",
                  tie_rtol: float = 1e-6) -> QuasiBound:
    """Minimum ``m_r`` of ``|G_r|`` over the half-disc boundary and ``B_r``.

    The boundary is scanned at ``n_boundary`` uniform values of ``t``; every
    local minimum of the samples is refined by golden-section search.
    ``minima`` lists all basins whose refined value is within ``tie_rtol`` of
    the global minimum (two conjugate ones when ``r_- = r_+``).
    """
    if not (r_minus > 0 and r_plus > 0):
        raise InvalidInputError("compute_bound requires r_- > 0 and r_+ > 0")
    if n_boundary < 8:
        raise InvalidInputError("n_boundary must be at least 8")
    spec = HalfDiscSpec(max(r_minus, r_plus), preset)
    zr = ScaledCoupling(r_minus, r_plus)
    objective = lambda t: float(abs(eval_G(zr, spec.gamma(t))))

    t = np.linspace(-1.0, 1.0, n_boundary)
    kap = spec.gamma(t)
    g = np.abs(eval_G(zr, kap))
    ell = np.abs(eval_L(kap))

    idx = [i for i in range(n_boundary)
           if (i == 0 or g[i] <= g[i - 1]) and (i == n_boundary - 1 or g[i] <= g[i + 1])]
    found = []
    for i in idx:
        lo, hi = t[max(i - 1, 0)], t[min(i + 1, n_boundary - 1)]
        if 0 < i < n_boundary - 1 and g[i] < g[i - 1] and g[i] < g[i + 1]:
            res = minimize_scalar(objective, bracket=(lo, t[i], hi), method="golden", tol=1e-12)
        else:
            res = minimize_scalar(objective, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
        tm = float(np.clip(res.x, -1.0, 1.0))
        found.append(BoundaryMinimum(tm, complex(spec.gamma(tm)), objective(tm)))
    m_r = min(b.value for b in found)
    minima = tuple(sorted((b for b in found if b.value <= m_r * (1 + tie_rtol)), key=lambda b: b.t))
    best = min(found, key=lambda b: b.value)
    r_max = spec.r_max
    return QuasiBound(r_minus, r_plus, m_r, best.kappa, m_r / (2 * (3 * r_max + 1)), best.t, minima,
                      spec, t, g, ell)


@dataclass(frozen=True)
class Lemma1Report:
    rho: float
    n_samples: int
    max_value: float
    argmax: complex
    nearest_to_origin: complex
    boundary_max: float
    passed: bool


def verify_lemma1(rho: float, n_samples: int = 100_000, tol: float = 1e-9) -> Lemma1Report:
    """Sample ``|L|`` over the left half-disc of radius ``rho`` and its boundary.

    Passes when the maximum is ``<= 2 + tol`` and sits at the sample nearest
    the origin; ``boundary_max`` is the maximum over boundary samples alone.
    """
    if not rho > 0:
        raise InvalidInputError("rho must be positive")
    n_b = max(64, n_samples // 10)
    n_fill = max(1, n_samples - n_b)
    n_r = max(2, int(math.sqrt(n_fill / 2)))
    n_phi = max(2, -(-n_fill // n_r))
    # area-uniform radii so the fill is not crowded at the centre
    r = rho * np.sqrt(np.linspace(0.0, 1.0, n_r))
    phi = np.linspace(np.pi / 2, 3 * np.pi / 2, n_phi)
    fill = (r[:, None] * np.exp(1j * phi[None, :])).ravel()[:n_fill]
    boundary = np.concatenate([1j * rho * np.linspace(-1.0, 1.0, n_b // 2),
                               rho * np.exp(1j * np.linspace(np.pi / 2, 3 * np.pi / 2, n_b - n_b // 2))])
    pts = np.concatenate([fill, boundary])
    vals = np.abs(eval_L(pts))
    i = int(np.argmax(vals))
    nearest = pts[int(np.argmin(np.abs(pts)))]
    passed = bool(vals[i] <= 2 + tol and abs(pts[i] - nearest) <= 1e-15 and abs(vals[i] - 2) <= tol)
    return Lemma1Report(rho, int(pts.size), float(vals[i]), complex(pts[i]), complex(nearest),
                        float(np.abs(eval_L(boundary)).max()), passed)


@dataclass(frozen=True)
class Lemma2Report:
    F0: complex
    dF0: complex
    passed: bool


def verify_lemma2(r_minus: float, r_plus: float, s_minus: float, s_plus: float,
                  tol: float = 1e-12) -> Lemma2Report:
    """Check that ``K = 0`` is a simple zero of ``F`` when ``r_+- > 0``."""
    if not (r_minus > 0 and r_plus > 0):
        raise InvalidInputError("the simple-zero statement needs r_- > 0 and r_+ > 0")
    zf = ScaledCoupling(complex(r_minus, s_minus), complex(r_plus, s_plus))
    f0, d0 = eval_F(zf, 0.0), eval_F(zf, 0.0, 1)
    return Lemma2Report(f0, d0, bool(abs(f0) <= tol and abs(d0) > tol))
