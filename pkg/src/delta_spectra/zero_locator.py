"""Bound states and spectral singularities as zeros of an entire function.

With ``K = 2iak`` and scaled couplings ``zf = a z`` the condition
``M22(k) = 0`` becomes ``F(K) = (K - zf_-)(K - zf_+) - zf_- zf_+ exp(2K) = 0``.
Zeros on the imaginary axis (``K != 0``) are spectral singularities, zeros
with ``Re K < 0`` are bound states with energy ``E = -K^2 / (4a^2)``.  Every
such zero lies in the half-disc of radius ``sigma = 2 max |zf_+-|``.
"""

from __future__ import annotations

import cmath
import logging
import math
import warnings
from dataclasses import dataclass, replace
from typing import Literal

import numpy as np
from scipy.optimize import brentq

from . import contour as _c
from .core_model import ScaledCoupling
from .errors import ContourDegenerateError, ResolutionError, UnsupportedConfigurationError

__all__ = [
    "CharacteristicFn",
    "ContourSpec",
    "ZeroRecord",
    "SearchRegion",
    "MultiplicityReport",
    "UnrefinedZero",
    "eval_F",
    "winding_count",
    "winding_value",
    "n_plus",
    "n_minus",
    "n_total",
    "N_sector",
    "N_total",
    "locate_zeros",
    "region_bound",
    "multiplicity_analysis",
    "real_bound_states",
    "rbs_candidate",
    "real_bound_state_curves",
    "sector_count",
]

log = logging.getLogger(__name__)

Kind = Literal["spectral-singularity", "bound-state", "real-bound-state"]


def eval_F(zf: ScaledCoupling, kappa, order: int = 0):
    """``F`` or one of its first three derivatives at ``kappa`` (scalar or array)."""
    a, b = zf.zf_minus, zf.zf_plus
    kappa = np.asarray(kappa, dtype=complex)
    ab = a * b
    if order == 0:
        # expm1 keeps the simple zero at the origin accurate for large couplings
        return _squeeze(kappa * (kappa - a - b) - ab * np.expm1(2 * kappa))
    e = np.exp(2 * kappa)
    if order == 1:
        out = 2 * kappa - a - b - 2 * ab * e
    elif order == 2:
        out = 2 - 4 * ab * e
    elif order == 3:
        out = -8 * ab * e
    else:
        raise ValueError("order must be 0, 1, 2 or 3")
    return _squeeze(out)


def _squeeze(out):
    return out if out.ndim else complex(out)


@dataclass(frozen=True)
class CharacteristicFn:
    """Callable wrapper around :func:`eval_F` for fixed couplings."""

    zf: ScaledCoupling

    def __call__(self, kappa, order: int = 0):
        return eval_F(self.zf, kappa, order)

    def derivative(self, kappa):
        return eval_F(self.zf, kappa, 1)

    @property
    def scale(self) -> float:
        """Typical modulus of ``F`` over the search region; used for relative thresholds."""
        return max(1.0, self.zf.sigma**2, abs(self.zf.product))


@dataclass(frozen=True)
class ContourSpec:
    """One of the counting contours.

    ``rectangle-plus`` / ``rectangle-minus`` are the width-``epsilon``
    rectangles straddling the imaginary axis from ``i epsilon`` to ``i rho``
    (resp. ``-i epsilon`` to ``-i rho``).  ``annular-sector`` is the region
    ``epsilon <= |K| <= rho`` with ``pi/2 + angle_epsilon <= arg K <= pi/2 + theta``,
    so ``theta = pi - epsilon`` covers the open left half-plane.
    """

    shape: Literal["rectangle-plus", "rectangle-minus", "annular-sector"]
    rho: float
    theta: float | None = None
    epsilon: float = 1e-3
    angle_epsilon: float | None = None
    n_base_points: int = 10

    _ALIASES = {"rectangle-right": "rectangle-plus", "rectangle-left": "rectangle-minus"}

    def __post_init__(self):
        object.__setattr__(self, "shape", self._ALIASES.get(self.shape, self.shape))
        if self.shape not in ("rectangle-plus", "rectangle-minus", "annular-sector"):
            raise ValueError(f"unknown contour shape {self.shape!r}")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.rho < self.epsilon:
            raise ValueError("rho must be at least epsilon")
        if self.shape == "annular-sector":
            if self.theta is None:
                raise ValueError("annular-sector needs theta")
            if not (self.start_angle_offset < self.theta < math.pi):
                raise ValueError("theta must lie in (angle_epsilon, pi)")

    @property
    def start_angle_offset(self) -> float:
        return self.epsilon if self.angle_epsilon is None else self.angle_epsilon

    def pieces(self):
        eps, rho = self.epsilon, self.rho
        if self.shape == "rectangle-plus":
            return _c.graded(_c.rectangle(-eps / 2, eps / 2, eps, rho))
        if self.shape == "rectangle-minus":
            return _c.graded(_c.rectangle(-eps / 2, eps / 2, -rho, -eps))
        phi0 = math.pi / 2 + self.start_angle_offset
        return _c.graded(_c.annular_sector(eps, rho, phi0, math.pi / 2 + self.theta))

    def contains(self, kappa: complex) -> bool:
        eps, rho = self.epsilon, self.rho
        if self.shape == "rectangle-plus":
            return abs(kappa.real) < eps / 2 and eps < kappa.imag < rho
        if self.shape == "rectangle-minus":
            return abs(kappa.real) < eps / 2 and -rho < kappa.imag < -eps
        r = abs(kappa)
        if not (eps < r < rho):
            return False
        phi = math.atan2(kappa.imag, kappa.real) % (2 * math.pi)
        return math.pi / 2 + self.start_angle_offset < phi < math.pi / 2 + self.theta


def winding_value(zf: ScaledCoupling, pieces, n_nodes: int = 10, tol: float = 1e-4,
                  zero_tol: float = 1e-12, moments: int = 0):
    F = CharacteristicFn(zf)
    return _c.argument_integral(lambda k: eval_F(zf, k), F.derivative, pieces, n_nodes=n_nodes,
                                tol=tol, zero_tol=zero_tol, scale=F.scale, moments=moments)


def _nearest_integer(value: complex, what: str) -> int:
    n = round(value.real)
    if abs(value - n) > 0.05:
        raise ResolutionError(f"{what}: winding integral {value:.6g} is not within 0.05 of an integer")
    return int(n)


def winding_count(zf: ScaledCoupling, contour: ContourSpec | list, tol: float = 1e-4,
                  zero_tol: float = 1e-12) -> int:
    """Number of zeros of ``F`` (with multiplicity) enclosed by the contour.

    ``contour`` is a :class:`ContourSpec` or a list of pieces from
    :mod:`delta_spectra.contour`.
    """
    if isinstance(contour, ContourSpec):
        pieces, n_nodes = contour.pieces(), contour.n_base_points
    else:
        pieces, n_nodes = contour, 10
    val = winding_value(zf, pieces, n_nodes=n_nodes, tol=tol, zero_tol=zero_tol)[0]
    return _nearest_integer(val, "winding_count")


def _sigma_or_none(zf: ScaledCoupling, rho):
    return zf.sigma if rho is None else rho


def n_plus(zf: ScaledCoupling, rho: float | None = None, epsilon: float = 1e-3) -> int:
    rho = _sigma_or_none(zf, rho)
    if rho <= epsilon:
        return 0
    return winding_count(zf, ContourSpec("rectangle-plus", rho, epsilon=epsilon))


def n_minus(zf: ScaledCoupling, rho: float | None = None, epsilon: float = 1e-3) -> int:
    rho = _sigma_or_none(zf, rho)
    if rho <= epsilon:
        return 0
    return winding_count(zf, ContourSpec("rectangle-minus", rho, epsilon=epsilon))


def n_total(zf: ScaledCoupling, rho_minus: float | None = None, rho_plus: float | None = None,
            epsilon: float = 1e-3) -> int:
    """``n(rho_-, rho_+) = n_-(rho_-) + n_+(rho_+)``: zeros on the imaginary axis.

    A singularity for which both ``K`` and ``-K`` are zeros is counted twice.
    """
    return n_minus(zf, rho_minus, epsilon) + n_plus(zf, rho_plus, epsilon)


def N_sector(zf: ScaledCoupling, rho: float, theta: float, epsilon: float = 1e-3,
             angle_epsilon: float | None = None) -> int:
    """``N(rho, theta)``: zeros in the annular sector opening ``theta`` from the positive imaginary axis."""
    if rho <= epsilon:
        return 0
    return winding_count(zf, ContourSpec("annular-sector", rho, theta, epsilon, angle_epsilon))


def N_total(zf: ScaledCoupling, epsilon: float = 1e-3, angle_epsilon: float | None = None,
            pad: float = 1.01) -> int:
    """Total bound-state count ``N(sigma, pi - eps)``; ``sigma`` padded by ``pad``."""
    ae = epsilon if angle_epsilon is None else angle_epsilon
    return N_sector(zf, pad * zf.sigma, math.pi - ae, epsilon, ae)


# --- zero location ---------------------------------------------------------------------


@dataclass(frozen=True)
class ZeroRecord:
    kappa: complex
    k: complex
    energy: complex
    multiplicity: int
    kind: Kind
    residual: float
    borderline: bool = False
    mirrored: bool = False


@dataclass(frozen=True)
class UnrefinedZero:
    """A cell whose winding count is positive but where refinement failed."""

    cell: tuple[float, float, float, float]
    count: int
    estimate: complex


def _polish(zf: ScaledCoupling, z: complex, order: int, steps: int = 3) -> complex:
    # a few more Newton steps, kept only while |F| keeps dropping
    fz = abs(eval_F(zf, z, order))
    for _ in range(steps):
        d = eval_F(zf, z, order + 1)
        if d == 0:
            break
        znew = z - eval_F(zf, z, order) / d
        fnew = abs(eval_F(zf, znew, order))
        if not fnew < fz:
            break
        z, fz = znew, fnew
    return z


def _newton_refine(zf: ScaledCoupling, z0: complex, scale: float, tol: float, max_iter: int = 60,
                   order: int = 0):
    z = complex(z0)
    for _ in range(max_iter):
        fz = eval_F(zf, z, order)
        if abs(fz) <= tol * scale:
            return _polish(zf, z, order), True
        dfz = eval_F(zf, z, order + 1)
        if abs(dfz) < 1e-10 * scale and order < 2:
            # flat spot: chase the zero of the next derivative instead
            order += 1
            continue
        if dfz == 0:
            break
        step = fz / dfz
        z -= step
        if not cmath.isfinite(z):
            break
        if abs(step) <= 1e-15 * max(1.0, abs(z)):
            return z, abs(eval_F(zf, z, order)) <= tol * scale * 1e3
    return z, False


def _muller(zf: ScaledCoupling, z0: complex, h: float, scale: float, tol: float, max_iter: int = 80):
    f = lambda z: eval_F(zf, z)
    x0, x1, x2 = z0 - h, z0 + h, z0
    f0, f1, f2 = f(x0), f(x1), f(x2)
    for _ in range(max_iter):
        if abs(f2) <= tol * scale:
            return x2, True
        q = (x2 - x1) / (x1 - x0) if x1 != x0 else 0
        A = q * f2 - q * (1 + q) * f1 + q * q * f0
        B = (2 * q + 1) * f2 - (1 + q) ** 2 * f1 + q * q * f0
        C = (1 + q) * f2
        disc = cmath.sqrt(B * B - 4 * A * C)
        den = B + disc if abs(B + disc) >= abs(B - disc) else B - disc
        if den == 0:
            break
        x3 = x2 - (x2 - x1) * 2 * C / den
        x0, x1, x2 = x1, x2, x3
        f0, f1, f2 = f1, f2, f(x3)
    return x2, False


def _classify(kappa: complex, class_tol: float) -> tuple[str | None, bool]:
    re = kappa.real
    borderline = class_tol <= abs(re) <= 10 * class_tol
    if abs(re) < class_tol:
        return "spectral-singularity", borderline
    if re < 0:
        if abs(kappa.imag) < class_tol * max(1.0, abs(kappa)):
            return "real-bound-state", borderline
        return "bound-state", borderline
    return None, borderline


def _make_record(kappa: complex, a: float, mult: int, kind: str, residual: float, borderline=False,
                 mirrored=False) -> ZeroRecord:
    if kind == "spectral-singularity":
        kappa = complex(0.0, kappa.imag)
    elif kind == "real-bound-state":
        kappa = complex(kappa.real, 0.0)
    k = kappa / (2j * a)
    if k.imag < 0 or (k.imag == 0 and k.real < 0):
        k = -k
    return ZeroRecord(kappa=kappa, k=k, energy=-(kappa * kappa) / (4 * a * a), multiplicity=mult,
                      kind=kind, residual=residual, borderline=borderline, mirrored=mirrored)


_SPLIT_FRACTIONS = (0.5 + 0.0127, 0.5 - 0.0391, 0.5 + 0.0733, 0.5 - 0.1119, 0.5 + 0.1513, 0.5 - 0.1931)


def _find_in_box(zf: ScaledCoupling, box, newton_tol: float, min_size: float, quad_tol: float,
                 diagnostics: list | None, max_cells: int = 20000):
    """Recursive bisection of ``box`` driven by winding counts; returns ``[(kappa, mult)]``."""
    F = CharacteristicFn(zf)
    scale = F.scale
    found: list[tuple[complex, int]] = []

    def count(cell, moments=0):
        return winding_value(zf, _c.rectangle(*cell), tol=quad_tol, moments=moments)

    def counted(cell):
        val = count(cell, moments=1)
        n = _nearest_integer(val[0], "cell count")
        return n, val

    try:
        n_root, vals_root = counted(box)
    except (ContourDegenerateError, ResolutionError):
        x0, x1, y0, y1 = box
        box = (x0 * 1.0037, x1 * 1.0041 + 1e-9, y0 * 1.0029, y1 * 1.0043)
        n_root, vals_root = counted(box)

    stack = [(box, n_root, vals_root)]
    cells_seen = 0
    while stack:
        cell, n, vals = stack.pop()
        cells_seen += 1
        if n <= 0:
            continue
        x0, x1, y0, y1 = cell
        w, h = x1 - x0, y1 - y0
        centroid = vals[1] / n
        if n == 1:
            z, ok = _newton_refine(zf, centroid, scale, newton_tol)
            if not ok:
                z, ok = _muller(zf, centroid, 0.1 * max(w, h), scale, newton_tol)
            pad = 1e-9 * max(1.0, abs(z))
            if ok and x0 - pad <= z.real <= x1 + pad and y0 - pad <= z.imag <= y1 + pad:
                found.append((z, 1))
                continue
        elif max(w, h) <= min_size:
            z, ok = _newton_refine(zf, centroid, scale, newton_tol, order=n - 1)
            if ok and abs(eval_F(zf, z)) <= 1e3 * newton_tol * scale:
                found.append((z, n))
                continue
        if max(w, h) <= min_size or cells_seen > max_cells:
            log.warning("unrefined zero cluster of count %d in cell %s", n, cell)
            if diagnostics is not None:
                diagnostics.append(UnrefinedZero(cell, n, centroid))
            continue
        children = None
        for frac in _SPLIT_FRACTIONS:
            if w >= h:
                xm = x0 + frac * w
                halves = [(x0, xm, y0, y1), (xm, x1, y0, y1)]
            else:
                ym = y0 + frac * h
                halves = [(x0, x1, y0, ym), (x0, x1, ym, y1)]
            try:
                res = [counted(c) for c in halves]
            except (ContourDegenerateError, ResolutionError):
                continue
            if res[0][0] + res[1][0] != n or min(res[0][0], res[1][0]) < 0:
                continue
            children = list(zip(halves, res))
            break
        if children is None:
            if diagnostics is not None:
                diagnostics.append(UnrefinedZero(cell, n, centroid))
            log.warning("could not split cell %s with count %d", cell, n)
            continue
        for c, (cn, cv) in children:
            stack.append((c, cn, cv))
    return found


def locate_zeros(zf: ScaledCoupling, a: float = 1.0, *, class_tol: float = 1e-8, newton_tol: float = 1e-12,
                 pad: float = 1.01, include_mirrored: bool = False, quad_tol: float = 1e-4,
                 diagnostics: list | None = None) -> list[ZeroRecord]:
    """Spectral singularities and bound states of the scaled couplings.

    The box ``[-pad sigma, delta] x [-pad sigma, pad sigma]`` (``delta`` a small
    positive margin, so zeros on the imaginary axis are interior) is bisected
    until each cell encloses a single zero, which is then refined by Newton's
    method on ``F`` (Muller as fallback) to ``|F| <= newton_tol * scale``.  A
    cell shrunk below ``1e-7 sigma`` that still holds ``m > 1`` zeros is
    treated as one zero of multiplicity ``m``.  The origin (always a zero)
    and zeros with ``Re K > class_tol`` are discarded.

    When both ``K`` and ``-K`` lie on the imaginary axis they describe the same
    spectral singularity; only the one with ``Im K > 0`` is kept unless
    ``include_mirrored`` is set, in which case the partner is returned with
    ``mirrored=True``.
    """
    sigma = zf.sigma
    if sigma == 0:
        return []
    R = pad * sigma
    delta = max(1e-3, 0.0123 * R)
    box = (-1.00173 * R, delta, -1.00131 * R, 1.00097 * R)
    min_size = 1e-7 * max(1.0, sigma)
    raw = _find_in_box(zf, box, newton_tol, min_size, quad_tol, diagnostics)

    origin_tol = 1e-7 * max(1.0, sigma)
    records: list[ZeroRecord] = []
    for z, mult in raw:
        if abs(z) < origin_tol:
            continue
        if abs(z) > R:
            continue
        kind, borderline = _classify(z, class_tol)
        if kind is None:
            continue
        if borderline:
            warnings.warn(f"zero at K={z:.12g} lies within 10*class_tol of the imaginary axis; "
                          f"classified as {kind}", RuntimeWarning, stacklevel=2)
        rec = _make_record(z, a, mult, kind, 0.0, borderline)
        records.append(replace(rec, residual=abs(eval_F(zf, rec.kappa))))

    # merge duplicates produced by adjacent cells
    merged: list[ZeroRecord] = []
    for r in sorted(records, key=lambda r: (r.kappa.real, r.kappa.imag)):
        if merged and abs(r.kappa - merged[-1].kappa) < 1e-8 * max(1.0, abs(r.kappa)):
            continue
        merged.append(r)

    out: list[ZeroRecord] = []
    ss = [r for r in merged if r.kind == "spectral-singularity"]
    for r in merged:
        if r.kind == "spectral-singularity" and r.kappa.imag < 0:
            partner = any(abs(s.kappa + r.kappa) < 1e-7 * max(1.0, abs(r.kappa)) for s in ss)
            if partner:
                if include_mirrored:
                    out.append(replace(r, mirrored=True))
                continue
        out.append(r)
    return out


# --- region bound ----------------------------------------------------------------------


@dataclass(frozen=True)
class SearchRegion:
    """Discs ``D_+- = {|K - zf_+-| <= |zf_+-|}`` and the half-disc radius ``sigma``.

    :meth:`contains` is the predicate for ``R = (Re K <= 0, K != 0) and (D_+ or D_-)``.
    """

    sigma: float
    center_minus: complex
    radius_minus: float
    center_plus: complex
    radius_plus: float

    def in_discs(self, kappa: complex, slack: float = 0.0) -> bool:
        return (abs(kappa - self.center_minus) <= self.radius_minus + slack
                or abs(kappa - self.center_plus) <= self.radius_plus + slack)

    def in_half_disc(self, kappa: complex, slack: float = 0.0) -> bool:
        return abs(kappa) <= self.sigma + slack and kappa.real <= slack

    def contains(self, kappa: complex, slack: float = 1e-9) -> bool:
        kappa = complex(kappa)
        return kappa != 0 and kappa.real <= slack and self.in_discs(kappa, slack)

    @property
    def is_empty(self) -> bool:
        """True when no point other than the origin can satisfy the predicate.

        A disc ``|K - c| <= |c|`` meets the closed left half-plane away from the
        origin iff ``Re c < 0`` or ``c`` is purely imaginary and nonzero.
        """
        for c in (self.center_minus, self.center_plus):
            if c != 0 and c.real <= 0:
                return False
        return True


def region_bound(zf: ScaledCoupling) -> SearchRegion:
    return SearchRegion(zf.sigma, zf.zf_minus, abs(zf.zf_minus), zf.zf_plus, abs(zf.zf_plus))


# --- multiplicity ----------------------------------------------------------------------


@dataclass(frozen=True)
class MultiplicityReport:
    """Second- and third-order zero analysis.

    ``double_zero_candidates`` holds, for each sign choice, the point
    ``K_2 = (1 + zf_- + zf_+ +- sqrt(1 + (zf_- - zf_+)^2)) / 2`` where
    ``F' = 0`` is compatible with ``F = 0``, the residual of the exponential
    condition that makes it an actual double zero, and whether ``Re K_2 <= 0``.
    """

    double_zero_candidates: tuple
    strict_exclusion: bool  # |1 +- sqrt(...)| > 2|zf_- zf_+| for both signs
    sufficient_exclusion: bool  # |p|(|p| - 1) < |zf_- - zf_+|^2 / 4
    product_at_most_one: bool
    third_order_at_origin: bool
    note: str = ""


def multiplicity_analysis(zf: ScaledCoupling, tol: float = 1e-9) -> MultiplicityReport:
    a, b = zf.zf_minus, zf.zf_plus
    p = a * b
    root = cmath.sqrt(1 + (a - b) ** 2)
    cands = []
    strict = True
    for sgn in (1, -1):
        rhs = 1 + sgn * root
        k2 = 0.5 * (1 + a + b + sgn * root)
        lhs = 2 * p * cmath.exp(1 + a + b + sgn * root)
        residual = abs(lhs - rhs)
        is_double = residual <= tol * max(1.0, abs(rhs))
        cands.append({"sign": sgn, "kappa2": k2, "residual": residual, "is_double_zero": is_double,
                      "admissible": k2.real <= 0})
        if not abs(rhs) > 2 * abs(p):
            strict = False
    sufficient = abs(p) * (abs(p) - 1) < abs(a - b) ** 2 / 4
    third = (abs(eval_F(zf, 0.0, 1)) <= tol and abs(eval_F(zf, 0.0, 2)) <= tol)
    note = ""
    if third:
        note = "K = 0 is a third-order zero; it does not correspond to a spectral singularity or a bound state"
    return MultiplicityReport(tuple(cands), strict, sufficient, abs(p) <= 1, third, note)


# --- real bound states -----------------------------------------------------------------


def rbs_candidate(zf: ScaledCoupling) -> float | None:
    """``K = (|zf_-|^2 Im zf_+ + |zf_+|^2 Im zf_-) / Im(zf_- zf_+)``, or None when ``Im(zf_- zf_+) = 0``."""
    a, b = zf.zf_minus, zf.zf_plus
    den = (a * b).imag
    if den == 0:
        return None
    return (abs(a) ** 2 * b.imag + abs(b) ** 2 * a.imag) / den


def _real_axis_roots(fun, lo: float, hi: float, n: int = 4001) -> list[float]:
    xs = np.linspace(lo, hi, n)
    vals = np.array([fun(x) for x in xs])
    roots = []
    for i in np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0):
        roots.append(brentq(fun, xs[i], xs[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps))
    for i in np.flatnonzero(vals == 0):
        roots.append(float(xs[i]))
    return roots


def real_bound_states(zf: ScaledCoupling, a: float = 1.0, tol: float = 1e-9,
                      im_tol: float = 1e-12) -> list[ZeroRecord]:
    """Bound states with real negative energy, i.e. zeros of ``F`` with ``K < 0`` real.

    For ``Im(zf_- zf_+) != 0`` there is at most one candidate
    (:func:`rbs_candidate`), accepted when negative with ``|F(K)| < tol``.
    Otherwise the product is real: PT-symmetric couplings reduce to
    ``|K - zf_+| = |zf_+| e^K`` (no solution when ``Re zf_+ >= 0``), real
    couplings are scanned along the negative axis, and the remaining cases
    (``zf_- = -conj(zf_+)``, imaginary pairs that are not conjugate) have none.
    """
    zm, zp = zf.zf_minus, zf.zf_plus
    p = zm * zp
    if p == 0:
        raise UnsupportedConfigurationError("single-delta case zf_- zf_+ = 0 is not covered")
    scale = max(1.0, abs(p))
    if abs(p.imag) > im_tol * scale:
        kappa = rbs_candidate(zf)
        if kappa is None or not kappa < 0:
            return []
        res = abs(eval_F(zf, kappa))
        if res < tol:
            return [_make_record(complex(kappa), a, 1, "real-bound-state", res)]
        return []

    lo = -zf.sigma
    real_couplings = abs(zm.imag) <= im_tol * scale and abs(zp.imag) <= im_tol * scale
    pt = abs(zm - zp.conjugate()) <= im_tol * scale
    if pt and not real_couplings:
        if zp.real >= 0:
            return []
        # |K - zf_+| = |zf_+| e^K is equivalent to F(K) = 0 on the real axis
        h = lambda x: abs(x - zp) - abs(zp) * math.exp(x)
        lo = 2 * zp.real
    elif real_couplings:
        h = lambda x: eval_F(zf, x).real
    else:
        return []
    hi = -1e-9 * max(1.0, zf.sigma)
    if lo >= hi:
        return []
    out = []
    for x in _real_axis_roots(h, lo, hi):
        res = abs(eval_F(zf, x))
        if res < tol * max(1.0, scale) and x < 0:
            out.append(_make_record(complex(x), a, 1, "real-bound-state", res))
    return out


def _rbs_residual(r: float, s: float, nu: float):
    """Residual ``Re[(K/zf_+ - 1)(K/zf_- - 1)] - e^{2K}`` on the curve family ``zf_+- = z e^{+-i nu/2}``."""
    z = complex(r, s)
    zm, zp = z * cmath.exp(-0.5j * nu), z * cmath.exp(0.5j * nu)
    den = (zm * zp).imag
    if den == 0:
        return math.nan, math.nan
    kappa = (abs(zm) ** 2 * zp.imag + abs(zp) ** 2 * zm.imag) / den
    val = ((kappa / zp - 1) * (kappa / zm - 1)).real - math.exp(2 * kappa) if kappa < 50 else math.nan
    return val, kappa


def real_bound_state_curves(nu: float, r_range=(-12.0, 0.0), s_range=(-12.0, 12.0), n_grid: int = 241,
                            step: float = 0.02, max_steps: int = 20000, tol: float = 1e-9):
    """Curves in the ``z`` plane on which ``zf_+- = z e^{+-i nu/2}`` has a real bound state.

    Seeds come from sign changes of the residual along grid rows (restricted
    to ``K < 0``); each seed is traced in both directions by tangent
    prediction and Newton correction along the gradient.  Returns a list of
    arrays with columns ``(r, s, K)``; every point satisfies
    ``|F(K)| <= tol * max(1, |zf|^2)``.
    """

    def phi(p):
        return _rbs_residual(p[0], p[1], nu)[0]

    def grad(p, h=1e-7):
        return np.array([(phi(p + (h, 0)) - phi(p - (h, 0))) / (2 * h),
                         (phi(p + (0, h)) - phi(p - (0, h))) / (2 * h)])

    def correct(p):
        for _ in range(30):
            v = phi(p)
            if not math.isfinite(v):
                return None
            g = grad(p)
            gg = g @ g
            if gg == 0 or not math.isfinite(gg):
                return None
            p = p - v * g / gg
            if abs(v) < 1e-13:
                break
        v, kappa = _rbs_residual(p[0], p[1], nu)
        if not (math.isfinite(v) and kappa < 0):
            return None
        z = complex(*p)
        zf = ScaledCoupling(z * cmath.exp(-0.5j * nu), z * cmath.exp(0.5j * nu))
        if abs(eval_F(zf, kappa)) > tol * max(1.0, abs(z) ** 2):
            return None
        return p

    rs = np.linspace(*r_range, n_grid)
    ss = np.linspace(*s_range, n_grid)
    seeds = []
    for s in ss:
        vals = [_rbs_residual(r, s, nu) for r in rs]
        for i in range(n_grid - 1):
            (v0, k0), (v1, k1) = vals[i], vals[i + 1]
            if not (math.isfinite(v0) and math.isfinite(v1)) or k0 >= 0 or k1 >= 0:
                continue
            if v0 * v1 < 0 and abs(v0 - v1) < 1e3:
                seeds.append(np.array([0.5 * (rs[i] + rs[i + 1]), s]))

    curves: list[np.ndarray] = []
    traced: list[np.ndarray] = []

    def near_traced(p):
        return any(np.min(np.hypot(*(c[:, :2] - p).T)) < 2 * step for c in traced)

    def inside(p):
        return r_range[0] <= p[0] <= r_range[1] and s_range[0] <= p[1] <= s_range[1]

    for seed in seeds:
        p0 = correct(seed)
        if p0 is None or near_traced(p0):
            continue
        branches = []
        for direction in (1, -1):
            pts = [p0]
            p = p0
            prev_t = None
            for _ in range(max_steps):
                g = grad(p)
                t = np.array([-g[1], g[0]]) / math.hypot(*g)
                if prev_t is None:
                    t = direction * t
                elif t @ prev_t < 0:
                    t = -t
                q = correct(p + step * t)
                if q is None or not inside(q):
                    break
                if len(pts) > 10 and np.hypot(*(q - p0)) < step:
                    pts.append(p0)
                    break
                pts.append(q)
                prev_t, p = t, q
            branches.append(pts)
        pts = branches[1][::-1] + branches[0][1:]
        arr = np.array([(p[0], p[1], _rbs_residual(p[0], p[1], nu)[1]) for p in pts])
        traced.append(arr)
        curves.append(arr)
    return curves


def sector_count(zeros, rho: float, theta: float, epsilon: float = 1e-3,
                 angle_epsilon: float | None = None) -> int:
    """``N(rho, theta)`` from already located zeros (multiplicity weighted).

    Cheap stand-in for :func:`N_sector` when many ``(rho, theta)`` pairs are
    needed for one coupling.  Pass the output of
    ``locate_zeros(..., include_mirrored=True)``.
    """
    ae = epsilon if angle_epsilon is None else angle_epsilon
    lo, hi = math.pi / 2 + ae, math.pi / 2 + theta
    n = 0
    for z in zeros:
        r = abs(z.kappa)
        phi = math.atan2(z.kappa.imag, z.kappa.real) % (2 * math.pi)
        if epsilon < r < rho and lo < phi < hi:
            n += z.multiplicity
    return n
