"""Spectral singularities from the real cubic ``g(k)`` and the special coupling planes.

A real zero of ``f`` forces the 2x2 system formed by ``Re f = 0`` and
``Im f = 0`` (linear in ``sin 2ak`` and ``cos 2ak``) to be singular, and that
determinant is the monic real cubic ``g``.  Roots of ``g`` are candidates
only; each one is checked against ``f`` at both signs.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .core_model import CouplingConfig
from .transfer import f_factor

__all__ = [
    "CubicCoefficients",
    "SingularityRecord",
    "CurveSample",
    "CurveSamples",
    "RejectedRoot",
    "cubic_g",
    "solve_cubic",
    "find_singularities",
    "pt_curve",
    "family_anti_pt",
    "family_imaginary",
    "family_opposite",
    "family_shifted",
    "shifted_case_b_roots",
    "shifted_curves",
    "imaginary_curves",
]

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class CubicCoefficients:
    """``g(k) = c3 k^3 + c2 k^2 + c1 k + c0`` with ``c3 = 1``."""

    c3: float
    c2: float
    c1: float
    c0: float

    def __call__(self, k):
        return ((self.c3 * k + self.c2) * k + self.c1) * k + self.c0

    def derivative(self, k, order: int = 1):
        if order == 1:
            return (3 * self.c3 * k + 2 * self.c2) * k + self.c1
        if order == 2:
            return 6 * self.c3 * k + 2 * self.c2
        if order == 3:
            return 6 * self.c3 + 0 * k
        raise ValueError(order)


@dataclass(frozen=True)
class SingularityRecord:
    """A spectral singularity at energy ``k_star**2``.

    ``k_star`` is positive.  ``sides`` holds the signs ``s`` for which
    ``f(s * k_star) = 0``: ``+1`` is a zero of ``M22(k)``, ``-1`` a zero of
    ``M22(-k)``.
    """

    k_star: float
    energy: float
    residual_f: float
    sides: tuple[int, ...] = (1,)
    family_tag: str | None = None


@dataclass(frozen=True)
class RejectedRoot:
    """A nonzero real root of ``g`` that is not a zero of ``f``."""

    kappa: float
    residual_f: float


@dataclass(frozen=True)
class CurveSample:
    t: float
    r: float
    s: float
    branch: int = 1


class CurveSamples(list):
    """List of :class:`CurveSample` with the parameter values that had to be skipped."""

    def __init__(self, samples=(), skipped=()):
        super().__init__(samples)
        self.skipped: list[float] = list(skipped)


def cubic_g(cc: CouplingConfig) -> CubicCoefficients:
    u, v = cc.u, cc.v
    return CubicCoefficients(
        1.0,
        -2.0 * v.imag,
        -0.5 * u.real + abs(v) ** 2,
        0.5 * (u.real * v.imag - v.real * u.imag),
    )


def _newton(fun, dfun, x, steps):
    for _ in range(steps):
        d = dfun(x)
        if d == 0:
            break
        step = fun(x) / d
        if not math.isfinite(step):
            break
        x -= step
    return x


def solve_cubic(g: CubicCoefficients) -> list[float]:
    """Real roots of a monic real cubic, ascending, repeated by multiplicity.

    Closed form on the depressed cubic ``y^3 + p y + q``: Cardano when the
    discriminant is positive (one real root), the trigonometric form
    otherwise.  Roots closer than ``1e-5`` (relative) are treated as a
    cluster of multiplicity ``m`` and polished by Newton on ``g^(m-1)``;
    isolated roots get two Newton steps on ``g``.
    """
    b, c, d = g.c2 / g.c3, g.c1 / g.c3, g.c0 / g.c3
    shift = -b / 3.0
    p = c - b * b / 3.0
    q = 2.0 * b**3 / 27.0 - b * c / 3.0 + d
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    if p == 0 and q == 0:
        ys = [0.0, 0.0, 0.0]
    elif disc > 0 or p > 0:
        # p > 0 means one real root even when (p/3)^3 underflows
        sq = math.sqrt(disc)
        ys = [math.copysign(abs(-q / 2 + sq) ** (1 / 3), -q / 2 + sq)
              + math.copysign(abs(-q / 2 - sq) ** (1 / 3), -q / 2 - sq)]
    else:
        m = 2.0 * math.sqrt(-p / 3.0)
        pm = p * m
        arg = 3.0 * q / pm if pm != 0 else 0.0
        theta = math.acos(max(-1.0, min(1.0, arg))) / 3.0
        ys = [m * math.cos(theta - 2.0 * math.pi * j / 3.0) for j in range(3)]
    roots = [y + shift for y in ys]
    scale = max(1.0, max(abs(r) for r in roots))
    if len(roots) == 1:
        # a tiny positive discriminant may be a rounded double root; recover
        # it from the critical points of g
        qa, qb, qc = 3.0, 2.0 * b, c
        qd = qb * qb - 4 * qa * qc
        if qd >= 0:
            for crit in ((-qb + math.sqrt(qd)) / (2 * qa), (-qb - math.sqrt(qd)) / (2 * qa)):
                crit = _newton(g.derivative, lambda t: g.derivative(t, 2), crit, 3)
                if abs(g(crit)) <= 1e-10 * scale**3 and abs(crit - roots[0]) > 1e-5 * scale:
                    roots += [crit, crit]
                    break
    roots.sort()

    clusters: list[list[float]] = []
    for r in roots:
        if clusters and abs(r - clusters[-1][-1]) < 1e-5 * scale:
            clusters[-1].append(r)
        else:
            clusters.append([r])
    polished: list[float] = []
    for cl in clusters:
        m = len(cl)
        x = sum(cl) / m
        if m == 1:
            x = _newton(g, g.derivative, x, 2)
        else:
            x = _newton(lambda t, m=m: g.derivative(t, m - 1), lambda t, m=m: g.derivative(t, m), x, 30)
        polished.extend([x] * m)
    return polished


def _f_residual(cc: CouplingConfig, k: float) -> float:
    return float(abs(f_factor(cc, k)))


def find_singularities(cc: CouplingConfig, tol: float = DEFAULT_TOL, k_min: float = 1e-6,
                       diagnostics: list | None = None, family_tag: str | None = None
                       ) -> list[SingularityRecord]:
    """All spectral singularities of the coupling configuration.

    Each distinct nonzero real root ``kappa`` of ``g`` is tested at
    ``f(kappa)`` and ``f(-kappa)`` separately.  Records are merged by energy;
    a root that passes neither test is appended to ``diagnostics`` as a
    :class:`RejectedRoot` and logged at DEBUG level.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    g = cubic_g(cc)
    candidates: list[float] = []
    for r in solve_cubic(g):
        if abs(r) < k_min:
            continue
        if not any(abs(abs(r) - c) <= 1e-9 * max(1.0, c) for c in candidates):
            candidates.append(abs(r))

    records: list[SingularityRecord] = []
    for kappa in sorted(candidates):
        res = {s: _f_residual(cc, s * kappa) for s in (1, -1)}
        sides = tuple(s for s in (1, -1) if res[s] < tol)
        if not sides:
            best = min(res.values())
            log.debug("root %.17g of g rejected: min |f(+-k)| = %.3g", kappa, best)
            if diagnostics is not None:
                diagnostics.append(RejectedRoot(kappa, best))
            continue
        records.append(SingularityRecord(
            k_star=kappa,
            energy=kappa * kappa,
            residual_f=min(res[s] for s in sides),
            sides=sides,
            family_tag=family_tag,
        ))
    return records


# --- PT-symmetric plane z_+ = conj(z_-) = z, coordinates r = 2a Re z, s = 2a Im z --------

def _adaptive_curve(fun, t_lo, t_hi, n_points, slope_threshold, max_depth=12):
    ts = list(np.linspace(t_lo, t_hi, n_points))
    out = [ts[0]]
    for t0, t1 in zip(ts[:-1], ts[1:]):
        stack = [(t0, t1, 0)]
        seg = []
        while stack:
            a, b, depth = stack.pop()
            ra, sa = fun(a)
            rb, sb = fun(b)
            slope = max(abs(rb - ra), abs(sb - sa)) / (b - a)
            if depth < max_depth and np.isfinite(slope) and slope > slope_threshold:
                mid = 0.5 * (a + b)
                stack.append((mid, b, depth + 1))
                stack.append((a, mid, depth + 1))
            else:
                seg.append(b)
        out.extend(seg)
    return out


def _pt_rs(t):
    st = math.sin(t)
    return -t * math.cos(t) / st, t * math.sqrt(1.0 + 1.0 / (st * st))


def pt_curve(t_range: tuple[float, float], n_points: int, slope_threshold: float = 1e3,
             pole_margin: float = 1e-9) -> CurveSamples:
    """Samples of ``r = -t cot t``, ``s = +-t sqrt(1 + csc^2 t)``.

    Every sample is a PT-symmetric coupling ``z = (r + i s) / (2a)`` with a
    spectral singularity at ``k = t / (2a)``.  Parameter values within
    ``pole_margin`` of a multiple of pi are skipped and listed in
    ``.skipped``; intervals whose slope exceeds ``slope_threshold`` are
    bisected.
    """
    t_lo, t_hi = map(float, t_range)
    ts = _adaptive_curve(lambda t: _pt_rs(t) if abs(math.sin(t)) > pole_margin else (np.nan, np.nan),
                         t_lo, t_hi, n_points, slope_threshold)
    samples, skipped = [], []
    for t in ts:
        if t <= 0 or abs(math.sin(t)) <= pole_margin:
            skipped.append(t)
            continue
        r, s = _pt_rs(t)
        samples.append(CurveSample(t, r, s, 1))
        samples.append(CurveSample(t, r, -s, -1))
    return CurveSamples(samples, skipped)


# --- plane Pi_1: z_+ = -conj(z_-) = z ---------------------------------------------------

def family_anti_pt(z: complex, a: float, tol: float = DEFAULT_TOL) -> SingularityRecord | None:
    """Singularity for ``z_+ = z``, ``z_- = -conj(z)``.

    Requires ``k = |Im z|`` together with ``sin(2ak) = 0``, i.e.
    ``|Im z| = n pi / (2a)`` with ``n != 0``; confirmed against ``f``.
    """
    z = complex(z)
    k = abs(z.imag)
    if k == 0:
        return None
    if abs(math.sin(2 * a * k)) > 1e-6:
        return None
    cc = CouplingConfig(-z.conjugate(), z, a)
    res = {s: _f_residual(cc, s * k) for s in (1, -1)}
    sides = tuple(s for s in (1, -1) if res[s] < tol)
    if not sides:
        return None
    return SingularityRecord(k, k * k, min(res[s] for s in sides), sides, "anti-PT")


# --- plane Pi_2: z_+- = i y_+- / a ------------------------------------------------------

def family_imaginary(y_minus: float, y_plus: float, a: float, tol: float = DEFAULT_TOL,
                     k_min: float = 1e-6) -> list[SingularityRecord]:
    """Singularities for purely imaginary couplings ``z = i y / a``.

    Branch A: ``k = (y_+ + y_-) / (2a)`` with ``sin(2ak) = 0``, which means
    ``y_+ + y_- = n pi``.  Branch B: ``cos(2ak) = 0``, so
    ``k = (2n+1) pi / (4a)``, together with the quadratic
    ``2 a^2 k^2 - a k (y_+ + y_-) + y_+ y_- = 0``.  Every candidate is
    confirmed against ``f``.
    """
    cc = CouplingConfig(1j * y_minus / a, 1j * y_plus / a, a)
    cands: list[tuple[float, str]] = []
    ka = (y_plus + y_minus) / (2 * a)
    if ka != 0:
        cands.append((abs(ka), "imaginary-A"))
    # 2a^2 k^2 - a (y+ + y-) k + y+ y- = 0
    disc = (a * (y_plus + y_minus)) ** 2 - 8 * a * a * y_plus * y_minus
    if disc >= 0:
        for sgn in (1, -1):
            k = (a * (y_plus + y_minus) + sgn * math.sqrt(disc)) / (4 * a * a)
            if k != 0 and abs(math.cos(2 * a * k)) < 1e-6:
                cands.append((abs(k), "imaginary-B"))
    out: list[SingularityRecord] = []
    for k, tag in cands:
        if k < k_min or any(abs(r.k_star - k) <= 1e-9 * max(1, k) for r in out):
            continue
        res = {s: _f_residual(cc, s * k) for s in (1, -1)}
        sides = tuple(s for s in (1, -1) if res[s] < tol)
        if sides:
            out.append(SingularityRecord(k, k * k, min(res[s] for s in sides), sides, tag))
    return out


def imaginary_curves(a: float, n_max: int, y_range: tuple[float, float], n_points: int):
    """Curves in the ``(y_+, y_-)`` plane carrying singularities.

    Returns ``(lines, curves)``: ``lines`` maps ``n`` to the line
    ``y_+ + y_- = n pi`` (branch A, given as ``(y_-, y_+)`` endpoint
    samples); ``curves`` maps ``n`` to samples ``(y_-, y_+)`` of
    ``y_+ = a k_n (y_- - 2 a k_n) / (y_- - a k_n)`` (branch B).
    """
    ys = np.linspace(*y_range, n_points)
    lines = {}
    for n in range(-n_max, n_max + 1):
        if n == 0:
            continue
        lines[n] = np.column_stack([ys, n * math.pi - ys])
    curves = {}
    for n in range(-n_max, n_max):
        akn = (2 * n + 1) * math.pi / 4
        with np.errstate(divide="ignore", invalid="ignore"):
            yp = akn * (ys - 2 * akn) / (ys - akn)
        ok = np.isfinite(yp) & (np.abs(ys - akn) > 1e-9) & (ys != 0) & (yp != 0)
        curves[n] = np.column_stack([ys[ok], yp[ok]])
    return lines, curves


# --- plane Pi_3: z_+ = -z_- = z, coordinates r = a Re z, s = a Im z --------------------

def _opposite_rs(t):
    ac = abs(1.0 / math.sin(t))
    return 0.5 * t * math.sqrt(max(ac - 1.0, 0.0)), 0.5 * t * math.sqrt(ac + 1.0)


def family_opposite(t_range: tuple[float, float], n_points: int, a: float = 1.0,
                    slope_threshold: float = 1e3, pole_margin: float = 1e-9) -> CurveSamples:
    """Curves ``|r| = (t/2) sqrt(|csc t| - 1)``, ``|s| = (t/2) sqrt(|csc t| + 1)``.

    ``t = a sqrt(2 Re u) = 2 a k`` with ``u = -z^2``.  The pairing of signs is
    free (both signs of ``k`` are admissible), so each ``t`` yields the four
    points ``(+-|r|, +-|s|)``; ``branch`` encodes the quadrant as ``1..4``.
    The half-angle value at ``|sin t| = 1`` lies on the ``s`` axis.
    """
    t_lo, t_hi = map(float, t_range)
    ts = _adaptive_curve(lambda t: _opposite_rs(t) if abs(math.sin(t)) > pole_margin else (np.nan, np.nan),
                         t_lo, t_hi, n_points, slope_threshold)
    samples, skipped = [], []
    for t in ts:
        if t <= 0 or abs(math.sin(t)) <= pole_margin:
            skipped.append(t)
            continue
        r, s = _opposite_rs(t)
        for q, (sr, ss) in enumerate(((1, 1), (-1, 1), (-1, -1), (1, -1)), start=1):
            samples.append(CurveSample(t, sr * r, ss * s, q))
    return CurveSamples(samples, skipped)


# --- plane Pi_4: z_+- = (1 + i s_+-) / a ------------------------------------------------

def shifted_case_b_roots(a: float, k_max: float, step: float = 1e-3) -> list[float]:
    """Positive roots of ``tan(2ak) + ak = 0`` on ``(0, k_max]``.

    Written as ``sin(2ak) + ak cos(2ak) = 0`` to avoid the tangent poles, then
    bracketed on a grid of spacing ``step`` and refined by Brent's method.
    """
    h = lambda k: math.sin(2 * a * k) + a * k * math.cos(2 * a * k)
    ks = np.arange(step, k_max + step, step)
    vals = np.sin(2 * a * ks) + a * ks * np.cos(2 * a * ks)
    roots = []
    for i in np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0):
        roots.append(brentq(h, ks[i], ks[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps))
    return roots


def family_shifted(s_minus: float, s_plus: float, a: float, tol: float = DEFAULT_TOL,
                   k_min: float = 1e-6) -> list[SingularityRecord]:
    """Singularities for ``z_+- = (1 + i s_+-) / a``.

    Here ``a^3 g(k) = (ak - s)(a^2 k^2 - a s k + t)`` with
    ``s = (s_- + s_+)/2`` and ``t = (1 + s_- s_+)/2``.  Case a is the linear
    factor, case b the quadratic one; candidates from both are confirmed
    against ``f``.
    """
    s = 0.5 * (s_minus + s_plus)
    t = 0.5 * (1 + s_minus * s_plus)
    cc = CouplingConfig((1 + 1j * s_minus) / a, (1 + 1j * s_plus) / a, a)
    cands: list[tuple[float, str]] = []
    if s != 0:
        cands.append((abs(s / a), "shifted-a"))
    disc = s * s - 4 * t
    if disc >= 0:
        for sgn in (1, -1):
            ak = 0.5 * (s + sgn * math.sqrt(disc))
            if ak != 0:
                cands.append((abs(ak / a), "shifted-b"))
    out: list[SingularityRecord] = []
    for k, tag in cands:
        if k < k_min or any(abs(r.k_star - k) <= 1e-9 * max(1, k) for r in out):
            continue
        res = {sg: _f_residual(cc, sg * k) for sg in (1, -1)}
        sides = tuple(sg for sg in (1, -1) if res[sg] < tol)
        if sides:
            out.append(SingularityRecord(k, k * k, min(res[sg] for sg in sides), sides, tag))
    return out


def shifted_curves(a: float, s_range: tuple[float, float], n_points: int, k_max: float = 20.0):
    """Singular curves in the ``(s_-, s_+)`` plane.

    Case a is parameterised by ``s`` with ``t = s cot(2s) + 1``; case b by
    ``s`` for each root ``kappa_n`` of ``tan(2ak) + ak = 0`` (both signs) with
    ``t = a s kappa_n - a^2 kappa_n^2``.  In both, ``s_-+ = s -+ sqrt(s^2 + 1 - 2t)``.
    Returns ``{"a": array, "b": {kappa_n: array}}`` of ``(s, s_-, s_+)`` rows.
    """
    ss = np.linspace(*s_range, n_points)
    with np.errstate(divide="ignore", invalid="ignore"):
        ta = ss / np.tan(2 * ss) + 1
        rad = ss * ss + 1 - 2 * ta
    ok = np.isfinite(rad) & (rad >= 0)
    rows = []
    for sg in (1, -1):
        sm = ss[ok] - sg * np.sqrt(rad[ok])
        rows.append(np.column_stack([ss[ok], sm, 2 * ss[ok] - sm]))
    case_a = np.vstack(rows) if rows else np.empty((0, 3))
    case_b = {}
    for kn in shifted_case_b_roots(a, k_max):
        for kk in (kn, -kn):
            tb = a * ss * kk - a * a * kk * kk
            rad = ss * ss + 1 - 2 * tb
            ok = rad >= 0
            rows = []
            for sg in (1, -1):
                sm = ss[ok] - sg * np.sqrt(rad[ok])
                rows.append(np.column_stack([ss[ok], sm, 2 * ss[ok] - sm]))
            case_b[float(kk)] = np.vstack(rows)
    return {"a": case_a, "b": case_b}
