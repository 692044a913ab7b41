"""Grid scans over coupling planes, figure datasets and the ``delta-spectra`` command.

Columns are fixed per mode.  Every row starts with

    i, j, x, y, a, z_minus_re, z_minus_im, z_plus_re, z_plus_im, status

followed by the mode columns:

    singularities  n_singularities, k_star, energy, max_residual_f
    bound-states   n_bound_states, n_real_bound_states, n_spectral_singularities,
                   kind, kappa_re, kappa_im, multiplicity, max_residual_F, n_unrefined
    count          N_tot, n_tot, winding_deviation
    quasi-bound    m_r, B_r, kappa_min_re, kappa_min_im, inside_bound

List-valued cells are joined with ``;`` in CSV and kept as arrays in JSON.
Floats are written as the shortest decimal that round-trips.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .core_model import CouplingConfig, ScaledCoupling
from .errors import DeltaSpectraError, ResolutionError
from .quasi_hermiticity import compute_bound
from .singularity_finder import (family_opposite, find_singularities, imaginary_curves, pt_curve,
                                 shifted_curves)
from .zero_locator import (ContourSpec, N_total, eval_F, locate_zeros, n_total, real_bound_state_curves,
                           sector_count, winding_value)

__all__ = [
    "UsageError",
    "GridSpec",
    "ScanRequest",
    "ScanResult",
    "parse_grid",
    "plane_coupling",
    "run_scan",
    "write_csv",
    "write_json",
    "emit_figure",
    "FIGURE_PRESETS",
    "main",
]

log = logging.getLogger(__name__)

MODES = ("singularities", "bound-states", "count", "quasi-bound", "figure")
PLANES = ("pt", "anti-pt", "imaginary", "opposite", "shifted", "raw")

EXIT_OK, EXIT_USAGE, EXIT_RESOLUTION = 0, 2, 3


class UsageError(DeltaSpectraError, ValueError):
    """Bad request: unknown mode, plane or figure, or a malformed grid."""


# --- requests ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    x0: float
    x1: float
    nx: int
    y0: float
    y1: float
    ny: int

    def __post_init__(self):
        for v in (self.x0, self.x1, self.y0, self.y1):
            if not math.isfinite(v):
                raise UsageError("grid ranges must be finite")
        if self.nx < 2 or self.ny < 2:
            raise UsageError("grid resolutions must be at least 2")
        if self.x0 == self.x1 or self.y0 == self.y1:
            raise UsageError("grid range is empty")

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x0, self.x1, self.nx)

    @property
    def ys(self) -> np.ndarray:
        return np.linspace(self.y0, self.y1, self.ny)

    @property
    def size(self) -> int:
        return self.nx * self.ny

    def __str__(self):
        return f"{self.x0!r}:{self.x1!r}:{self.nx},{self.y0!r}:{self.y1!r}:{self.ny}"


def parse_grid(spec: str) -> GridSpec:
    """``"x0:x1:nx,y0:y1:ny"`` -> :class:`GridSpec`."""
    try:
        ax, ay = spec.split(",")
        x0, x1, nx = ax.split(":")
        y0, y1, ny = ay.split(":")
        return GridSpec(float(x0), float(x1), int(nx), float(y0), float(y1), int(ny))
    except UsageError:
        raise
    except ValueError as exc:
        raise UsageError(f"bad grid spec {spec!r}; expected x0:x1:nx,y0:y1:ny") from exc


@dataclass(frozen=True)
class ScanRequest:
    """A scan over ``grid`` in the coordinates of ``plane``.

    Plane coordinates ``(x, y)``:

    ``pt``         ``z_+ = conj(z_-) = (x + i y) / (2a)``
    ``anti-pt``    ``z_+ = -conj(z_-) = x + i y``
    ``imaginary``  ``z_- = i x / a``, ``z_+ = i y / a``
    ``opposite``   ``z_+ = -z_- = (x + i y) / a``
    ``shifted``    ``z_- = (1 + i x) / a``, ``z_+ = (1 + i y) / a``
    ``raw``        ``z_- = base_- + i x``, ``z_+ = base_+ + i y``

    Without a grid the request evaluates the single point ``fixed["z_minus"]``,
    ``fixed["z_plus"]``.
    """

    mode: str
    plane: str = "raw"
    grid: GridSpec | None = None
    fixed: dict = field(default_factory=dict)
    tol: float = 1e-8
    eps: float = 1e-3
    preset: str = "theorem"
    workers: int = 1

    def __post_init__(self):
        if self.mode not in MODES or self.mode == "figure":
            raise UsageError(f"run_scan does not handle mode {self.mode!r}")
        if self.plane not in PLANES:
            raise UsageError(f"unknown plane {self.plane!r}")
        if not (self.tol > 0 and self.eps > 0):
            raise UsageError("tol and eps must be positive")

    @property
    def a(self) -> float:
        return float(self.fixed.get("a", 1.0))


@dataclass
class ScanResult:
    metadata: dict
    columns: list[str]
    rows: list[dict]


def plane_coupling(plane: str, x: float, y: float, a: float = 1.0, base_minus: complex = 1.0,
                   base_plus: complex = 1.0) -> CouplingConfig:
    if plane == "pt":
        z = complex(x, y) / (2 * a)
        return CouplingConfig(z.conjugate(), z, a, allow_free=True)
    if plane == "anti-pt":
        z = complex(x, y)
        return CouplingConfig(-z.conjugate(), z, a, allow_free=True)
    if plane == "imaginary":
        return CouplingConfig(1j * x / a, 1j * y / a, a, allow_free=True)
    if plane == "opposite":
        z = complex(x, y) / a
        return CouplingConfig(-z, z, a, allow_free=True)
    if plane == "shifted":
        return CouplingConfig((1 + 1j * x) / a, (1 + 1j * y) / a, a, allow_free=True)
    if plane == "raw":
        return CouplingConfig(complex(base_minus) + 1j * x, complex(base_plus) + 1j * y, a, allow_free=True)
    raise UsageError(f"unknown plane {plane!r}")


_BASE = ["i", "j", "x", "y", "a", "z_minus_re", "z_minus_im", "z_plus_re", "z_plus_im", "status"]
_MODE_COLUMNS = {
    "singularities": ["n_singularities", "k_star", "energy", "max_residual_f"],
    "bound-states": ["n_bound_states", "n_real_bound_states", "n_spectral_singularities", "kind",
                     "kappa_re", "kappa_im", "multiplicity", "max_residual_F", "n_unrefined"],
    "count": ["N_tot", "n_tot", "winding_deviation"],
    "quasi-bound": ["m_r", "B_r", "kappa_min_re", "kappa_min_im", "inside_bound"],
}


def _evaluate(mode: str, cc: CouplingConfig, tol: float, eps: float, preset: str) -> dict:
    zf = cc.scaled
    if mode == "singularities":
        recs = find_singularities(cc, tol=tol)
        return {"n_singularities": len(recs), "k_star": [r.k_star for r in recs],
                "energy": [r.energy for r in recs],
                "max_residual_f": max((r.residual_f for r in recs), default=0.0)}
    if mode == "bound-states":
        diag: list = []
        zs = locate_zeros(zf, cc.a, diagnostics=diag)
        bs = [z for z in zs if z.kind != "spectral-singularity"]
        return {"n_bound_states": sum(z.multiplicity for z in bs),
                "n_real_bound_states": sum(z.multiplicity for z in bs if z.kind == "real-bound-state"),
                "n_spectral_singularities": sum(1 for z in zs if z.kind == "spectral-singularity"),
                "kind": [z.kind for z in zs], "kappa_re": [z.kappa.real for z in zs],
                "kappa_im": [z.kappa.imag for z in zs], "multiplicity": [z.multiplicity for z in zs],
                "max_residual_F": max((z.residual for z in zs), default=0.0), "n_unrefined": len(diag)}
    if mode == "count":
        if zf.sigma == 0:
            return {"N_tot": 0, "n_tot": 0, "winding_deviation": 0.0}
        spec = ContourSpec("annular-sector", 1.01 * zf.sigma, math.pi - eps, eps)
        val = winding_value(zf, spec.pieces())[0]
        big_n = N_total(zf, epsilon=eps)
        return {"N_tot": big_n, "n_tot": n_total(zf, epsilon=eps), "winding_deviation": abs(val - big_n)}
    if mode == "quasi-bound":
        rm, rp = zf.zf_minus.real, zf.zf_plus.real
        qb = compute_bound(rm, rp, preset=preset)
        smax = max(abs(zf.zf_minus.imag), abs(zf.zf_plus.imag))
        return {"m_r": qb.m_r, "B_r": qb.B_r, "kappa_min_re": qb.kappa_min.real,
                "kappa_min_im": qb.kappa_min.imag, "inside_bound": smax < qb.B_r}
    raise UsageError(f"unknown mode {mode!r}")


def _cell(task) -> dict:
    mode, plane, i, j, x, y, a, bm, bp, tol, eps, preset = task
    cc = plane_coupling(plane, x, y, a, bm, bp)
    row = {"i": i, "j": j, "x": x, "y": y, "a": a, "z_minus_re": cc.z_minus.real,
           "z_minus_im": cc.z_minus.imag, "z_plus_re": cc.z_plus.real, "z_plus_im": cc.z_plus.imag}
    try:
        row.update(_evaluate(mode, cc, tol, eps, preset))
        row["status"] = "ok"
    except ResolutionError as exc:
        row["status"] = "resolution-error"
        log.warning("cell (%d, %d): %s", i, j, exc)
    except DeltaSpectraError as exc:
        row["status"] = type(exc).__name__
        log.warning("cell (%d, %d): %s", i, j, exc)
    return row


def _complex_arg(value) -> complex:
    if isinstance(value, (list, tuple)):
        return complex(float(value[0]), float(value[1]))
    return complex(value)


def run_scan(req: ScanRequest) -> ScanResult:
    """Evaluate every grid cell; rows come back in row-major ``(j, i)`` order whatever ``workers`` is."""
    a = req.a
    bm = _complex_arg(req.fixed.get("z_minus", 1.0))
    bp = _complex_arg(req.fixed.get("z_plus", 1.0))
    if req.grid is None:
        if req.plane != "raw":
            raise UsageError("a single-point request must use plane 'raw'")
        tasks = [(req.mode, "raw", 0, 0, 0.0, 0.0, a, bm, bp, req.tol, req.eps, req.preset)]
    else:
        tasks = [(req.mode, req.plane, i, j, float(x), float(y), a, bm, bp, req.tol, req.eps, req.preset)
                 for j, y in enumerate(req.grid.ys) for i, x in enumerate(req.grid.xs)]
    if req.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=req.workers) as pool:
            rows = list(pool.map(_cell, tasks, chunksize=max(1, len(tasks) // (8 * req.workers))))
    else:
        rows = [_cell(t) for t in tasks]
    meta = {
        "tool": "delta-spectra",
        "version": __version__,
        "mode": req.mode,
        "plane": req.plane,
        "grid": None if req.grid is None else str(req.grid),
        "fixed": {"a": a, "z_minus": [bm.real, bm.imag], "z_plus": [bp.real, bp.imag]},
        "tolerances": {"tol": req.tol, "eps": req.eps, "class_tol": 1e-8, "newton_tol": 1e-12,
                       "quad_tol": 1e-4},
        "preset": req.preset,
        "n_rows": len(rows),
        "n_failed": sum(r["status"] != "ok" for r in rows),
    }
    return ScanResult(meta, _BASE + _MODE_COLUMNS[req.mode], rows)


# --- serialization ----------------------------------------------------------------------


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (list, tuple, np.ndarray)):
        return ";".join(_fmt(x) for x in v)
    return str(v)


def _jsonable(v):
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


def csv_text(columns: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in columns])
    return buf.getvalue()


def write_csv(result: ScanResult, path: str | Path) -> Path:
    """CSV body plus ``<path>.meta.json`` carrying the metadata."""
    path = Path(path)
    path.write_text(csv_text(result.columns, result.rows))
    Path(str(path) + ".meta.json").write_text(json.dumps(_jsonable(result.metadata), indent=2) + "\n")
    return path


def write_json(result: ScanResult, path: str | Path) -> Path:
    path = Path(path)
    rows = [{c: _jsonable(r.get(c)) for c in result.columns} for r in result.rows]
    path.write_text(json.dumps({"metadata": _jsonable(result.metadata), "rows": rows}, indent=1) + "\n")
    return path


# --- figure datasets --------------------------------------------------------------------

FIGURE_PRESETS: dict[str, dict[str, Any]] = {
    "fig1": {"t_range": [1e-6, 4 * math.pi], "n_points": 400, "max_abs": 40.0},
    "fig2": {"a": 1.0, "n_max": 4, "y_range": [-10.0, 10.0], "n_points": 801},
    "fig3": {"t_range": [1e-6, 4 * math.pi], "n_points": 400, "max_abs": 40.0},
    "fig4": {"a": 1.0, "s_range": [-10.0, 10.0], "n_points": 801, "k_max": 10.0},
    "fig6": {"couplings": [[[-8.0, 3.0], [-8.0, -3.0]], [[-8.0, 3.0], [-4.0, -2.0]]],
             "n_rho": 120, "n_theta": 120, "eps": 1e-3},
    "fig7": {"couplings": [[[-1.0, 8.0], [-1.0, -8.0]], [[-2.0, 7.0], [-4.0, -5.0]]],
             "n_points": 400, "rho_max": 17.0, "eps": 1e-3, "angle_eps": 0.01},
    "fig8": {"s_range": [-20.0, 20.0], "n": 41, "eps": 1e-6},
    "fig9": {"n_values": list(range(1, 11)), "r_range": [-12.0, 0.0], "s_range": [-12.0, 12.0],
             "n_grid": 241, "step": 0.02},
    "fig10": {"r_minus": 1.0, "r_plus": 1.0, "n_boundary": 4096, "preset": "fig10"},
}


def _fig1(p):
    cs = pt_curve(tuple(p["t_range"]), p["n_points"])
    # the branches run off to infinity at t = n pi; keep the plotting window
    rows = [{"t": c.t, "r": c.r, "s": c.s, "branch": c.branch} for c in cs
            if max(abs(c.r), abs(c.s)) <= p["max_abs"]]
    return {"curve": (["t", "r", "s", "branch"], rows)}, {"skipped_t": cs.skipped}


def _fig2(p):
    lines, curves = imaginary_curves(p["a"], p["n_max"], tuple(p["y_range"]), p["n_points"])
    rows = [{"branch": "A", "n": n, "y_minus": ym, "y_plus": yp} for n, arr in lines.items() for ym, yp in arr]
    rows += [{"branch": "B", "n": n, "y_minus": ym, "y_plus": yp} for n, arr in curves.items() for ym, yp in arr]
    return {"curves": (["branch", "n", "y_minus", "y_plus"], rows)}, {}


def _fig3(p):
    cs = family_opposite(tuple(p["t_range"]), p["n_points"])
    rows = [{"t": c.t, "r": c.r, "s": c.s, "branch": c.branch} for c in cs
            if max(abs(c.r), abs(c.s)) <= p["max_abs"]]
    return {"curve": (["t", "r", "s", "branch"], rows)}, {"skipped_t": cs.skipped}


def _fig4(p):
    res = shifted_curves(p["a"], tuple(p["s_range"]), p["n_points"], p["k_max"])
    rows = [{"case": "a", "kappa_n": None, "s": s, "s_minus": sm, "s_plus": sp} for s, sm, sp in res["a"]]
    for kn, arr in res["b"].items():
        rows += [{"case": "b", "kappa_n": kn, "s": s, "s_minus": sm, "s_plus": sp} for s, sm, sp in arr]
    return {"curves": (["case", "kappa_n", "s", "s_minus", "s_plus"], rows)}, {"unit_disc_radius": 1.0}


def _zf(pair) -> ScaledCoupling:
    return ScaledCoupling(_complex_arg(pair[0]), _complex_arg(pair[1]))


def _fig6(p):
    dens, zrows, summary = [], [], {}
    for case, pair in enumerate(p["couplings"]):
        zf = _zf(pair)
        zs = locate_zeros(zf, include_mirrored=True)
        rhos = np.linspace(p["eps"], zf.sigma, p["n_rho"])
        thetas = np.linspace(p["eps"], math.pi - p["eps"], p["n_theta"])
        for rho in rhos:
            for th in thetas:
                dens.append({"case": case, "rho": rho, "theta": th,
                             "N": sector_count(zs, rho, th, p["eps"])})
        for z in zs:
            zrows.append({"case": case, "kappa_re": z.kappa.real, "kappa_im": z.kappa.imag, "kind": z.kind,
                          "residual_F": z.residual})
        summary[f"case{case}_max_N"] = max(r["N"] for r in dens if r["case"] == case)
    return {"density": (["case", "rho", "theta", "N"], dens),
            "zeros": (["case", "kappa_re", "kappa_im", "kind", "residual_F"], zrows)}, summary


def _fig7(p):
    rows_rho, rows_theta = [], []
    ae = p["angle_eps"]
    for case, pair in enumerate(p["couplings"]):
        zf = _zf(pair)
        zs = locate_zeros(zf, include_mirrored=True)
        for rho in np.linspace(p["eps"], p["rho_max"], p["n_points"]):
            rows_rho.append({"case": case, "rho": rho, "N": sector_count(zs, rho, math.pi - ae, p["eps"], ae)})
        for th in np.linspace(ae, math.pi - ae, p["n_points"]):
            rows_theta.append({"case": case, "theta": th, "N": sector_count(zs, zf.sigma, th, p["eps"], ae)})
    return {"N_rho": (["case", "rho", "N"], rows_rho), "N_theta": (["case", "theta", "N"], rows_theta)}, {}


def _fig8_cell(task):
    sm, sp, eps = task
    zf = ScaledCoupling(complex(1.0, sm), complex(1.0, sp))
    row = {"s_minus": sm, "s_plus": sp}
    try:
        spec = ContourSpec("annular-sector", 1.01 * zf.sigma, math.pi - eps, eps)
        val = winding_value(zf, spec.pieces())[0]
        row.update(N_tot=N_total(zf, epsilon=eps), winding_deviation=abs(val - round(val.real)), status="ok")
    except DeltaSpectraError as exc:
        row.update(N_tot=None, winding_deviation=None, status=type(exc).__name__)
    return row


def _fig8(p, workers=1):
    s = np.linspace(p["s_range"][0], p["s_range"][1], p["n"])
    tasks = [(float(sm), float(sp), p["eps"]) for sp in s for sm in s]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_fig8_cell, tasks, chunksize=16))
    else:
        rows = [_fig8_cell(t) for t in tasks]
    vals = sorted({r["N_tot"] for r in rows if r["N_tot"] is not None})
    return {"grid": (["s_minus", "s_plus", "N_tot", "winding_deviation", "status"], rows)}, {"N_values": vals}


def _fig9(p):
    rows = []
    for n in p["n_values"]:
        nu = math.pi * (2 * n - 1) / 20
        for cid, arr in enumerate(real_bound_state_curves(nu, tuple(p["r_range"]), tuple(p["s_range"]),
                                                          p["n_grid"], p["step"])):
            for r, s, kap in arr:
                z = complex(r, s)
                zf = ScaledCoupling(z * complex(math.cos(nu / 2), -math.sin(nu / 2)),
                                    z * complex(math.cos(nu / 2), math.sin(nu / 2)))
                rows.append({"n": n, "nu": nu, "curve": cid, "r": r, "s": s, "kappa": kap,
                             "residual_F": abs(eval_F(zf, kap))})
    return {"curves": (["n", "nu", "curve", "r", "s", "kappa", "residual_F"], rows)}, {}


def _fig10(p):
    qb = compute_bound(p["r_minus"], p["r_plus"], p["n_boundary"], p["preset"])
    kap = qb.spec.gamma(qb.t_grid)
    rows = [{"t": t, "kappa_re": k.real, "kappa_im": k.imag, "abs_G": g, "abs_L": l}
            for t, k, g, l in zip(qb.t_grid, kap, qb.g_abs, qb.l_abs)]
    summary = {"m_r": qb.m_r, "B_r": qb.B_r, "radius": qb.spec.radius,
               "minima": [{"t": m.t, "kappa": [m.kappa.real, m.kappa.imag], "value": m.value} for m in qb.minima]}
    return {"boundary": (["t", "kappa_re", "kappa_im", "abs_G", "abs_L"], rows)}, summary


_FIGURES = {"fig1": _fig1, "fig2": _fig2, "fig3": _fig3, "fig4": _fig4, "fig6": _fig6, "fig7": _fig7,
            "fig8": _fig8, "fig9": _fig9, "fig10": _fig10}


def emit_figure(figure_id: str, out_dir: str | Path, overrides: dict | None = None, fmt: str = "csv",
                workers: int = 1) -> list[Path]:
    """Write the dataset(s) for ``figure_id`` and a sidecar ``<figure_id>.json``.

    The sidecar's ``params`` object can be passed back as ``overrides`` to
    reproduce the same files.
    """
    if figure_id not in _FIGURES:
        raise UsageError(f"unknown figure {figure_id!r}; choose from {', '.join(_FIGURES)}")
    if fmt not in ("csv", "json"):
        raise UsageError(f"unknown format {fmt!r}")
    params = json.loads(json.dumps(FIGURE_PRESETS[figure_id]))
    for k, v in (overrides or {}).items():
        if k not in params:
            raise UsageError(f"{figure_id} has no parameter {k!r}")
        params[k] = v
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    fn = _FIGURES[figure_id]
    tables, summary = fn(params, workers) if figure_id == "fig8" else fn(params)
    files = []
    for name, (cols, rows) in tables.items():
        path = out_dir / f"{figure_id}_{name}.{fmt}"
        if fmt == "csv":
            path.write_text(csv_text(cols, rows))
        else:
            path.write_text(json.dumps([{c: _jsonable(r.get(c)) for c in cols} for r in rows], indent=1) + "\n")
        files.append(path)
    side = out_dir / f"{figure_id}.json"
    side.write_text(json.dumps(_jsonable({
        "figure": figure_id, "version": __version__, "params": params,
        "tolerances": {"class_tol": 1e-8, "newton_tol": 1e-12, "quad_tol": 1e-4},
        "files": [p.name for p in files], "summary": summary}), indent=2) + "\n")
    files.append(side)
    return files


# --- command line -----------------------------------------------------------------------


def _parse_complex(text: str) -> complex:
    text = text.strip()
    try:
        if "," in text:
            re, im = text.split(",")
            return complex(float(re), float(im))
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cannot read {text!r} as RE,IM") from exc


def _parse_set(items: list[str]) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--set expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k] = json.loads(v)
        except json.JSONDecodeError:
            out[k] = v
    return out


def build_parser() -> argparse.ArgumentParser:
    epilog = __doc__.split("\n\n", 1)[1]
    p = argparse.ArgumentParser(
        prog="delta-spectra",
        description="Spectral singularities, bound states and quasi-Hermiticity bounds "
                    "of the complex double-delta potential.",
        epilog=epilog + "\nValues starting with '-' need the '=' form, e.g. --z-minus=-8,3 or --grid=-2:2:21,-2:2:21.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("mode", choices=MODES)
    p.add_argument("--z-minus", type=_parse_complex, default=None, metavar="RE,IM")
    p.add_argument("--z-plus", type=_parse_complex, default=None, metavar="RE,IM")
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--plane", choices=PLANES, default="raw")
    p.add_argument("--grid", default=None, metavar="x0:x1:nx,y0:y1:ny")
    p.add_argument("--tol", type=float, default=1e-8, help="acceptance tolerance on |f| (singularities)")
    p.add_argument("--eps", type=float, default=1e-3, help="contour cut epsilon (count)")
    p.add_argument("--preset", choices=("theorem", "fig10"), default="theorem",
                   help="half-disc radius for quasi-bound")
    p.add_argument("--figure", default=None, help="figure id for mode=figure (fig1..fig4, fig6..fig10)")
    p.add_argument("--set", action="append", default=[], metavar="KEY=JSON", help="figure parameter override")
    p.add_argument("--overrides", default=None, metavar="PATH", help="sidecar JSON whose params are reused")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None, metavar="PATH",
                   help="output file (scan) or directory (figure); scans go to stdout if omitted")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.mode == "figure":
            if not args.figure:
                raise UsageError("mode=figure needs --figure")
            overrides = {}
            if args.overrides:
                side = json.loads(Path(args.overrides).read_text())
                overrides.update(side.get("params", side))
            overrides.update(_parse_set(args.set))
            files = emit_figure(args.figure, args.out or ".", overrides, args.format, args.workers)
            for f in files:
                print(f)
            return EXIT_OK

        fixed = {"a": args.a}
        if args.z_minus is not None:
            fixed["z_minus"] = args.z_minus
        if args.z_plus is not None:
            fixed["z_plus"] = args.z_plus
        if args.grid is None and (args.z_minus is None or args.z_plus is None):
            raise UsageError("give --z-minus and --z-plus, or a --grid")
        grid = parse_grid(args.grid) if args.grid else None
        req = ScanRequest(args.mode, args.plane, grid, fixed, args.tol, args.eps, args.preset, args.workers)
        result = run_scan(req)
        if args.out:
            (write_csv if args.format == "csv" else write_json)(result, args.out)
        elif args.format == "csv":
            sys.stdout.write(csv_text(result.columns, result.rows))
        else:
            rows = [{c: _jsonable(r.get(c)) for c in result.columns} for r in result.rows]
            sys.stdout.write(json.dumps({"metadata": _jsonable(result.metadata), "rows": rows}, indent=1) + "\n")
        if any(r["status"] == "resolution-error" for r in result.rows):
            return EXIT_RESOLUTION
        return EXIT_OK
    except UsageError as exc:
        print(f"delta-spectra: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResolutionError as exc:
        print(f"delta-spectra: resolution error: {exc}", file=sys.stderr)
        return EXIT_RESOLUTION
    except DeltaSpectraError as exc:
        print(f"delta-spectra: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"delta-spectra: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
