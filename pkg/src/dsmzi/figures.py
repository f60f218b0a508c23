"""Tabulated curves for the standard figure presets and for ad-hoc sweeps.

A table is a header plus rows of floats (``None`` for an absent optimum).
All presets use alpha = sqrt(10) and efficiencies 1, 0.9 and 0.8.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import InterferometerConfig
from .optimize import CurvePoint, SweepSpec, sweep

ALPHA = math.sqrt(10)
ETAS = (1.0, 0.9, 0.8)
R_POINTS = 151
R1_FIG4A = 1.87
R2_MAX_FIG4A = 6.0
R1_GRID = tuple(np.round(np.linspace(0.1, 2.5, 25), 10))


@dataclass
class Table:
    header: list
    rows: list
    divergences: int = 0


def _scaled_detection(point: CurvePoint):
    return point.report.scaled


def _scaled_bound(point: CurvePoint):
    return math.sqrt(point.report.n_bar) * point.report.delta_phi_bound


def _count(points):
    return sum(p.report.diverged for p in points)


def caves_singularity(alpha=ALPHA):
    """Squeezing at which alpha^2 = sinh^2 r, where the r2 = 0 slope vanishes."""
    return math.asinh(alpha)


def _r_spec(eta, balanced, optimize_phase):
    fixed = InterferometerConfig(ALPHA, 0.0, 0.0, math.pi / 2, eta)
    return SweepSpec("r", 0.0, 3.0, R_POINTS, fixed,
                     frozenset({"phi"}) if optimize_phase else frozenset(),
                     balanced=balanced, extra=(caves_singularity(),))


def fig2(workers=1) -> Table:
    """Caves scheme at phi = pi/2, balanced scheme at its optimal phase, and the bound."""
    caves = sweep(_r_spec(1.0, False, False), workers)
    ds = sweep(_r_spec(1.0, True, True), workers)
    rows = [[c.x, _scaled_detection(c), _scaled_detection(d), _scaled_bound(d), d.phi_opt]
            for c, d in zip(caves, ds)]
    return Table(["r", "scaled_caves", "scaled_ds", "scaled_bound", "phi_opt_ds"], rows,
                 _count(caves) + _count(ds))


def fig3(workers=1) -> Table:
    """As fig2 for each detection efficiency."""
    caves = [sweep(_r_spec(eta, False, False), workers) for eta in ETAS]
    ds = [sweep(_r_spec(eta, True, True), workers) for eta in ETAS]
    header = (["r"] + [f"scaled_caves_eta{eta}" for eta in ETAS]
              + [f"scaled_ds_eta{eta}" for eta in ETAS] + [f"phi_opt_ds_eta{eta}" for eta in ETAS])
    rows = []
    for i, point in enumerate(caves[0]):
        rows.append([point.x] + [c[i].report.scaled for c in caves]
                    + [d[i].report.scaled for d in ds] + [d[i].phi_opt for d in ds])
    return Table(header, rows, sum(map(_count, caves)) + sum(map(_count, ds)))


def fig4a(workers=1) -> Table:
    """Output-squeezing sweep at fixed input squeezing, phase optimized per point."""
    curves = []
    for eta in ETAS:
        fixed = InterferometerConfig(ALPHA, R1_FIG4A, 0.0, math.pi / 2, eta)
        spec = SweepSpec("r2", 0.0, R2_MAX_FIG4A, 301, fixed, frozenset({"phi"}))
        curves.append(sweep(spec, workers))
    header = (["r2"] + [f"scaled_eta{eta}" for eta in ETAS]
              + [f"phi_opt_eta{eta}" for eta in ETAS] + ["scaled_bound"])
    rows = []
    for i, point in enumerate(curves[0]):
        rows.append([point.x] + [c[i].report.scaled for c in curves]
                    + [c[i].phi_opt for c in curves] + [_scaled_bound(point)])
    return Table(header, rows, sum(map(_count, curves)))


def _joint_curves(workers):
    curves = []
    for eta in ETAS:
        fixed = InterferometerConfig(ALPHA, 0.0, 0.0, math.pi / 2, eta)
        spec = SweepSpec("r", R1_GRID[0], R1_GRID[-1], len(R1_GRID), fixed, frozenset({"r2"}))
        curves.append(sweep(spec, workers))
    return curves


def fig4b(workers=1) -> Table:
    """Optimal output squeezing against input squeezing."""
    curves = _joint_curves(workers)
    rows = [[p.x] + [c[i].r2_opt for c in curves] for i, p in enumerate(curves[0])]
    return Table(["r1"] + [f"r2_opt_eta{eta}" for eta in ETAS], rows, sum(map(_count, curves)))


def fig4c(workers=1) -> Table:
    """Optimal phase for the balanced scheme and under joint optimization."""
    fixed = InterferometerConfig(ALPHA, 0.0, 0.0, math.pi / 2, 1.0)
    balanced = sweep(SweepSpec("r", R1_GRID[0], R1_GRID[-1], len(R1_GRID), fixed,
                               frozenset({"phi"}), balanced=True), workers)
    curves = _joint_curves(workers)
    rows = [[p.x, p.phi_opt] + [c[i].phi_opt for c in curves] for i, p in enumerate(balanced)]
    header = ["r1", "phi_opt_balanced"] + [f"phi_opt_eta{eta}" for eta in ETAS]
    return Table(header, rows, _count(balanced) + sum(map(_count, curves)))


PRESETS = {"fig2": fig2, "fig3": fig3, "fig4a": fig4a, "fig4b": fig4b, "fig4c": fig4c}


def sweep_table(spec: SweepSpec, workers=1) -> Table:
    """Generic curve: one row per point with the full report."""
    points = sweep(spec, workers)
    header = [spec.variable, "delta_phi_detection", "delta_phi_bound", "scaled",
              "saturability", "diverged", "phi_opt", "r2_opt"]
    rows = [[p.x, p.report.delta_phi_detection, p.report.delta_phi_bound, p.report.scaled,
             p.report.saturability, p.report.diverged, p.phi_opt, p.r2_opt] for p in points]
    return Table(header, rows, _count(points))


def format_value(value) -> str:
    """12 significant digits; ``inf`` for divergence, empty for an absent value."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    return "%.12g" % value


def to_csv(table: Table) -> str:
    lines = [",".join(table.header)]
    lines += [",".join(format_value(v) for v in row) for row in table.rows]
    return "\n".join(lines) + "\n"
