"""Working-point and squeezing optimization, parameter sweeps and offset fits.

Every search is derivative-free: a vectorized coarse grid locates the basin
and golden-section search refines it. The objective has divergence walls
(zero slope at phi in {0, pi}, and along alpha^2 = sinh^2 r for r2 = 0), which
bracketing handles without special cases.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import bisect

from .config import InterferometerConfig, InvalidParameterError, OptimizationError
from .sensitivity import SensitivityReport, delta_phi_grid, phase_sensitivity_noisy

PHI_LO = 0.01
PHI_HI = math.pi - 1e-6
PHI_POINTS = 401
PHI_TOL = 1e-10

R2_COARSE_STEP = 0.05
R2_FINE_STEP = 0.01
R2_TOL = 1e-6
R2_SPAN = 3.0

_INVGOLD = (math.sqrt(5) - 1) / 2


def golden_section(f, lo, hi, tol=1e-10, max_iter=200):
    """Minimize a unimodal scalar function on [lo, hi].

    Returns
    -------
    x, fx : float
        The best abscissa visited and its objective value.
    """
    if not lo < hi:
        raise ValueError(f"empty bracket [{lo}, {hi}]")
    a, b = float(lo), float(hi)
    c = b - _INVGOLD * (b - a)
    d = a + _INVGOLD * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVGOLD * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVGOLD * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def phase_grid():
    return np.linspace(PHI_LO, PHI_HI, PHI_POINTS)


def optimal_phase(alpha, r1, r2, eta=1.0):
    """Working point minimizing the detection sensitivity over phi.

    Parameters
    ----------
    alpha, r1, r2, eta : float
        Configuration without its phase.

    Returns
    -------
    phi_opt : float
    report : SensitivityReport
        Evaluated at ``phi_opt`` with efficiency ``eta``.

    Raises
    ------
    OptimizationError
        If the sensitivity diverges at every grid phase.
    """
    # validates the parameters before any numerics
    InterferometerConfig(alpha, r1, r2, math.pi / 2, eta)
    grid = phase_grid()
    values = delta_phi_grid(alpha, r1, r2, grid, eta)
    if not np.any(np.isfinite(values)):
        raise OptimizationError(
            f"sensitivity diverges for every phase (alpha={alpha}, r1={r1}, r2={r2})")
    i = int(np.argmin(values))  # first minimum: ties go to the smaller phase
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]

    def objective(phi):
        return float(delta_phi_grid(alpha, r1, r2, phi, eta))

    phi_opt, best = golden_section(objective, lo, hi, PHI_TOL)
    if not best <= values[i]:
        phi_opt = float(grid[i])
    cfg = InterferometerConfig(alpha, r1, r2, phi_opt, eta)
    return phi_opt, phase_sensitivity_noisy(cfg)


def asymptotic_phase_opt(r):
    """2 arctan (e^{2r} + e^{4r})^{1/4}, the working point when alpha^2 ~ sinh^2 r."""
    return 2 * np.arctan((np.exp(2 * r) + np.exp(4 * r)) ** 0.25)


def _best_over_phase(alpha, r1, r2_values, eta):
    grid = phase_grid()
    values = delta_phi_grid(alpha, r1, np.asarray(r2_values)[:, None], grid[None, :], eta)
    return values.min(axis=1)


def optimal_r2(alpha, r1, eta=1.0, r2_max=None):
    """Joint minimization over output squeezing and phase.

    The outer search over r2 in [0, r1 + 3] runs a coarse grid (step 0.05,
    phase minimized on the 401-point grid), a fine scan (step 0.01) around the
    coarse minimum with the phase fully optimized, and golden-section
    refinement between the fine neighbours.

    Returns
    -------
    r2_opt, phi_opt : float
    report : SensitivityReport
    """
    hi = r1 + R2_SPAN if r2_max is None else float(r2_max)
    InterferometerConfig(alpha, r1, hi, math.pi / 2, eta)
    coarse = np.linspace(0.0, hi, max(int(round(hi / R2_COARSE_STEP)), 2) + 1)
    best = _best_over_phase(alpha, r1, coarse, eta)
    if not np.any(np.isfinite(best)):
        raise OptimizationError(f"sensitivity diverges for every r2 (alpha={alpha}, r1={r1})")
    center = coarse[int(np.argmin(best))]

    def inner(r2):
        try:
            return optimal_phase(alpha, r1, r2, eta)[1].delta_phi_detection
        except OptimizationError:
            return math.inf

    step = coarse[1] - coarse[0]
    fine = np.arange(max(center - step, 0.0), min(center + step, hi) + 1e-12, R2_FINE_STEP)
    fine_values = [inner(r2) for r2 in fine]
    j = int(np.argmin(fine_values))
    lo_r2 = fine[max(j - 1, 0)]
    hi_r2 = fine[min(j + 1, len(fine) - 1)]
    r2_opt = float(fine[j])
    if hi_r2 > lo_r2:
        r2_ref, value = golden_section(inner, lo_r2, hi_r2, R2_TOL)
        if value <= fine_values[j]:
            r2_opt = r2_ref
    phi_opt, report = optimal_phase(alpha, r1, r2_opt, eta)
    return r2_opt, phi_opt, report


def _lagrange_alpha2(r):
    return (math.exp(2 * r) - 1) * math.sinh(2 * r) / (2 * math.exp(2 * r))


def optimal_alpha_split(n_bar):
    """Split ``n_bar`` photons between coherent and squeezed light.

    Solves alpha^2 + sinh^2 r = n_bar together with the stationarity condition
    alpha^2 = (e^{2r} - 1) sinh 2r / (2 e^{2r}) by bisection on r.

    Returns
    -------
    alpha, r : float
    """
    if not n_bar > 0 or not math.isfinite(n_bar):
        raise InvalidParameterError(f"n_bar must be positive and finite, got {n_bar}")

    def residual(r):
        return _lagrange_alpha2(r) + math.sinh(r) ** 2 - n_bar

    r = bisect(residual, 0.0, math.asinh(math.sqrt(n_bar)), xtol=1e-15, rtol=1e-15, maxiter=500)
    alpha = math.sqrt(max(n_bar - math.sinh(r) ** 2, 0.0))
    return alpha, r


def plateau_sensitivity(r1):
    """Large-r2 plateau of the scaled sensitivity and its working point.

    The constants belong to alpha = sqrt(10); there is no general-alpha form.

    Returns
    -------
    scaled, phi : float
    """
    scaled = 5 * math.sqrt(19 + math.cosh(2 * r1)) / (20 * math.exp(r1) + math.sinh(r1))
    return scaled, 2 * math.atan(3 * math.exp(r1))


VARIABLES = ("r", "r2", "phi", "alpha")
OPTIMIZABLE = ("phi", "r2")


@dataclass(frozen=True)
class SweepSpec:
    """A one-parameter curve.

    ``variable`` is one of ``r`` (input squeezing, and also the output
    squeezing when ``balanced``), ``r2``, ``phi`` or ``alpha``. Fields of
    ``fixed`` not being swept or optimized are held constant. ``extra`` adds
    points to the linear grid, e.g. a known singularity.
    """

    variable: str
    lo: float
    hi: float
    points: int
    fixed: InterferometerConfig
    optimize_over: frozenset = field(default_factory=frozenset)
    balanced: bool = False
    extra: tuple = ()

    def __post_init__(self):
        if self.variable not in VARIABLES:
            raise InvalidParameterError(f"variable must be one of {VARIABLES}, got {self.variable!r}")
        if not self.lo < self.hi:
            raise InvalidParameterError(f"need lo < hi, got [{self.lo}, {self.hi}]")
        if int(self.points) != self.points or self.points < 2:
            raise InvalidParameterError(f"points must be an integer >= 2, got {self.points}")
        bad = set(self.optimize_over) - set(OPTIMIZABLE)
        if bad:
            raise InvalidParameterError(f"cannot optimize over {sorted(bad)}")
        if self.variable in self.optimize_over:
            raise InvalidParameterError("the swept variable cannot also be optimized")
        if "r2" in self.optimize_over and self.balanced:
            raise InvalidParameterError("balanced sweeps fix r2 = r1")
        object.__setattr__(self, "optimize_over", frozenset(self.optimize_over))

    def xs(self):
        grid = np.linspace(self.lo, self.hi, int(self.points))
        return np.unique(np.concatenate([grid, np.asarray(self.extra, dtype=float)]))

    def config_at(self, x) -> InterferometerConfig:
        x = float(x)
        if self.variable == "r":
            changes = {"r1": x, "r2": x} if self.balanced else {"r1": x}
        else:
            changes = {self.variable: x}
            if self.balanced and self.variable == "r2":
                changes["r1"] = x
        return self.fixed.with_(**changes)


@dataclass(frozen=True)
class CurvePoint:
    x: float
    report: SensitivityReport
    phi_opt: Optional[float] = None
    r2_opt: Optional[float] = None


def evaluate_point(spec: SweepSpec, x) -> CurvePoint:
    cfg = spec.config_at(x)
    try:
        if "r2" in spec.optimize_over:
            r2_opt, phi_opt, report = optimal_r2(cfg.alpha, cfg.r1, cfg.eta)
            return CurvePoint(float(x), report, phi_opt, r2_opt)
        if "phi" in spec.optimize_over:
            phi_opt, report = optimal_phase(cfg.alpha, cfg.r1, cfg.r2, cfg.eta)
            return CurvePoint(float(x), report, phi_opt, None)
    except OptimizationError:
        # diverges for every phase, so the template phase is as good as any
        return CurvePoint(float(x), phase_sensitivity_noisy(cfg), None, None)
    return CurvePoint(float(x), phase_sensitivity_noisy(cfg), None, None)


def sweep(spec: SweepSpec, workers: int = 1) -> list[CurvePoint]:
    """Evaluate ``spec`` point by point; results are ordered by x.

    Divergent points come back flagged (``report.diverged``) rather than
    raising. With ``workers > 1`` points run in separate processes; each point
    is computed independently so the output does not depend on ``workers``.
    """
    xs = spec.xs()
    if workers <= 1 or len(xs) < 2:
        return [evaluate_point(spec, x) for x in xs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(evaluate_point, [spec] * len(xs), xs))


def fit_offset(r1_values, r2_opt_values):
    """Least-squares offset for r2_opt = r1 + delta.

    Returns
    -------
    delta : float
    rms : float
        Root-mean-square residual of the fit.
    """
    r1 = np.asarray(r1_values, dtype=float)
    r2 = np.asarray(r2_opt_values, dtype=float)
    if r1.shape != r2.shape or r1.ndim != 1:
        raise ValueError("r1 and r2_opt must be 1-D arrays of equal length")
    if len(r1) < 3:
        raise ValueError(f"need at least 3 points to fit an offset, got {len(r1)}")
    if np.any(r1 <= 1):
        raise ValueError("the linear-offset regime requires r1 > 1")
    gaps = r2 - r1
    delta = float(gaps.mean())
    return delta, float(np.sqrt(np.mean((gaps - delta) ** 2)))
