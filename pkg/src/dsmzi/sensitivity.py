"""Error-propagation phase sensitivity, the quantum Cramer-Rao bound and
derived figures of merit."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import closed_form as cf
from .config import InterferometerConfig, InvalidParameterError

# relative to max(1, alpha^2); the slope is compared against this near its zero
DIVERGENCE_REL = 1e-12


@dataclass(frozen=True)
class SensitivityReport:
    delta_phi_detection: float  # math.inf when diverged
    delta_phi_bound: float
    scaled: float
    saturability: float
    n_bar: float
    config: InterferometerConfig
    diverged: bool

    def as_dict(self):
        return {
            "delta_phi_detection": self.delta_phi_detection,
            "delta_phi_bound": self.delta_phi_bound,
            "scaled": self.scaled,
            "saturability": self.saturability,
            "n_bar": self.n_bar,
            "diverged": self.diverged,
            "config": self.config.as_dict(),
        }


def divergence_threshold(alpha):
    return DIVERGENCE_REL * np.maximum(1.0, np.asarray(alpha, dtype=float) ** 2)


def dndiff_dphi(cfg: InterferometerConfig) -> float:
    return float(cf.dndiff_dphi_unbalanced(cfg.alpha, cfg.r1, cfg.r2, cfg.phi))


def delta_phi_grid(alpha, r1, r2, phi, eta=1.0):
    """Vectorized detection sensitivity; ``inf`` wherever the slope vanishes.

    All arguments broadcast against each other.
    """
    eta = np.asarray(eta, dtype=float)
    if np.any(eta <= 0) or np.any(eta > 1):
        raise InvalidParameterError("eta must lie in (0, 1]")
    var = cf.variance_ndiff_unbalanced(alpha, r1, r2, phi)
    noise = (1 - eta) / eta * cf.total_photons_unbalanced(alpha, r1, r2, phi)
    slope = np.abs(cf.dndiff_dphi_unbalanced(alpha, r1, r2, phi))
    diverged = slope < divergence_threshold(alpha)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.sqrt(np.maximum(var + noise, 0.0)) / slope
    return np.where(diverged, np.inf, out)


def qcrb_bound(alpha, r1) -> float:
    """Phase-independent ultimate sensitivity for coherent + squeezed-vacuum input."""
    fisher = alpha ** 2 * math.exp(2 * r1) + math.sinh(r1) ** 2
    return math.inf if fisher == 0 else 1 / math.sqrt(fisher)


def balanced_closed_form(alpha, r, phi):
    """The compact balanced expression 2 g cosh r / (alpha (1 + e^{2r})).

    Pulling alpha^2 sin^2 phi cosh^2 r out of the variance leaves g^2, so one
    power of cosh r survives. Writing cosh^2 r here instead would only agree
    with the error-propagation ratio at r = 0.
    """
    s2, c2 = np.sin(phi / 2) ** 2, np.cos(phi / 2) ** 2
    sp2 = np.sin(phi) ** 2
    ch2 = np.cosh(r) ** 2
    g = np.sqrt(1 + (np.exp(2 * r) * c2 - s2) ** 2 / (ch2 * sp2)
                + np.sinh(2 * r) ** 2 * c2 ** 2 / (alpha ** 2 * ch2 * sp2))
    return 2 * g * np.cosh(r) / (alpha * (1 + np.exp(2 * r)))


def _report(cfg: InterferometerConfig, eta: float) -> SensitivityReport:
    detection = float(delta_phi_grid(cfg.alpha, cfg.r1, cfg.r2, cfg.phi, eta))
    bound = qcrb_bound(cfg.alpha, cfg.r1)
    diverged = math.isinf(detection)
    n_bar = cfg.n_bar
    if diverged or math.isinf(bound):
        sat = 0.0
    else:
        sat = bound / detection
    return SensitivityReport(
        delta_phi_detection=detection,
        delta_phi_bound=bound,
        scaled=math.sqrt(n_bar) * detection,
        saturability=sat,
        n_bar=n_bar,
        config=cfg,
        diverged=diverged,
    )


def phase_sensitivity(cfg: InterferometerConfig) -> SensitivityReport:
    """Sensitivity with ideal detectors (``cfg.eta`` is not used)."""
    return _report(cfg, 1.0)


def phase_sensitivity_noisy(cfg: InterferometerConfig) -> SensitivityReport:
    """Sensitivity with detection efficiency ``cfg.eta`` on both detectors."""
    return _report(cfg, cfg.eta)


def scaled_sensitivity(report: SensitivityReport, which: str = "detection") -> float:
    """sqrt(n_bar) times the detection (or bound) sensitivity; 1 is shot noise."""
    value = {"detection": report.delta_phi_detection,
             "bound": report.delta_phi_bound}[which]
    return math.sqrt(report.n_bar) * value


def saturability(cfg: InterferometerConfig) -> float:
    """Bound over detection sensitivity at efficiency ``cfg.eta``; 0 when diverged."""
    return phase_sensitivity_noisy(cfg).saturability
