"""Analytic photon-number moments of the dual-squeezing interferometer.

All functions broadcast over numpy arrays so the optimizers can evaluate whole
grids at once. The Heisenberg-picture coefficient algebra (``h`` and ``k``
coefficients) is exposed as well; it gives a second, operator-level route to
the same means.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import MAX_SQUEEZING, InterferometerConfig, InvalidParameterError, MomentSet


def _guard(*rs):
    for r in rs:
        r = np.asarray(r, dtype=float)
        if np.any(np.abs(r) > MAX_SQUEEZING):
            raise InvalidParameterError(
                f"squeezing beyond {MAX_SQUEEZING} overflows double precision")


def _half_angles(phi):
    phi = np.asarray(phi, dtype=float)
    return np.sin(phi / 2) ** 2, np.cos(phi / 2) ** 2, np.sin(phi)


# balanced case, r1 = r2 = r

def expected_ndiff_balanced(alpha, r, phi):
    """Mean photon-number difference <N_-> for r1 = r2 = r."""
    _guard(r)
    s2, c2, _ = _half_angles(phi)
    return alpha ** 2 * (s2 - c2 * np.exp(2 * r))


def variance_ndiff_balanced(alpha, r, phi):
    """Variance of N_- for r1 = r2 = r."""
    _guard(r)
    s2, c2, sp = _half_angles(phi)
    signal = s2 - c2 * np.exp(2 * r)
    return (alpha ** 2 * (signal ** 2 + sp ** 2 * np.cosh(r) ** 2)
            + c2 ** 2 * np.sinh(2 * r) ** 2)


def total_photons_balanced(alpha, r, phi):
    """Mean total output photon number <N_+> for r1 = r2 = r."""
    _guard(r)
    s2, c2, _ = _half_angles(phi)
    return alpha ** 2 * (s2 + c2 * np.exp(2 * r)) + c2 * (np.cosh(2 * r) - 1)


# unbalanced case

def expected_ndiff_unbalanced(alpha, r1, r2, phi):
    """Mean photon-number difference <N_-> for independent input/output squeezing."""
    _guard(r1, r2)
    s2, c2, _ = _half_angles(phi)
    return (alpha ** 2 * (s2 - c2 * np.exp(2 * r2))
            - s2 * np.sinh(r1 - r2) ** 2
            + 0.5 * c2 * (np.cosh(2 * r1) - np.cosh(2 * r2)))


def total_photons_unbalanced(alpha, r1, r2, phi):
    """Mean total output photon number <N_+> for independent squeezing."""
    _guard(r1, r2)
    s2, c2, _ = _half_angles(phi)
    return (alpha ** 2 * (s2 + c2 * np.exp(2 * r2))
            + s2 * np.sinh(r1 - r2) ** 2
            + 0.5 * c2 * (np.cosh(2 * r1) + np.cosh(2 * r2) - 2))


def variance_ndiff_unbalanced(alpha, r1, r2, phi):
    """Variance of N_- for independent input/output squeezing.

    The cos^4(phi/2) bracket carries sinh^2(2 r2) (output squeezing). Written
    with sinh^2(2 r1) instead, the expression still reduces correctly at
    r1 = r2 but disagrees with exact Gaussian and Fock-space evaluations by
    (cosh 4r2 - cosh 4r1) cos^4(phi/2) / 4 everywhere else.
    """
    _guard(r1, r2)
    s2, c2, sp = _half_angles(phi)
    coherent = ((np.exp(2 * r2) * c2 - s2) ** 2
                + 0.25 * (np.exp(2 * r2 - r1) + np.exp(-r1)) ** 2 * sp ** 2)
    quartic = (0.5 * np.sinh(2 * r2) ** 2
               + 2 * np.sinh(2 * r1 - r2) ** 2 * np.cosh(r2) ** 2)
    linear = np.cosh(r2) ** 2 - np.cosh(4 * r1 - 3 * r2) * np.cosh(r2)
    return (alpha ** 2 * coherent
            + quartic * c2 ** 2
            + linear * c2
            + np.sinh(r1 - r2) ** 2 * np.cosh(r2) ** 2 * sp ** 2
            + 0.25 * (np.cosh(4 * r1 - 4 * r2) - 1))


def dndiff_dphi_unbalanced(alpha, r1, r2, phi):
    """Analytic phase derivative of <N_-> (both cases; balanced when r1 = r2)."""
    _guard(r1, r2)
    phi = np.asarray(phi, dtype=float)
    slope = (alpha ** 2 * (1 + np.exp(2 * r2))
             - np.sinh(r1 - r2) ** 2
             - 0.5 * (np.cosh(2 * r1) - np.cosh(2 * r2)))
    return 0.5 * np.sin(phi) * slope


def closed_form_moments(cfg: InterferometerConfig) -> MomentSet:
    """Lossless moments of ``cfg`` from the analytic expressions."""
    args = (cfg.alpha, cfg.r1, cfg.r2, cfg.phi)
    return MomentSet(
        n_minus_mean=float(expected_ndiff_unbalanced(*args)),
        n_plus_mean=float(total_photons_unbalanced(*args)),
        n_minus_var=float(variance_ndiff_unbalanced(*args)),
        dn_minus_dphi=float(dndiff_dphi_unbalanced(*args)),
        path="closed_form",
    )


# Heisenberg-picture coefficient algebra

@dataclass(frozen=True)
class BalancedCoefficients:
    """Coefficients of N_- = h_- Jz + h1 Jy + h3 (K_bx - K_ax) and
    N_+ = h_+ Kz + h2 Ky + h3 (K_bx + K_ax) - 1."""

    h_plus: float
    h_minus: float
    h1: float
    h2: float
    h3: float


@dataclass(frozen=True)
class UnbalancedCoefficients:
    k1_plus: float
    k2_plus: float
    k3_plus: float
    k4_plus: float
    k5_plus: float
    k6_plus: float
    k1_minus: float
    k2_minus: float
    k3_minus: float
    k4_minus: float
    k5_minus: float
    k6_minus: float


def balanced_coefficients(r, phi) -> BalancedCoefficients:
    _guard(r)
    s2, c2, sp = (float(v) for v in _half_angles(phi))
    return BalancedCoefficients(
        h_plus=2 * (s2 + c2 * np.cosh(2 * r)),
        h_minus=2 * (s2 - c2 * np.cosh(2 * r)),
        h1=2 * sp * np.cosh(r),
        h2=2 * sp * np.sinh(r),
        h3=2 * c2 * np.sinh(2 * r),
    )


def unbalanced_coefficients(r1, r2, phi) -> UnbalancedCoefficients:
    _guard(r1, r2)
    s2, c2, sp = (float(v) for v in _half_angles(phi))
    d = r1 - r2
    k = {}
    for sign, tag in ((1, "plus"), (-1, "minus")):
        k[f"k1_{tag}"] = -2 * s2 * np.sinh(d) ** 2 + sign * c2 * (np.cosh(2 * r1) - np.cosh(2 * r2))
        k[f"k2_{tag}"] = 2 * s2 * np.cosh(d) ** 2 + sign * c2 * (np.cosh(2 * r1) + np.cosh(2 * r2))
        k[f"k3_{tag}"] = sign * 2 * c2 * np.sinh(2 * r2)
        k[f"k4_{tag}"] = 2 * (c2 * np.sinh(2 * r1) + sign * s2 * np.sinh(2 * d))
        k[f"k5_{tag}"] = sp * (np.cosh(r1) + sign * np.cosh(2 * r2 - r1))
        k[f"k6_{tag}"] = sp * (np.sinh(r1) + sign * np.sinh(2 * r2 - r1))
    return UnbalancedCoefficients(**{key: float(v) for key, v in k.items()})


def generator_means(alpha):
    """Expectation values of the SU(2)/SU(1,1) generators on |alpha, 0>.

    Mode b is vacuum, so only the generators diagonal in n_b or quadratic in
    mode a survive.
    """
    a2 = alpha ** 2
    return {
        "Jx": 0.0, "Jy": 0.0, "Jz": a2 / 2,
        "Kx": 0.0, "Ky": 0.0, "Kz": (a2 + 1) / 2,
        "Kax": a2 / 2, "Kay": 0.0, "Kaz": (2 * a2 + 1) / 4,
        "Kbx": 0.0, "Kby": 0.0, "Kbz": 0.25,
    }


def coefficient_means_balanced(alpha, r, phi):
    """(<N_->, <N_+>) assembled from the h coefficients and generator means."""
    h = balanced_coefficients(r, phi)
    g = generator_means(alpha)
    n_minus = h.h_minus * g["Jz"] + h.h1 * g["Jy"] + h.h3 * (g["Kbx"] - g["Kax"])
    n_plus = h.h_plus * g["Kz"] + h.h2 * g["Ky"] + h.h3 * (g["Kbx"] + g["Kax"]) - 1
    return n_minus, n_plus


def coefficient_means_unbalanced(alpha, r1, r2, phi):
    """(<N_->, <N_+>) assembled from the k coefficients and generator means."""
    k = unbalanced_coefficients(r1, r2, phi)
    g = generator_means(alpha)
    n_minus = (k.k1_plus * g["Kz"] + k.k2_minus * g["Jz"] + k.k3_minus * g["Kax"]
               + k.k4_minus * g["Kbx"] + k.k5_plus * g["Jy"] + k.k6_minus * g["Ky"])
    n_plus = (k.k2_plus * g["Kz"] + k.k1_minus * g["Jz"] + k.k3_plus * g["Kax"]
              + k.k4_plus * g["Kbx"] + k.k5_minus * g["Jy"] + k.k6_plus * g["Ky"] - 1)
    return n_minus, n_plus
