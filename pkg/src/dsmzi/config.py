"""Shared records: the interferometer configuration, moment sets and errors."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

# Hyperbolic functions of 4r appear in the variance; beyond this the moments
# lose all relative precision in double arithmetic.
MAX_SQUEEZING = 20.0

PATHS = ("closed_form", "gaussian", "fock")


class InvalidParameterError(ValueError):
    """A physical parameter lies outside its admissible domain."""


class TruncationError(RuntimeError):
    """The truncated Fock basis is too small for the requested state."""


class NumericalDegeneracyError(ArithmeticError):
    """A matrix that must be invertible is (numerically) singular."""


class OptimizationError(RuntimeError):
    """A bracketed search found no finite objective value."""


def _finite(name, value):
    if not math.isfinite(value):
        raise InvalidParameterError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class InterferometerConfig:
    """Physical parameters of the dual-squeezing interferometer.

    Parameters
    ----------
    alpha : float
        Real coherent amplitude injected into mode a.
    r1 : float
        Input squeezing on mode b (before the first beam splitter).
    r2 : float
        Output squeezing on mode b (after the second beam splitter).
        ``r2 = 0`` is the conventional coherent-plus-squeezed-vacuum scheme.
    phi : float
        Phase difference between the arms, radians. Not reduced mod 2 pi.
    eta : float
        Detection efficiency, identical for both detectors.
    """

    alpha: float
    r1: float
    r2: float
    phi: float
    eta: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "r1", "r2", "phi", "eta"):
            _finite(name, getattr(self, name))
        if self.alpha < 0:
            raise InvalidParameterError(f"alpha must be >= 0, got {self.alpha}")
        for name in ("r1", "r2"):
            value = getattr(self, name)
            if value < 0:
                raise InvalidParameterError(f"{name} must be >= 0, got {value}")
            if value > MAX_SQUEEZING:
                raise InvalidParameterError(
                    f"{name}={value} exceeds the overflow guard {MAX_SQUEEZING}")
        if not 0 < self.eta <= 1:
            raise InvalidParameterError(f"eta must lie in (0, 1], got {self.eta}")

    @classmethod
    def balanced(cls, alpha, r, phi, eta=1.0):
        return cls(alpha=alpha, r1=r, r2=r, phi=phi, eta=eta)

    def with_(self, **changes) -> "InterferometerConfig":
        return replace(self, **changes)

    @property
    def n_bar(self) -> float:
        """Input photon resources, alpha^2 + sinh^2 r1 (the output squeezer is excluded)."""
        return self.alpha ** 2 + math.sinh(self.r1) ** 2

    def as_dict(self):
        return {"alpha": self.alpha, "r1": self.r1, "r2": self.r2,
                "phi": self.phi, "eta": self.eta}


@dataclass(frozen=True)
class MomentSet:
    """Photon-number moments of the detected observables for one configuration.

    ``dn_minus_dphi`` is ``None`` for paths that only see a single state.
    """

    n_minus_mean: float
    n_plus_mean: float
    n_minus_var: float
    dn_minus_dphi: Optional[float]
    path: str

    def __post_init__(self):
        if self.path not in PATHS:
            raise ValueError(f"unknown computation path {self.path!r}")

    def as_tuple(self):
        return (self.n_minus_mean, self.n_plus_mean, self.n_minus_var)
