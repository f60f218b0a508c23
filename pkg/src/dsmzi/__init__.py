"""Phase sensitivity of a Mach-Zehnder interferometer with squeezing before
the first beam splitter and on one output port.

Three independent routes compute the photon-number moments: closed-form
expressions (:mod:`dsmzi.closed_form`), Gaussian phase space
(:mod:`dsmzi.gaussian`) and brute-force Fock-space evolution
(:mod:`dsmzi.fock`).
"""

__version__ = "0.1.0"

from .config import (InterferometerConfig, InvalidParameterError, MomentSet,
                     NumericalDegeneracyError, OptimizationError, TruncationError)
from .sensitivity import SensitivityReport, phase_sensitivity, phase_sensitivity_noisy, qcrb_bound

__all__ = [
    "InterferometerConfig", "MomentSet", "SensitivityReport",
    "InvalidParameterError", "TruncationError", "NumericalDegeneracyError", "OptimizationError",
    "phase_sensitivity", "phase_sensitivity_noisy", "qcrb_bound",
]
