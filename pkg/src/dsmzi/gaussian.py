"""Two-mode Gaussian phase-space model of the interferometer.

Quadratures are ordered (x_a, p_a, x_b, p_b). Covariance matrices are scaled
so the vacuum is the identity; mean vectors use x = (a + a^dag)/sqrt(2), so a
coherent amplitude alpha sits at sqrt(2) alpha. The physical (symmetrized)
quadrature covariance is therefore ``cov / 2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import InterferometerConfig, InvalidParameterError, MomentSet, NumericalDegeneracyError

OMEGA = np.array([[0.0, 1.0, 0.0, 0.0],
                  [-1.0, 0.0, 0.0, 0.0],
                  [0.0, 0.0, 0.0, 1.0],
                  [0.0, 0.0, -1.0, 0.0]])

SYMMETRY_TOL = 1e-12
PD_TOL = 1e-10

_MODE_SLICE = {"a": slice(0, 2), "b": slice(2, 4)}


def check_covariance(cov, tol=PD_TOL):
    """Raise ``ValueError`` unless ``cov`` is a valid 4x4 covariance matrix."""
    cov = np.asarray(cov, dtype=float)
    if cov.shape != (4, 4):
        raise ValueError(f"covariance must be 4x4, got {cov.shape}")
    if not np.all(np.isfinite(cov)):
        raise ValueError("covariance has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(cov))))
    if np.max(np.abs(cov - cov.T)) > SYMMETRY_TOL * scale:
        raise ValueError("covariance is not symmetric")
    if np.linalg.eigvalsh(cov).min() <= -tol * scale:
        raise ValueError("covariance is not positive definite")
    # uncertainty relation sigma + i Omega >= 0 (vacuum-normalized units)
    if np.linalg.eigvalsh(cov + 1j * OMEGA).min() < -tol * scale:
        raise ValueError("covariance violates the uncertainty relation")


@dataclass(frozen=True)
class SymplecticTransform:
    matrix: np.ndarray
    displacement: np.ndarray = field(default_factory=lambda: np.zeros(4))

    def symplectic_residual(self):
        """max |F Omega F^T - Omega|."""
        F = self.matrix
        return float(np.max(np.abs(F @ OMEGA @ F.T - OMEGA)))

    def __matmul__(self, other: "SymplecticTransform") -> "SymplecticTransform":
        return SymplecticTransform(self.matrix @ other.matrix,
                                   self.matrix @ other.displacement + self.displacement)


@dataclass(frozen=True)
class GaussianState:
    cov: np.ndarray
    mean: np.ndarray

    def __post_init__(self):
        check_covariance(self.cov)
        mean = np.asarray(self.mean, dtype=float)
        if mean.shape != (4,) or not np.all(np.isfinite(mean)):
            raise ValueError("mean must be 4 finite numbers")

    @classmethod
    def vacuum(cls):
        return cls(np.eye(4), np.zeros(4))

    @classmethod
    def coherent(cls, alpha):
        """|alpha, 0>: coherent state in mode a, vacuum in mode b."""
        return cls(np.eye(4), np.array([np.sqrt(2) * alpha, 0.0, 0.0, 0.0]))


@dataclass(frozen=True)
class ModeMarginal:
    cov2: np.ndarray
    mean2: np.ndarray
    mode_label: str


def symplectic_squeezer(r) -> SymplecticTransform:
    """Single-mode squeezer on mode b: x_b -> e^r x_b, p_b -> e^-r p_b."""
    if not np.isfinite(r):
        raise InvalidParameterError(f"squeezing must be finite, got {r!r}")
    return SymplecticTransform(np.diag([1.0, 1.0, np.exp(r), np.exp(-r)]))


_BS = np.array([[1.0, 0.0, 1.0, 0.0],
                [0.0, 1.0, 0.0, 1.0],
                [-1.0, 0.0, 1.0, 0.0],
                [0.0, -1.0, 0.0, 1.0]]) / np.sqrt(2)


def symplectic_beamsplitter() -> SymplecticTransform:
    """50:50 beam splitter a -> (a + b)/sqrt2, b -> (b - a)/sqrt2."""
    return SymplecticTransform(_BS.copy())


def symplectic_phase(phi) -> SymplecticTransform:
    """Rotation by +phi/2 on mode a and -phi/2 on mode b."""
    if not np.isfinite(phi):
        raise InvalidParameterError(f"phase must be finite, got {phi!r}")
    c, s = np.cos(phi / 2), np.sin(phi / 2)
    return SymplecticTransform(np.array([[c, -s, 0.0, 0.0],
                                         [s, c, 0.0, 0.0],
                                         [0.0, 0.0, c, s],
                                         [0.0, 0.0, -s, c]]))


def evolve(state: GaussianState, t: SymplecticTransform) -> GaussianState:
    F = t.matrix
    cov = F @ state.cov @ F.T
    # remove roundoff asymmetry so long chains keep validating
    cov = 0.5 * (cov + cov.T)
    return GaussianState(cov, F @ state.mean + t.displacement)


def ds_mzi_chain(cfg: InterferometerConfig) -> list[SymplecticTransform]:
    """Elements in the order light meets them: S1, B, U, B, S2."""
    bs = symplectic_beamsplitter()
    return [symplectic_squeezer(cfg.r1), bs, symplectic_phase(cfg.phi), bs,
            symplectic_squeezer(cfg.r2)]


def ds_mzi_output(cfg: InterferometerConfig) -> GaussianState:
    """Lossless output state for input |alpha, 0>; ``cfg.eta`` is ignored."""
    state = GaussianState.coherent(cfg.alpha)
    for t in ds_mzi_chain(cfg):
        state = evolve(state, t)
    return state


def mode_marginal(state: GaussianState, mode: str) -> ModeMarginal:
    if mode not in _MODE_SLICE:
        raise ValueError(f"mode must be 'a' or 'b', got {mode!r}")
    sl = _MODE_SLICE[mode]
    return ModeMarginal(state.cov[sl, sl].copy(), state.mean[sl].copy(), mode)


def wigner_value(m: ModeMarginal, x, p):
    """Single-mode Gaussian Wigner function of the marginal, vectorized in (x, p).

    Evaluated with ``cov2`` directly as the density covariance, so the vacuum
    peaks at 1/(2 pi).
    """
    cov = np.asarray(m.cov2, dtype=float)
    det = np.linalg.det(cov)
    if not det > 1e-300 or np.linalg.cond(cov) > 1e14:
        raise NumericalDegeneracyError("marginal covariance is singular")
    inv = np.linalg.inv(cov)
    dx = np.asarray(x, dtype=float) - m.mean2[0]
    dp = np.asarray(p, dtype=float) - m.mean2[1]
    quad = inv[0, 0] * dx ** 2 + 2 * inv[0, 1] * dx * dp + inv[1, 1] * dp ** 2
    return np.exp(-0.5 * quad) / (2 * np.pi * np.sqrt(det))


def mode_intensity(m: ModeMarginal) -> float:
    """I = <n> + 1/2: half the second moment of the physical quadratures."""
    return 0.5 * (0.5 * (m.cov2[0, 0] + m.cov2[1, 1]) + float(m.mean2 @ m.mean2))


def _number_moments(cov, mean):
    """Means, variances and covariance of (n_a, n_b) for a Gaussian state.

    With V the physical covariance and m the mean, n = (|q|^2 - 1)/2 per mode;
    Isserlis' theorem gives
        Var(n_k)      = (tr V_kk^2 - 1/2)/2 + m_k^T V_kk m_k
        Cov(n_a, n_b) = sum(V_ab**2)/2     + m_a^T V_ab m_b.
    """
    V = 0.5 * np.asarray(cov, dtype=float)
    m = np.asarray(mean, dtype=float)
    blocks = {(i, j): V[2 * i:2 * i + 2, 2 * j:2 * j + 2] for i in (0, 1) for j in (0, 1)}
    ms = (m[0:2], m[2:4])
    n = [0.5 * (np.trace(blocks[k, k]) + ms[k] @ ms[k] - 1) for k in (0, 1)]
    var = [0.5 * (np.trace(blocks[k, k] @ blocks[k, k]) - 0.5) + ms[k] @ blocks[k, k] @ ms[k]
           for k in (0, 1)]
    cov_ab = 0.5 * np.sum(blocks[0, 1] ** 2) + ms[0] @ blocks[0, 1] @ ms[1]
    return n, var, cov_ab


def gaussian_photon_moments(state: GaussianState) -> MomentSet:
    """<N_->, <N_+>, Var(N_-) of ``state`` from its first and second moments."""
    n, var, cov_ab = _number_moments(state.cov, state.mean)
    return MomentSet(
        n_minus_mean=float(n[0] - n[1]),
        n_plus_mean=float(n[0] + n[1]),
        n_minus_var=float(var[0] + var[1] - 2 * cov_ab),
        dn_minus_dphi=None,
        path="gaussian",
    )


def ds_mzi_moments(cfg: InterferometerConfig) -> MomentSet:
    """Moments of the output state plus d<N_->/dphi from the differentiated chain."""
    moments = gaussian_photon_moments(ds_mzi_output(cfg))
    S1 = symplectic_squeezer(cfg.r1).matrix
    S2 = symplectic_squeezer(cfg.r2).matrix
    c, s = np.cos(cfg.phi / 2), np.sin(cfg.phi / 2)
    dU = 0.5 * np.array([[-s, -c, 0.0, 0.0],
                         [c, -s, 0.0, 0.0],
                         [0.0, 0.0, -s, c],
                         [0.0, 0.0, -c, -s]])
    F = S2 @ _BS @ symplectic_phase(cfg.phi).matrix @ _BS @ S1
    dF = S2 @ _BS @ dU @ _BS @ S1
    m0 = GaussianState.coherent(cfg.alpha).mean
    mean, dmean = F @ m0, dF @ m0
    dcov = dF @ F.T + F @ dF.T
    # N_- = I_a - I_b is linear in cov and quadratic in the mean
    sign = np.array([1.0, 1.0, -1.0, -1.0])
    derivative = 0.25 * float(np.sum(sign * np.diag(dcov))) + float(np.sum(sign * mean * dmean))
    return MomentSet(moments.n_minus_mean, moments.n_plus_mean, moments.n_minus_var,
                     derivative, "gaussian")
