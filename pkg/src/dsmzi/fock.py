"""Brute-force oracle: exact evolution in a truncated two-mode Fock basis.

Only meant for small amplitudes and squeezing (alpha <~ 1.5, r <~ 1); it exists
to check the analytic and phase-space paths, not to be fast.

Operators are produced by exponentiating generators and then projecting onto
the kept levels 0..cutoff. The projection is not unitary, so any probability
pushed above the cutoff shows up as norm loss, which is recorded on the state
and checked against a tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln
from scipy.stats import binom

from .config import InterferometerConfig, InvalidParameterError, MomentSet, TruncationError

MAX_CUTOFF = 200
GUARD = 10
COHERENT_TOL = 1e-8
NORM_LOSS_TOL = 1e-6


@dataclass(frozen=True)
class FockState:
    """Amplitudes indexed ``[n_a, n_b]``; ``trunc_error`` is the accumulated
    probability lost to truncation (1 - norm^2 of the unrenormalized state)."""

    amplitudes: np.ndarray
    cutoff: int
    trunc_error: float = 0.0

    @property
    def norm2(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def probabilities(self):
        p = np.abs(self.amplitudes) ** 2
        return p / p.sum()


class FockOperator:
    """A two-mode operator in one of three structured forms.

    ``single``: a (cutoff+1)^2 matrix acting on one mode.
    ``diagonal``: a (cutoff+1, cutoff+1) array multiplying amplitudes elementwise.
    ``blocks``: photon-number-conserving blocks, one per total photon number.
    """

    def __init__(self, kind, data, cutoff, label, mode=None):
        self.kind = kind
        self.data = data
        self.cutoff = cutoff
        self.label = label
        self.mode = mode

    def __repr__(self):
        return f"FockOperator({self.label!r}, cutoff={self.cutoff})"

    def _apply_array(self, psi):
        if self.kind == "single":
            return self.data @ psi if self.mode == "a" else psi @ self.data.T
        if self.kind == "diagonal":
            return self.data * psi
        out = np.zeros_like(psi)
        for rows, cols, block in self.data:
            out[rows, cols] = block @ psi[rows, cols]
        return out

    def apply(self, state: FockState) -> FockState:
        if state.cutoff != self.cutoff:
            raise ValueError("operator and state cutoffs differ")
        before = state.norm2
        psi = self._apply_array(state.amplitudes.astype(complex))
        after = float(np.sum(np.abs(psi) ** 2))
        loss = max(before - after, 0.0)
        return FockState(psi, state.cutoff, state.trunc_error + loss)

    def to_dense(self):
        """Full (cutoff+1)^2 x (cutoff+1)^2 matrix; for tests at small cutoffs."""
        d = self.cutoff + 1
        cols = []
        for k in range(d * d):
            e = np.zeros(d * d, dtype=complex)
            e[k] = 1
            cols.append(self._apply_array(e.reshape(d, d)).ravel())
        return np.array(cols).T


def _check_cutoff(cutoff):
    if not isinstance(cutoff, (int, np.integer)) or cutoff < 1:
        raise InvalidParameterError(f"cutoff must be a positive integer, got {cutoff!r}")
    if cutoff > MAX_CUTOFF:
        raise InvalidParameterError(
            f"cutoff {cutoff} exceeds {MAX_CUTOFF}; use the closed-form or Gaussian paths")


def recommended_cutoff(alpha):
    return min(MAX_CUTOFF, math.ceil(alpha ** 2 + 6 * alpha + 10))


def coherent_state(alpha, cutoff) -> FockState:
    """|alpha> in mode a, vacuum in mode b, renormalized after truncation."""
    _check_cutoff(cutoff)
    n = np.arange(cutoff + 1)
    if alpha == 0:
        amps = (n == 0).astype(float)
    else:
        amps = np.exp(-alpha ** 2 / 2 + n * np.log(abs(alpha)) - 0.5 * gammaln(n + 1))
        amps = amps * np.sign(alpha) ** n
    trunc = max(1.0 - float(amps @ amps), 0.0)
    if trunc > COHERENT_TOL:
        raise TruncationError(
            f"cutoff {cutoff} keeps only 1 - {trunc:.2e} of |alpha={alpha}>")
    psi = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    psi[:, 0] = amps / math.sqrt(amps @ amps)
    return FockState(psi, cutoff, trunc)


def _lowering(dim):
    return np.diag(np.sqrt(np.arange(1, dim)), 1)


@lru_cache(maxsize=64)
def _squeeze_matrix(r, cutoff, guard):
    a = _lowering(cutoff + 1 + guard)
    gen = 0.5 * r * (a.T @ a.T - a @ a)
    return expm(gen)[:cutoff + 1, :cutoff + 1]


def squeeze_operator(r, mode, cutoff, guard=GUARD) -> FockOperator:
    """exp[r (m^dag^2 - m^2) / 2] on mode ``mode``.

    Positive ``r`` amplifies the x quadrature (m -> cosh r m + sinh r m^dag),
    the orientation used by the phase-space chain. ``-r`` gives the
    x-squeezing operator exp[-r (m^dag^2 - m^2)/2].
    """
    _check_cutoff(cutoff)
    if mode not in ("a", "b"):
        raise ValueError(f"mode must be 'a' or 'b', got {mode!r}")
    if guard < 10:
        raise ValueError("guard band must be at least 10 levels")
    return FockOperator("single", _squeeze_matrix(float(r), cutoff, guard), cutoff,
                        f"S({r:g})_{mode}", mode)


@lru_cache(maxsize=8)
def _beamsplitter_blocks(cutoff):
    theta = math.pi / 4
    blocks = []
    for total in range(2 * cutoff + 1):
        na = np.arange(total + 1)
        # K = a^dag b - a b^dag on |na, total - na>
        off = np.sqrt((na[:-1] + 1) * (total - na[:-1]))
        K = np.diag(off, -1) - np.diag(off, 1)
        U = expm(theta * K)
        keep = (na <= cutoff) & (total - na <= cutoff)
        rows = na[keep]
        blocks.append((rows, total - rows, U[np.ix_(keep, keep)]))
    return tuple(blocks)


def beamsplitter_operator(cutoff) -> FockOperator:
    """50:50 splitter exp[pi (a^dag b - a b^dag) / 4], built block by block in N_+."""
    _check_cutoff(cutoff)
    return FockOperator("blocks", _beamsplitter_blocks(cutoff), cutoff, "B")


def phase_operator(phi, cutoff) -> FockOperator:
    """exp[i phi (n_a - n_b) / 2]."""
    _check_cutoff(cutoff)
    n = np.arange(cutoff + 1)
    diff = n[:, None] - n[None, :]
    return FockOperator("diagonal", np.exp(0.5j * phi * diff), cutoff, f"U({phi:g})")


def simulate_ds_mzi(cfg: InterferometerConfig, cutoff) -> FockState:
    """Output state S2 B U B S1 |alpha, 0>."""
    state = coherent_state(cfg.alpha, cutoff)
    bs = beamsplitter_operator(cutoff)
    for op in (squeeze_operator(cfg.r1, "b", cutoff), bs,
               phase_operator(cfg.phi, cutoff), bs,
               squeeze_operator(cfg.r2, "b", cutoff)):
        state = op.apply(state)
    if state.trunc_error > NORM_LOSS_TOL:
        raise TruncationError(
            f"norm loss {state.trunc_error:.2e} at cutoff {cutoff}; raise the cutoff")
    return state


def _moments_from_distribution(P):
    n = np.arange(P.shape[0])
    na, nb = n[:, None], n[None, :]
    diff, tot = na - nb, na + nb
    mean = float(np.sum(P * diff))
    var = float(np.sum(P * diff ** 2) - mean ** 2)
    return mean, float(np.sum(P * tot)), var


def photon_statistics(state: FockState) -> MomentSet:
    mean, total, var = _moments_from_distribution(state.probabilities())
    return MomentSet(mean, total, var, None, "fock")


def binomial_thinning(cutoff, eta):
    """T[m, n] = C(n, m) eta^m (1 - eta)^(n - m)."""
    n = np.arange(cutoff + 1)
    return binom.pmf(n[:, None], n[None, :], eta)


def lossy_statistics(state: FockState, eta) -> MomentSet:
    """Moments of the counts recorded by two detectors of efficiency ``eta``.

    Each mode's photon number is thinned binomially and independently; the
    convolution is exact over the truncated support.
    """
    if not 0 < eta <= 1:
        raise InvalidParameterError(f"eta must lie in (0, 1], got {eta}")
    T = binomial_thinning(state.cutoff, eta)
    P = T @ state.probabilities() @ T.T
    mean, total, var = _moments_from_distribution(P)
    return MomentSet(mean, total, var, None, "fock")


def qfi(alpha, r1, cutoff, sign=1) -> float:
    """4 Var(J_z) on B S1 |alpha, 0>, the state the phase shift acts on.

    ``sign=-1`` squeezes with the opposite orientation (x-squeezed vacuum).
    """
    state = coherent_state(alpha, cutoff)
    state = squeeze_operator(sign * r1, "b", cutoff).apply(state)
    state = beamsplitter_operator(cutoff).apply(state)
    if state.trunc_error > NORM_LOSS_TOL:
        raise TruncationError(f"norm loss {state.trunc_error:.2e} at cutoff {cutoff}")
    P = state.probabilities()
    n = np.arange(cutoff + 1)
    jz = 0.5 * (n[:, None] - n[None, :])
    mean = np.sum(P * jz)
    return float(4 * (np.sum(P * jz ** 2) - mean ** 2))


def fock_moments(cfg: InterferometerConfig, cutoff) -> MomentSet:
    return photon_statistics(simulate_ds_mzi(cfg, cutoff))
