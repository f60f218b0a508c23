import math

import numpy as np
import pytest

from dsmzi import fock
from dsmzi.closed_form import closed_form_moments
from dsmzi.config import InterferometerConfig, InvalidParameterError, TruncationError


def basis(na, nb, cutoff):
    psi = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    psi[na, nb] = 1
    return fock.FockState(psi, cutoff)


def test_beamsplitter_splits_single_photon():
    out = fock.beamsplitter_operator(4).apply(basis(1, 0, 4))
    p = np.abs(out.amplitudes) ** 2
    assert p[1, 0] == pytest.approx(0.5)
    assert p[0, 1] == pytest.approx(0.5)


def test_beamsplitter_conserves_total_photons():
    cutoff = 6
    out = fock.beamsplitter_operator(cutoff).apply(basis(2, 1, cutoff))
    n = np.arange(cutoff + 1)
    p = np.abs(out.amplitudes) ** 2
    assert p[(n[:, None] + n[None, :]) != 3].sum() < 1e-28
    assert out.norm2 == pytest.approx(1.0, abs=1e-14)


def test_beamsplitter_is_unitary_within_blocks():
    for rows, cols, block in fock.beamsplitter_operator(5).data:
        if len(rows) == (rows + cols)[0] + 1:  # complete block
            np.testing.assert_allclose(block @ block.conj().T, np.eye(len(rows)), atol=1e-13)


def test_phase_operator():
    np.testing.assert_allclose(fock.phase_operator(0.0, 3).data, 1.0)
    out = fock.phase_operator(2 * math.pi, 3).apply(basis(1, 0, 3))
    assert out.amplitudes[1, 0] == pytest.approx(-1.0)


def test_squeezed_vacuum_parity_and_number():
    cutoff, r = 40, 0.6
    psi = fock.squeeze_operator(r, "b", cutoff).apply(fock.coherent_state(0.0, cutoff))
    p = np.abs(psi.amplitudes[0]) ** 2
    assert p[1::2].sum() < 1e-28
    assert p @ np.arange(cutoff + 1) == pytest.approx(math.sinh(r) ** 2, abs=1e-10)


def test_squeezer_guard_band_enforced():
    with pytest.raises(ValueError):
        fock.squeeze_operator(0.5, "a", 10, guard=5)


def test_coherent_statistics():
    m = fock.photon_statistics(fock.coherent_state(1.0, 30))
    assert m.n_minus_mean == pytest.approx(1.0, abs=1e-12)
    assert m.n_minus_var == pytest.approx(1.0, abs=1e-10)


def test_vacuum_statistics():
    assert fock.photon_statistics(fock.coherent_state(0.0, 5)).as_tuple() == (0.0, 0.0, 0.0)


def test_thinned_coherent_mean():
    m = fock.lossy_statistics(fock.coherent_state(1.0, 30), 0.5)
    assert m.n_minus_mean == pytest.approx(0.5, abs=1e-12)


def test_mzi_sign_convention():
    m = fock.fock_moments(InterferometerConfig(1.2, 0.0, 0.0, 0.0), 30)
    assert m.n_minus_mean == pytest.approx(-1.44, abs=1e-10)


def test_dark_port_vacuum():
    m = fock.fock_moments(InterferometerConfig(0.0, 0.5, 0.5, math.pi), 40)
    assert m.n_minus_var == pytest.approx(0.0, abs=1e-10)


def test_reference_point_matches_closed_form():
    cfg = InterferometerConfig(1.0, 0.5, 0.5, math.pi / 2)
    assert fock.fock_moments(cfg, 50).n_minus_mean == pytest.approx(
        closed_form_moments(cfg).n_minus_mean, abs=1e-8)


@pytest.mark.parametrize("cfg", [InterferometerConfig(0.7, 0.3, 0.6, 1.1),
                                 InterferometerConfig(1.2, 0.5, 0.0, 2.3)])
def test_cutoff_convergence(cfg):
    a = fock.fock_moments(cfg, 40).as_tuple()
    b = fock.fock_moments(cfg, 80).as_tuple()
    np.testing.assert_allclose(a, b, atol=1e-8)


def test_lossy_identity_reference_point():
    state = fock.simulate_ds_mzi(InterferometerConfig(1.0, 0.5, 0.5, math.pi / 2), 50)
    ideal = fock.photon_statistics(state)
    noisy = fock.lossy_statistics(state, 0.8)
    assert noisy.n_minus_var == pytest.approx(0.64 * ideal.n_minus_var + 0.16 * ideal.n_plus_mean,
                                              abs=1e-10)


def test_lossy_at_unit_efficiency_is_ideal():
    state = fock.simulate_ds_mzi(InterferometerConfig(0.8, 0.4, 0.2, 1.0), 40)
    np.testing.assert_allclose(fock.lossy_statistics(state, 1.0).as_tuple(),
                               fock.photon_statistics(state).as_tuple(), atol=1e-14)


def test_lossy_rejects_bad_eta():
    with pytest.raises(InvalidParameterError):
        fock.lossy_statistics(fock.coherent_state(1.0, 20), 0.0)


def test_truncation_detected():
    with pytest.raises(TruncationError):
        fock.coherent_state(3.0, 8)
    with pytest.raises(TruncationError):
        fock.simulate_ds_mzi(InterferometerConfig(1.0, 1.5, 1.5, 1.0), 20)


def test_cutoff_ceiling():
    with pytest.raises(InvalidParameterError):
        fock.coherent_state(1.0, fock.MAX_CUTOFF + 1)


@pytest.mark.parametrize("alpha, r, expect", [(0.0, 0.0, 0.0), (1.0, 0.0, 1.0),
                                              (1.0, 0.5, math.e + math.sinh(0.5) ** 2)])
def test_qfi(alpha, r, expect):
    assert fock.qfi(alpha, r, 50) == pytest.approx(expect, abs=1e-8)


def test_qfi_opposite_orientation():
    # squeezing the other quadrature swaps e^{2r} for e^{-2r}
    assert fock.qfi(1.0, 0.5, 50, sign=-1) == pytest.approx(math.exp(-1) + math.sinh(0.5) ** 2,
                                                            abs=1e-8)


def test_dense_matches_structured():
    op = fock.beamsplitter_operator(3)
    dense = op.to_dense()
    state = basis(2, 1, 3)
    np.testing.assert_allclose(dense @ state.amplitudes.ravel(), op.apply(state).amplitudes.ravel())
