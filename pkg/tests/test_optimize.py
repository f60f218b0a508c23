import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dsmzi.config import InterferometerConfig, InvalidParameterError, OptimizationError
from dsmzi.optimize import (PHI_HI, PHI_LO, SweepSpec, asymptotic_phase_opt, fit_offset,
                            golden_section, optimal_alpha_split, optimal_phase, optimal_r2,
                            plateau_sensitivity, sweep)
from dsmzi.sensitivity import delta_phi_grid

ALPHA = math.sqrt(10)


def test_golden_section_parabola():
    x, fx = golden_section(lambda t: (t - 0.3) ** 2 + 1, -2, 2, tol=1e-12)
    assert x == pytest.approx(0.3, abs=1e-6)
    assert fx == pytest.approx(1.0)


def test_golden_section_empty_bracket():
    with pytest.raises(ValueError):
        golden_section(abs, 1.0, 1.0)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.3, 4), st.floats(0, 2.5), st.floats(0, 4), st.floats(0.5, 1.0))
def test_local_minimum_certificate(alpha, r1, r2, eta):
    try:
        phi, rep = optimal_phase(alpha, r1, r2, eta)
    except OptimizationError:
        return
    assert PHI_LO <= phi <= PHI_HI
    for step in (-1e-3, 1e-3):
        if PHI_LO <= phi + step <= PHI_HI:
            assert delta_phi_grid(alpha, r1, r2, phi + step, eta) >= rep.delta_phi_detection


def test_fully_diverged_scan():
    with pytest.raises(OptimizationError):
        optimal_phase(ALPHA, math.asinh(ALPHA), 0.0)


def test_weak_squeezing_works_near_quadrature():
    phi, _ = optimal_phase(ALPHA, 1e-4, 1e-4)
    assert phi == pytest.approx(math.pi / 2, abs=1e-3)
    # the optimum leaves pi/2 roughly linearly: about 0.05 rad by r = 0.05
    phi, _ = optimal_phase(ALPHA, 0.05, 0.05)
    assert phi == pytest.approx(math.pi / 2, abs=0.06)


@pytest.mark.parametrize("eta", [1.0, 0.9, 0.8])
def test_caves_working_point(eta):
    phi, _ = optimal_phase(ALPHA, 1.0, 0.0, eta)
    assert phi == pytest.approx(math.pi / 2, abs=1e-6)


def test_balanced_working_point_monotone():
    phis = [optimal_phase(ALPHA, r, r)[0] for r in np.linspace(0.1, 3.0, 30)]
    assert np.all(np.diff(phis) >= 0)


def test_asymptotic_working_point():
    assert asymptotic_phase_opt(2.0) == pytest.approx(2.87376, abs=1e-5)
    assert asymptotic_phase_opt(0.0) == pytest.approx(2 * math.atan(2 ** 0.25))
    assert asymptotic_phase_opt(20.0) == pytest.approx(math.pi, abs=1e-8)
    phi, _ = optimal_phase(math.sinh(2.0), 2.0, 2.0)
    assert phi == pytest.approx(asymptotic_phase_opt(2.0), abs=1e-2)


def test_unbalanced_beats_balanced():
    r2, _, rep = optimal_r2(ALPHA, 1.87)
    balanced = optimal_phase(ALPHA, 1.87, 1.87)[1]
    assert rep.delta_phi_detection <= balanced.delta_phi_detection
    assert 0 <= r2 <= 1.87 + 3


def test_offset_at_moderate_squeezing():
    r2, _, _ = optimal_r2(ALPHA, 2.0)
    assert r2 - 2.0 == pytest.approx(0.29, abs=0.05)


@pytest.mark.parametrize("eta, delta", [(1.0, 0.0), (0.9, 0.54)])
def test_offset_for_weak_squeezing(eta, delta):
    r2, _, _ = optimal_r2(ALPHA, 1e-3, eta)
    assert r2 - 1e-3 == pytest.approx(delta, abs=0.05)


def test_alpha_split_large_n():
    alpha, r = optimal_alpha_split(100.0)
    assert 0.9 <= alpha ** 2 / math.sinh(r) ** 2 <= 1.1


@pytest.mark.parametrize("n_bar", [0.01, 1.0, 10.0, 1000.0])
def test_alpha_split_constraints(n_bar):
    alpha, r = optimal_alpha_split(n_bar)
    assert abs(alpha ** 2 + math.sinh(r) ** 2 - n_bar) < 1e-10 * max(1, n_bar)
    stationary = (math.exp(2 * r) - 1) * math.sinh(2 * r) / (2 * math.exp(2 * r))
    assert abs(alpha ** 2 - stationary) < 1e-10 * max(1, n_bar)


def test_alpha_split_is_local_maximum():
    n_bar = 10.0
    alpha, r = optimal_alpha_split(n_bar)

    def fisher(r_):
        return (n_bar - math.sinh(r_) ** 2) * math.exp(2 * r_) + math.sinh(r_) ** 2

    best = fisher(r)
    assert fisher(r * 1.01) <= best and fisher(r * 0.99) <= best


def test_alpha_split_rejects_nonpositive():
    with pytest.raises(InvalidParameterError):
        optimal_alpha_split(0.0)


def test_plateau_values():
    scaled, phi = plateau_sensitivity(1.87)
    assert scaled == pytest.approx(0.2381, abs=1e-4)
    assert phi == pytest.approx(3.039, abs=1e-3)


def test_fit_offset():
    r1 = np.array([1.5, 2.0, 2.5])
    delta, rms = fit_offset(r1, r1 + 0.3)
    assert delta == pytest.approx(0.3)
    assert rms == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValueError):
        fit_offset(r1[:2], r1[:2])
    with pytest.raises(ValueError):
        fit_offset([0.5, 1.5, 2.0], [1, 2, 3])


@pytest.mark.parametrize("kwargs", [
    dict(variable="eta"), dict(lo=1.0, hi=1.0), dict(points=1),
    dict(optimize_over=frozenset({"alpha"})), dict(variable="phi", optimize_over=frozenset({"phi"})),
])
def test_sweep_spec_validation(kwargs):
    base = dict(variable="r", lo=0.0, hi=1.0, points=3,
                fixed=InterferometerConfig(1.0, 0.0, 0.0, 1.0))
    base.update(kwargs)
    with pytest.raises(InvalidParameterError):
        SweepSpec(**base)


def test_sweep_flags_divergence_instead_of_failing():
    r_star = math.asinh(ALPHA)
    spec = SweepSpec("r", 1.8, 1.9, 3, InterferometerConfig(ALPHA, 0, 0, math.pi / 2),
                     frozenset({"phi"}), extra=(r_star,))
    points = sweep(spec)
    assert len(points) == 4
    hit = [p for p in points if p.x == r_star][0]
    assert hit.report.diverged and hit.phi_opt is None


def test_sweep_balanced_and_deterministic():
    spec = SweepSpec("r", 0.5, 2.0, 4, InterferometerConfig(ALPHA, 0, 0, 1.0), frozenset({"phi"}),
                     balanced=True)
    first = sweep(spec)
    assert [p.report.config.r2 for p in first] == [p.x for p in first]
    assert [p.report for p in sweep(spec)] == [p.report for p in first]


def test_sweep_workers_do_not_change_results():
    spec = SweepSpec("r2", 0.5, 3.0, 4, InterferometerConfig(ALPHA, 1.0, 0, 1.0, 0.9),
                     frozenset({"phi"}))
    assert [p.report for p in sweep(spec, workers=2)] == [p.report for p in sweep(spec)]
