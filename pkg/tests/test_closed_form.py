import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dsmzi import closed_form as cf
from dsmzi.config import InterferometerConfig, InvalidParameterError
from dsmzi.gaussian import ds_mzi_moments

alphas = st.floats(0.0, 4.0)
squeezing = st.floats(0.0, 2.5)
phases = st.floats(0.05, math.pi - 0.05)


def test_coherent_only_fringe():
    phi = np.linspace(0, 2 * np.pi, 9)
    np.testing.assert_allclose(cf.expected_ndiff_balanced(2.0, 0.0, phi), -4 * np.cos(phi), atol=1e-12)
    np.testing.assert_allclose(cf.variance_ndiff_balanced(2.0, 0.0, phi), 4.0, atol=1e-12)


def test_balanced_variance_reference_value():
    # alpha^2[(1/2 - e/2)^2 + cosh^2 0.5] + sinh^2(1)/4, evaluated by hand
    assert cf.variance_ndiff_balanced(1.0, 0.5, math.pi / 2) == pytest.approx(2.354937, abs=1e-6)


def test_slope_reference_value():
    assert cf.dndiff_dphi_unbalanced(1.0, 0.5, 0.5, math.pi / 2) == pytest.approx(
        0.5 * (1 + math.e), rel=1e-14)


def test_caves_slope_vanishes_on_singular_line():
    r = 1.3
    assert abs(cf.dndiff_dphi_unbalanced(math.sinh(r), r, 0.0, 1.0)) < 1e-13


def test_vacuum_at_dark_port():
    assert cf.variance_ndiff_balanced(0.0, 0.8, math.pi) == pytest.approx(0.0, abs=1e-12)


def test_overflow_guard():
    with pytest.raises(InvalidParameterError):
        cf.variance_ndiff_unbalanced(1.0, 21.0, 0.0, 1.0)


@settings(max_examples=100, deadline=None)
@given(alphas, squeezing, phases)
def test_unbalanced_reduces_to_balanced(alpha, r, phi):
    for bal, unbal in ((cf.expected_ndiff_balanced, cf.expected_ndiff_unbalanced),
                       (cf.variance_ndiff_balanced, cf.variance_ndiff_unbalanced),
                       (cf.total_photons_balanced, cf.total_photons_unbalanced)):
        a, b = bal(alpha, r, phi), unbal(alpha, r, r, phi)
        assert a == pytest.approx(b, rel=1e-10, abs=1e-10)


@settings(max_examples=150, deadline=None)
@given(alphas, squeezing, squeezing, phases)
def test_agrees_with_phase_space(alpha, r1, r2, phi):
    cfg = InterferometerConfig(alpha, r1, r2, phi)
    closed = cf.closed_form_moments(cfg)
    gauss = ds_mzi_moments(cfg)
    for a, b in zip(closed.as_tuple(), gauss.as_tuple()):
        assert a == pytest.approx(b, rel=1e-9, abs=1e-9)
    assert closed.dn_minus_dphi == pytest.approx(gauss.dn_minus_dphi, rel=1e-9, abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(alphas, squeezing, squeezing, phases)
def test_slope_matches_finite_difference(alpha, r1, r2, phi):
    h = 1e-6
    fd = (cf.expected_ndiff_unbalanced(alpha, r1, r2, phi + h)
          - cf.expected_ndiff_unbalanced(alpha, r1, r2, phi - h)) / (2 * h)
    exact = cf.dndiff_dphi_unbalanced(alpha, r1, r2, phi)
    scale = max(1.0, cf.total_photons_unbalanced(alpha, r1, r2, phi))
    assert abs(fd - exact) <= 1e-6 * scale


@settings(max_examples=100, deadline=None)
@given(alphas, squeezing, squeezing, phases)
def test_moment_bounds(alpha, r1, r2, phi):
    n_minus = cf.expected_ndiff_unbalanced(alpha, r1, r2, phi)
    n_plus = cf.total_photons_unbalanced(alpha, r1, r2, phi)
    assert n_plus >= abs(n_minus) - 1e-9
    assert cf.variance_ndiff_unbalanced(alpha, r1, r2, phi) >= -1e-9


@settings(max_examples=60, deadline=None)
@given(alphas, squeezing, phases)
def test_coefficient_algebra_balanced(alpha, r, phi):
    n_minus, n_plus = cf.coefficient_means_balanced(alpha, r, phi)
    assert n_minus == pytest.approx(cf.expected_ndiff_balanced(alpha, r, phi), rel=1e-10, abs=1e-10)
    assert n_plus == pytest.approx(cf.total_photons_balanced(alpha, r, phi), rel=1e-10, abs=1e-10)


@settings(max_examples=60, deadline=None)
@given(alphas, squeezing, squeezing, phases)
def test_coefficient_algebra_unbalanced(alpha, r1, r2, phi):
    n_minus, n_plus = cf.coefficient_means_unbalanced(alpha, r1, r2, phi)
    assert n_minus == pytest.approx(cf.expected_ndiff_unbalanced(alpha, r1, r2, phi),
                                    rel=1e-10, abs=1e-10)
    assert n_plus == pytest.approx(cf.total_photons_unbalanced(alpha, r1, r2, phi),
                                   rel=1e-10, abs=1e-10)


def test_unbalanced_coefficients_reduce_to_balanced():
    r, phi = 0.7, 1.1
    h = cf.balanced_coefficients(r, phi)
    k = cf.unbalanced_coefficients(r, r, phi)
    assert k.k2_minus == pytest.approx(h.h_minus)
    assert k.k2_plus == pytest.approx(h.h_plus)
    assert k.k1_plus == pytest.approx(0.0, abs=1e-14)
    assert k.k5_plus == pytest.approx(h.h1)


def test_printed_variance_variant_is_wrong_off_balance():
    # with sinh^2(2 r1) in the quartic bracket the variance misses the exact value
    alpha, r1, r2, phi = 1.0, 1.0, 0.3, 0.8
    c2 = math.cos(phi / 2) ** 2
    printed = (cf.variance_ndiff_unbalanced(alpha, r1, r2, phi)
               + 0.5 * (math.sinh(2 * r1) ** 2 - math.sinh(2 * r2) ** 2) * c2 ** 2)
    exact = ds_mzi_moments(InterferometerConfig(alpha, r1, r2, phi)).n_minus_var
    assert abs(printed - exact) > 1.0
    assert cf.variance_ndiff_unbalanced(alpha, r1, r2, phi) == pytest.approx(exact, rel=1e-12)
