import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from irs_tradeoff.arrays import (beam_gains, dft_codebook, gamma_set, irs_derivative_weights, irs_gains,
                                 steering_irs, steering_ula)
from irs_tradeoff.errors import DimensionMismatch, InvalidArgument
from irs_tradeoff.phases import PhaseShiftConfig, design_theta1, design_theta2, random_phases


def test_ula_special_cases(angles):
    np.testing.assert_array_equal(steering_ula(4, 0.0), np.ones(4))
    np.testing.assert_allclose(steering_ula(2, 1.0), [1, -1], atol=1e-15)
    k = np.arange(32)
    np.testing.assert_allclose(steering_ula(32, math.sin(angles.phi_rx1)),
                               np.exp(1j * math.pi * k * math.sin(angles.phi_rx1)), rtol=1e-14)
    with pytest.raises(InvalidArgument):
        steering_ula(4, 1.5)


def test_irs_steering_special_cases():
    np.testing.assert_allclose(steering_irs(1, 0.3, 1.1), [1.0])
    np.testing.assert_allclose(steering_irs(5, 0.0, math.pi / 2), np.ones(25), atol=1e-15)
    np.testing.assert_allclose(steering_irs(2, math.pi / 2, math.pi / 2), [1, -1, 1, -1], atol=1e-15)


@given(st.integers(1, 6), st.floats(-1.5, 1.5), st.floats(0.05, 3.1))
@settings(max_examples=50, deadline=None)
def test_irs_steering_matches_kronecker(l_side, az, el):
    # p runs fastest: a = a_q (kron) a_p
    idx = np.arange(l_side)
    a_p = np.exp(1j * math.pi * idx * math.sin(az) * math.sin(el))
    a_q = np.exp(1j * math.pi * idx * math.cos(el))
    np.testing.assert_allclose(steering_irs(l_side, az, el), np.kron(a_q, a_p), rtol=1e-12, atol=1e-12)


@given(st.integers(2, 5), st.floats(-1.4, 1.4), st.floats(0.1, 3.0))
@settings(max_examples=40, deadline=None)
def test_irs_derivative_weights_finite_difference(l_side, az, el):
    c_a, c_e = irs_derivative_weights(l_side, az, el)
    a = steering_irs(l_side, az, el)
    h = 1e-6
    fd_a = (steering_irs(l_side, az + h, el) - steering_irs(l_side, az - h, el)) / (2 * h)
    fd_e = (steering_irs(l_side, az, el + h) - steering_irs(l_side, az, el - h)) / (2 * h)
    np.testing.assert_allclose(c_a * a, fd_a, atol=1e-7)
    np.testing.assert_allclose(c_e * a, fd_e, atol=1e-7)


def test_dft_codebook():
    for n in (1, 3, 8):
        np.testing.assert_allclose(dft_codebook(n)[:, 0], np.ones(n) / math.sqrt(n))
    c = dft_codebook(4)
    np.testing.assert_allclose(c.conj().T @ c, np.eye(4), atol=1e-14)
    # column 5, entry 3 in one-based indexing
    assert dft_codebook(32)[2, 4] == pytest.approx(np.exp(-2j * math.pi * 4 * 2 / 32) / math.sqrt(32), abs=1e-15)


def test_matched_receive_beam(layout, angles):
    w_m = steering_ula(layout.n_m, math.sin(angles.phi_rx1)) / math.sqrt(layout.n_m)
    w_b = dft_codebook(layout.n_b_total)[:, 0]
    g = gamma_set(layout, angles, random_phases(layout.n_irs, 0), w_b, w_m)
    assert abs(g.gamma_rx1) == pytest.approx(math.sqrt(layout.n_m), rel=1e-12)


def test_designed_phase_reaches_full_gain(layout, angles):
    theta = design_theta1((angles.phi_irs1_a, angles.phi_irs1_e), (angles.phi_irs2_a, angles.phi_irs2_e),
                          layout.l_side)
    assert abs(irs_gains(layout.l_side, angles, theta).gamma_irs) == pytest.approx(layout.n_irs, rel=1e-12)
    half = PhaseShiftConfig(theta.thetas, 0.5)
    assert abs(irs_gains(layout.l_side, angles, half).gamma_irs) == pytest.approx(0.5 * layout.n_irs, rel=1e-12)


def test_irs_gain_matches_matrix_form(angles):
    l_side = 2
    theta = random_phases(4, 11)
    a1 = steering_irs(l_side, angles.phi_irs1_a, angles.phi_irs1_e)
    a2 = steering_irs(l_side, angles.phi_irs2_a, angles.phi_irs2_e)
    oracle = a2.conj() @ np.diag(theta.diagonal()) @ a1
    assert irs_gains(l_side, angles, theta).gamma_irs == pytest.approx(oracle, rel=1e-13)


def test_gamma_set_shape_checks(layout, angles):
    with pytest.raises(DimensionMismatch):
        gamma_set(layout, angles, random_phases(layout.n_irs, 0), np.ones(4), np.ones(3))
    with pytest.raises(DimensionMismatch):
        irs_gains(layout.l_side, angles, random_phases(5, 0))


def test_beam_gains_vectorized_matches_columns(angles):
    cb_b, cb_m = dft_codebook(8), dft_codebook(4)
    tx, rx, rx_bar = beam_gains(cb_b, cb_m, angles)
    for i in range(8):
        assert beam_gains(cb_b[:, i], cb_m[:, 0], angles)[0] == pytest.approx(tx[i])
    for j in range(4):
        one = beam_gains(cb_b[:, 0], cb_m[:, j], angles)
        assert one[1] == pytest.approx(rx[j]) and one[2] == pytest.approx(rx_bar[j])


def test_mismatched_design_loses_gain(layout, angles):
    bs = (angles.phi_irs1_a, angles.phi_irs1_e)
    for d in (1e-3, 0.05, 0.3):
        theta = design_theta1(bs, (angles.phi_irs2_a + d, angles.phi_irs2_e - d), layout.l_side)
        assert abs(irs_gains(layout.l_side, angles, theta).gamma_irs) < layout.n_irs


def test_design_trivial_cases(angles):
    bs = (angles.phi_irs1_a, angles.phi_irs1_e)
    np.testing.assert_array_equal(design_theta1(bs, (0.4, 1.2), 1).thetas, [0.0])
    assert design_theta2(bs, (0.4, 1.2), 6) == design_theta1(bs, (0.4, 1.2), 6)


def test_design_is_elementwise_phase_difference(angles):
    bs, mu = (angles.phi_irs1_a, angles.phi_irs1_e), (0.3, 1.9)
    theta = design_theta2(bs, mu, 2)
    expected = np.angle(steering_irs(2, *mu)) - np.angle(steering_irs(2, *bs))
    np.testing.assert_allclose(np.exp(1j * theta.thetas), np.exp(1j * expected), atol=1e-14)


def test_random_phases():
    np.testing.assert_array_equal(random_phases(16, 5).thetas, random_phases(16, 5).thetas)
    big = random_phases(10_000, 1)
    assert abs(np.mean(np.exp(1j * big.thetas))) < 0.05
    one = random_phases(1, 2).thetas
    assert one.shape == (1,) and -math.pi <= one[0] <= math.pi
    with pytest.raises(ValueError):
        PhaseShiftConfig([0.0], delta=1.5)
