"""Independent reference computations used by the tests."""
import math

import numpy as np

from irs_tradeoff.arrays import GammaSet, beam_gains, dft_codebook, irs_gains, steering_irs, steering_ula
from irs_tradeoff.fim import fim_channel
from irs_tradeoff.geometry import Pose, derive_angles, path_delay_and_gain


def pair_amplitude(eta, w_b, w_m, angles, theta, l_side):
    """Noise-free matched-filter amplitude of one beam pair as a function of
    eta[1:] = (phi_rx, phi_a, phi_e, Re h, Im h); the remaining angles come from ``angles``."""
    phi_rx, phi_a, phi_e, h_re, h_im = eta
    a_tx = steering_ula(len(w_b), math.sin(angles.phi_tx1))
    a_rx = steering_ula(len(w_m), math.sin(phi_rx))
    a1 = steering_irs(l_side, angles.phi_irs1_a, angles.phi_irs1_e)
    a2 = steering_irs(l_side, phi_a, phi_e)
    g_irs = a2.conj() @ (theta.diagonal() * a1)
    return complex(h_re + 1j * h_im) * (w_m.conj() @ a_rx) * g_irs * (a_tx.conj() @ w_b)


def fim_by_finite_difference(w_b, w_m, angles, theta, l_side, h, p_tx, t_s, n0, bandwidth, step=1e-6):
    """Channel FIM from numerically differentiated amplitudes; the delay entry uses the
    pulse-derivative energy ``pi^2 B^2 / 3`` per unit pulse energy and is orthogonal to the rest."""
    eta = np.array([angles.phi_rx1, angles.phi_irs2_a, angles.phi_irs2_e, h.real, h.imag])
    grads = []
    for i in range(5):
        e = np.zeros(5)
        e[i] = step
        grads.append((pair_amplitude(eta + e, w_b, w_m, angles, theta, l_side)
                      - pair_amplitude(eta - e, w_b, w_m, angles, theta, l_side)) / (2 * step))
    grads = np.array(grads)
    k = p_tx * t_s / n0
    j = np.zeros((6, 6))
    j[1:, 1:] = k * np.real(np.outer(grads.conj(), grads))
    u = pair_amplitude(eta, w_b, w_m, angles, theta, l_side)
    j[0, 0] = k * math.pi**2 * bandwidth**2 / 3 * abs(u) ** 2
    return j


def codebook_mean_fim(layout, angles, theta, h, consts, n_b, paper_literal_signs=False):
    """Brute-force mean of the per-pair FIM over every DFT beam pair."""
    irs = irs_gains(layout.l_side, angles, theta)
    cb_b, cb_m = dft_codebook(n_b), dft_codebook(layout.n_m)
    tx, rx, rx_bar = beam_gains(cb_b, cb_m, angles)
    total = np.zeros((6, 6))
    for i in range(n_b):
        for j in range(layout.n_m):
            g = GammaSet(tx[i], rx[j], irs.gamma_irs, rx_bar[j], irs.gamma_irs_a_bar, irs.gamma_irs_e_bar)
            total += fim_channel(g, h, consts.p_tx, consts.t_s, consts.n0, consts.bandwidth, paper_literal_signs)
    return total / (n_b * layout.n_m)


def channel_parameters(layout, px, py, alpha, h1, zeta=1.0):
    """(tau, phi_rx, phi_a, phi_e, Re h~, Im h~) at a pose, straight from the geometry."""
    pose = Pose.from_xy(px, py, alpha)
    ang = derive_angles(layout, pose)
    g = path_delay_and_gain(layout, pose, h1, zeta)
    return np.array([g.tau1, ang.phi_rx1, ang.phi_irs2_a, ang.phi_irs2_e, g.h_tilde1.real, g.h_tilde1.imag])


def jacobian_by_finite_difference(layout, pose, h1, step=1e-6, zeta=1.0):
    x0 = np.array([pose.p.x, pose.p.y, pose.alpha])
    rows = []
    for i in range(3):
        e = np.zeros(3)
        e[i] = step
        hi = channel_parameters(layout, *(x0 + e), h1, zeta)
        lo = channel_parameters(layout, *(x0 - e), h1, zeta)
        rows.append((hi - lo) / (2 * step))
    return np.array(rows)
