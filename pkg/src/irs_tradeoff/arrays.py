"""Steering vectors and DFT codebooks, plus the beam/IRS gain scalars built from them.

All arrays use half-wavelength spacing, so the inter-element phase step is
``pi * sin(angle)``.  IRS elements are indexed ``p + (q-1)L`` with ``p`` (the
azimuth-elevation term) running fastest.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidArgument

# 2*pi*d/lambda with d = lambda/2
WAVENUMBER_SPACING = math.pi


def steering_ula(n: int, sin_angle: float) -> np.ndarray:
    """ULA response ``exp(j pi k sin_angle)``, k = 0..n-1."""
    if n < 1:
        raise InvalidArgument("n must be >= 1")
    if abs(sin_angle) > 1.0 + 1e-12:
        raise InvalidArgument(f"|sin_angle| = {abs(sin_angle)} > 1")
    k = np.arange(n)
    return np.exp(1j * WAVENUMBER_SPACING * k * sin_angle)


def _irs_phase_terms(l_side: int, azimuth: float, elevation: float):
    if l_side < 1:
        raise InvalidArgument("l_side must be >= 1")
    if not (math.isfinite(azimuth) and math.isfinite(elevation)):
        raise InvalidArgument("IRS angles must be finite")
    idx = np.arange(l_side)
    # flattened index p + q*L  ->  p fast (column of the grid), q slow
    p = np.tile(idx, l_side)
    q = np.repeat(idx, l_side)
    return p, q


def steering_irs(l_side: int, azimuth: float, elevation: float) -> np.ndarray:
    """Planar IRS response of length ``l_side**2``.

    Equal to ``kron(elev_vec, azel_vec)`` where ``elev_vec`` steps by
    ``pi cos(elevation)`` and ``azel_vec`` by ``pi sin(azimuth) sin(elevation)``.
    """
    p, q = _irs_phase_terms(l_side, azimuth, elevation)
    phase = WAVENUMBER_SPACING * (p * math.sin(azimuth) * math.sin(elevation) + q * math.cos(elevation))
    return np.exp(1j * phase)


def rx_derivative_weights(n: int, phi_rx: float) -> np.ndarray:
    """``c_RX``: d a_RX / d phi = diag(c_RX) a_RX."""
    return 1j * WAVENUMBER_SPACING * np.arange(n) * math.cos(phi_rx)


def irs_derivative_weights(l_side: int, azimuth: float, elevation: float) -> tuple[np.ndarray, np.ndarray]:
    """(c_a, c_e): derivatives of the IRS response w.r.t. azimuth and elevation."""
    p, q = _irs_phase_terms(l_side, azimuth, elevation)
    c_a = 1j * WAVENUMBER_SPACING * p * math.cos(azimuth) * math.sin(elevation)
    c_e = 1j * WAVENUMBER_SPACING * (p * math.sin(azimuth) * math.cos(elevation) - q * math.sin(elevation))
    return c_a, c_e


def dft_codebook(n: int) -> np.ndarray:
    """Square DFT codebook; column m has entries exp(-j 2 pi m k / n) / sqrt(n)."""
    if n < 1:
        raise InvalidArgument("n must be >= 1")
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n) / math.sqrt(n)


@dataclass(frozen=True)
class GammaSet:
    gamma_tx1: complex
    gamma_rx1: complex
    gamma_irs: complex
    gamma_rx1_bar: complex
    gamma_irs_a_bar: complex
    gamma_irs_e_bar: complex


@dataclass(frozen=True)
class IrsGains:
    """The three beam-independent IRS scalars (gain and its two angle derivatives)."""

    gamma_irs: complex
    gamma_irs_a_bar: complex
    gamma_irs_e_bar: complex


def irs_gains(l_side: int, angles, phase) -> IrsGains:
    """IRS gain through the Hadamard form ``[a2 * conj(a1)]^H theta``."""
    theta = phase.diagonal()
    n = l_side**2
    if theta.shape != (n,):
        raise DimensionMismatch(f"phase config has {theta.shape[0]} entries, IRS has {n}")
    a1 = steering_irs(l_side, angles.phi_irs1_a, angles.phi_irs1_e)
    a2 = steering_irs(l_side, angles.phi_irs2_a, angles.phi_irs2_e)
    c_a, c_e = irs_derivative_weights(l_side, angles.phi_irs2_a, angles.phi_irs2_e)
    base = a2 * a1.conj()
    return IrsGains(
        gamma_irs=complex(np.vdot(base, theta)),
        gamma_irs_a_bar=complex(np.vdot(c_a * base, theta)),
        gamma_irs_e_bar=complex(np.vdot(c_e * base, theta)),
    )


def beam_gains(w_b: np.ndarray, w_m: np.ndarray, angles) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Beam-dependent scalars for one or many beams.

    ``w_b`` / ``w_m`` may be single vectors or matrices whose columns are
    beams.  Returns ``(gamma_tx1, gamma_rx1, gamma_rx1_bar)`` with one entry
    per column.
    """
    w_b = np.asarray(w_b, dtype=complex)
    w_m = np.asarray(w_m, dtype=complex)
    n_b, n_m = w_b.shape[0], w_m.shape[0]
    a_tx = steering_ula(n_b, math.sin(angles.phi_tx1))
    a_rx = steering_ula(n_m, math.sin(angles.phi_rx1))
    c_rx = rx_derivative_weights(n_m, angles.phi_rx1)
    gamma_tx = a_tx.conj() @ w_b
    gamma_rx = w_m.conj().T @ a_rx
    gamma_rx_bar = w_m.conj().T @ (c_rx * a_rx)
    return gamma_tx, gamma_rx, gamma_rx_bar


def gamma_set(layout, angles, phase, w_b, w_m) -> GammaSet:
    w_b = np.asarray(w_b, dtype=complex)
    w_m = np.asarray(w_m, dtype=complex)
    if w_b.ndim != 1 or w_m.ndim != 1:
        raise DimensionMismatch("gamma_set expects single beam vectors")
    if w_m.shape[0] != layout.n_m:
        raise DimensionMismatch(f"w_m has length {w_m.shape[0]}, MU has {layout.n_m} antennas")
    if w_b.shape[0] > layout.n_b_total:
        raise DimensionMismatch(f"w_b has length {w_b.shape[0]} > {layout.n_b_total} BS antennas")
    g_tx, g_rx, g_rx_bar = beam_gains(w_b, w_m, angles)
    irs = irs_gains(layout.l_side, angles, phase)
    return GammaSet(
        gamma_tx1=complex(g_tx),
        gamma_rx1=complex(g_rx),
        gamma_irs=irs.gamma_irs,
        gamma_rx1_bar=complex(g_rx_bar),
        gamma_irs_a_bar=irs.gamma_irs_a_bar,
        gamma_irs_e_bar=irs.gamma_irs_e_bar,
    )
