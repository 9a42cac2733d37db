"""Beam-pair selection by received SNR, and the effective achievable data rate."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arrays import beam_gains, dft_codebook
from .errors import DimensionMismatch, InvalidArgument
from .radio import RadioConstants


@dataclass(frozen=True, eq=False)
class BeamPair:
    w_b: np.ndarray
    w_m: np.ndarray
    index_b: int
    index_m: int


@dataclass(frozen=True)
class RatePoint:
    varpi: float
    eadr: float
    snr_linear: float


def snr_from_gains(gamma_tx, gamma_rx, gamma_irs, h_tilde1, consts: RadioConstants):
    """``P |h~|^2 |g_rx g_irs g_tx|^2 / (N0 B)``; works elementwise on arrays."""
    return (consts.p_tx * abs(h_tilde1) ** 2 * np.abs(gamma_rx * gamma_irs * gamma_tx) ** 2
            / consts.noise_power)


def received_snr(pair: BeamPair, angles, gamma_irs: complex, h_tilde1: complex,
                 consts: RadioConstants) -> float:
    if pair.w_b.ndim != 1 or pair.w_m.ndim != 1:
        raise DimensionMismatch("beam pair must hold two vectors")
    g_tx, g_rx, _ = beam_gains(pair.w_b, pair.w_m, angles)
    return float(snr_from_gains(g_tx, g_rx, gamma_irs, h_tilde1, consts))


def select_best_beam_pair(codebook_b: np.ndarray, codebook_m: np.ndarray, angles, gamma_irs: complex,
                          h_tilde1: complex, consts: RadioConstants) -> tuple[BeamPair, float]:
    """Exhaustive search over all column pairs; returns the pair and its SNR.

    Ties resolve to the lowest ``(index_b, index_m)``.
    """
    if codebook_b.size == 0 or codebook_m.size == 0:
        raise InvalidArgument("empty codebook")
    g_tx, g_rx, _ = beam_gains(codebook_b, codebook_m, angles)
    snr = snr_from_gains(g_tx[:, None], g_rx[None, :], gamma_irs, h_tilde1, consts)
    ib, im = np.unravel_index(int(np.argmax(snr)), snr.shape)
    pair = BeamPair(codebook_b[:, ib].copy(), codebook_m[:, im].copy(), int(ib), int(im))
    return pair, float(snr[ib, im])


def best_pair_for(n_b: int, n_m: int, angles, gamma_irs, h_tilde1, consts):
    return select_best_beam_pair(dft_codebook(n_b), dft_codebook(n_m), angles, gamma_irs, h_tilde1, consts)


def rate_prelog(m: int, consts: RadioConstants) -> float:
    return 1.0 - (m * consts.t_s + consts.t_o) / consts.t_c


def eadr_exact(pair: BeamPair, angles, gamma_irs: complex, h_tilde1: complex, m: int,
               consts: RadioConstants) -> RatePoint:
    """Rate after spending ``m`` pilot slots on beam alignment, with the chosen beam pair."""
    prelog = rate_prelog(m, consts)
    if prelog < -1e-12:
        raise InvalidArgument(f"{m} pilots do not fit in the period")
    prelog = max(prelog, 0.0)
    snr = received_snr(pair, angles, gamma_irs, h_tilde1, consts)
    return RatePoint(consts.varpi_of(m), prelog * consts.bandwidth * math.log2(1.0 + snr), snr)


def rate_slope(h_tilde1: complex, n_irs: int, consts: RadioConstants) -> float:
    """SNR per unit time-allocation ratio with ideal beams: ``P |h~|^2 N^2 T_c / (N0 B T_s)``."""
    return consts.p_tx * abs(h_tilde1) ** 2 * n_irs**2 * consts.t_c / (consts.noise_power * consts.t_s)


def eadr_closed_form(varpi: float, h_tilde1: complex, n_irs: int, consts: RadioConstants) -> RatePoint:
    vmax = consts.varpi_max
    if not 0.0 < varpi <= vmax * (1 + 1e-12):
        raise InvalidArgument(f"varpi must lie in (0, {vmax}], got {varpi}")
    snr = rate_slope(h_tilde1, n_irs, consts) * varpi
    rate = max(vmax - varpi, 0.0) * consts.bandwidth * math.log2(1.0 + snr)
    return RatePoint(varpi, rate, snr)
