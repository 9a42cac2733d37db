"""Fisher information for the reflected-path channel parameters and the pose bounds.

Channel parameter order is ``(tau1, phi_rx1, phi_irs2_a, phi_irs2_e, Re h~1, Im h~1)``;
pose order is ``(p_x, p_y, alpha)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .arrays import IrsGains, beam_gains, dft_codebook, irs_gains
from .errors import DegenerateGeometry, InvalidArgument, SingularFim
from .geometry import SPEED_OF_LIGHT, ChannelAngles, PathGain, Pose, SystemLayout
from .radio import RadioConstants

COND_LIMIT = 1e12
_DENOM_FLOOR = 1e-12


@dataclass(frozen=True)
class CrlbResult:
    peb: float
    reb: float

    @property
    def preb(self) -> float:
        return self.peb + self.reb


def _check_physical(p_tx, t_s, n0, bandwidth):
    for name, val in (("p_tx", p_tx), ("t_s", t_s), ("n0", n0), ("bandwidth", bandwidth)):
        if not val > 0:
            raise InvalidArgument(f"{name} must be positive, got {val}")


def fim_channel(gammas, h_tilde1: complex, p_tx: float, t_s: float, n0: float, bandwidth: float,
                paper_literal_signs: bool = False) -> np.ndarray:
    """6x6 channel-parameter FIM for one beam pair, entry by entry.

    The (Im h~, Im h~) entry is ``+k |g_rx g_irs g_tx|^2``; with
    ``paper_literal_signs`` it takes the negated value instead, which makes
    the matrix indefinite.
    """
    _check_physical(p_tx, t_s, n0, bandwidth)
    g_tx, g_rx, g_irs = gammas.gamma_tx1, gammas.gamma_rx1, gammas.gamma_irs
    gb_rx, gb_a, gb_e = gammas.gamma_rx1_bar, gammas.gamma_irs_a_bar, gammas.gamma_irs_e_bar
    h = complex(h_tilde1)
    k = p_tx * t_s / n0
    h2 = abs(h) ** 2
    full = g_rx * g_irs * g_tx  # common beam/IRS product
    full2 = abs(full) ** 2

    j = np.zeros((6, 6))
    j[0, 0] = k * math.pi**2 * bandwidth**2 / 3 * h2 * full2
    j[1, 1] = k * h2 * abs(gb_rx) ** 2 * abs(g_irs) ** 2 * abs(g_tx) ** 2
    j[2, 2] = k * h2 * abs(g_rx) ** 2 * abs(gb_a) ** 2 * abs(g_tx) ** 2
    j[3, 3] = k * h2 * abs(g_rx) ** 2 * abs(gb_e) ** 2 * abs(g_tx) ** 2
    j[4, 4] = k * full2
    j[5, 5] = -k * full2 if paper_literal_signs else k * full2
    # first row/column vanish: the delay-derivative waveform is orthogonal to the pulse

    d_rx = np.conj(gb_rx * g_irs * g_tx)
    d_a = np.conj(g_rx * gb_a * g_tx)
    d_e = np.conj(g_rx * gb_e * g_tx)
    j[1, 2] = k * h2 * (d_rx * g_rx * gb_a * g_tx).real
    j[1, 3] = k * h2 * (d_rx * g_rx * gb_e * g_tx).real
    j[1, 4] = k * (h.conjugate() * d_rx * full).real
    j[1, 5] = k * (1j * h.conjugate() * d_rx * full).real
    j[2, 3] = k * h2 * (d_a * g_rx * gb_e * g_tx).real
    j[2, 4] = k * (h.conjugate() * d_a * full).real
    j[2, 5] = k * (1j * h.conjugate() * d_a * full).real
    j[3, 4] = k * (h.conjugate() * d_e * full).real
    j[3, 5] = k * (1j * h.conjugate() * d_e * full).real
    j[4, 5] = 0.0

    iu = np.triu_indices(6, 1)
    j[(iu[1], iu[0])] = j[iu]
    return j


def _gradient_amplitudes(g_tx, g_rx, g_rx_bar, irs: IrsGains, h_tilde1: complex) -> np.ndarray:
    """Per-pair complex amplitudes of d u0 / d eta (without sqrt(P_TX)), shape (pairs, 6)."""
    h = complex(h_tilde1)
    common = g_rx * irs.gamma_irs * g_tx
    return np.stack([
        h * common,
        h * g_rx_bar * irs.gamma_irs * g_tx,
        h * g_rx * irs.gamma_irs_a_bar * g_tx,
        h * g_rx * irs.gamma_irs_e_bar * g_tx,
        common,
        1j * common,
    ], axis=-1)


def _pulse_weights(t_s: float, bandwidth: float) -> np.ndarray:
    # energy of the delay derivative vs the pulse itself (flat spectrum over |f| < B/2)
    w = np.full(6, t_s)
    w[0] = t_s * math.pi**2 * bandwidth**2 / 3
    return w


def sweep_fim(layout: SystemLayout, angles: ChannelAngles, phase, h_tilde1: complex,
              consts: RadioConstants, n_b: int | None = None, irs: IrsGains | None = None) -> np.ndarray:
    """Channel FIM summed over every (BS beam, MU beam) pair of the DFT codebooks.

    ``n_b`` is the number of activated BS antennas (codebook size); the MU
    always uses all ``layout.n_m`` antennas.
    """
    n_b = layout.n_b_total if n_b is None else n_b
    irs = irs_gains(layout.l_side, angles, phase) if irs is None else irs
    g_tx, g_rx, g_rx_bar = beam_gains(dft_codebook(n_b), dft_codebook(layout.n_m), angles)
    # all pairs: outer product over (m_b, m_m)
    g_tx = np.repeat(g_tx, layout.n_m)
    g_rx = np.tile(g_rx, n_b)
    g_rx_bar = np.tile(g_rx_bar, n_b)
    amps = _gradient_amplitudes(g_tx, g_rx, g_rx_bar, irs, h_tilde1)
    gram = (amps.conj().T @ amps).real
    w = _pulse_weights(consts.t_s, consts.bandwidth)
    # delay derivative is orthogonal to the pulse, so the delay row decouples
    gram[0, 1:] = 0.0
    gram[1:, 0] = 0.0
    gram[0, 0] *= w[0] / w[1]
    return consts.p_tx * consts.t_s / consts.n0 * gram


def jacobian_t(layout: SystemLayout, pose: Pose, gain: PathGain, angles: ChannelAngles | None = None,
               zeta: float = 1.0) -> np.ndarray:
    """3x6 Jacobian of the channel parameters with respect to ``(p_x, p_y, alpha)``.

    The h~ columns differentiate ``h1 * zeta * lambda / (4 pi (d11 + d12))``
    with ``h1`` held fixed.
    """
    v, p = layout.v, pose.p
    dx, dy = p.x - v.x, p.y - v.y
    beta = v.z
    r2 = dx * dx + dy * dy + beta * beta
    r = math.sqrt(r2)
    rho2 = dx * dx + dy * dy
    ca, sa = math.cos(pose.alpha), math.sin(pose.alpha)
    s = dx * ca - dy * sa
    den_rx2 = r2 - s * s
    den_e2 = r2 - beta * beta
    if rho2 < _DENOM_FLOOR or den_rx2 < _DENOM_FLOOR**2 or den_e2 < _DENOM_FLOOR**2:
        raise DegenerateGeometry("Jacobian denominators vanish at this pose")
    den_rx = math.sqrt(den_rx2)
    den_e = math.sqrt(den_e2)
    if den_rx < _DENOM_FLOOR or den_e < _DENOM_FLOOR:
        raise DegenerateGeometry("Jacobian denominators vanish at this pose")

    h1 = complex(gain.h1)
    amp = -zeta * layout.wavelength / (4 * math.pi) / (gain.d11 + gain.d12) ** 2

    t = np.zeros((3, 6))
    t[0, 0] = dx / (SPEED_OF_LIGHT * r)
    t[0, 1] = (ca - dx * s / r2) / den_rx
    t[0, 2] = -dy / rho2
    t[0, 3] = beta * dx / (r2 * den_e)
    t[0, 4] = amp * h1.real * dx / r
    t[0, 5] = amp * h1.imag * dx / r

    t[1, 0] = dy / (SPEED_OF_LIGHT * r)
    t[1, 1] = -(sa + dy * s / r2) / den_rx
    t[1, 2] = dx / rho2
    t[1, 3] = beta * dy / (r2 * den_e)
    t[1, 4] = amp * h1.real * dy / r
    t[1, 5] = amp * h1.imag * dy / r

    t[2, 1] = -(dx * sa + dy * ca) / den_rx
    return t


def fim_pose(t: np.ndarray, j: np.ndarray) -> np.ndarray:
    return t @ j @ t.T


def _inv3_adjugate(m: np.ndarray) -> np.ndarray:
    a, b, c = m[0]
    d, e, f = m[1]
    g, h, i = m[2]
    cof = np.array([
        [e * i - f * h, -(d * i - f * g), d * h - e * g],
        [-(b * i - c * h), a * i - c * g, -(a * h - b * g)],
        [b * f - c * e, -(a * f - c * d), a * e - b * d],
    ])
    det = a * cof[0, 0] + b * cof[0, 1] + c * cof[0, 2]
    if det == 0.0:
        raise SingularFim("pose FIM has zero determinant")
    return cof.T / det


def bounds_from_fim(j_sum: np.ndarray) -> CrlbResult:
    """PEB / REB of a 3x3 pose FIM."""
    j_sum = np.asarray(j_sum, dtype=float)
    if not np.all(np.isfinite(j_sum)):
        raise SingularFim("non-finite pose FIM")
    cond = np.linalg.cond(j_sum)
    if not cond <= COND_LIMIT:
        raise SingularFim(f"pose FIM condition number {cond:.3e} exceeds {COND_LIMIT:.0e}")
    inv = _inv3_adjugate(j_sum)
    pos_var = inv[0, 0] + inv[1, 1]
    rot_var = inv[2, 2]
    if pos_var <= 0 or rot_var <= 0:
        raise SingularFim("inverse FIM has non-positive variances")
    return CrlbResult(math.sqrt(pos_var), math.sqrt(rot_var))


def accumulate_and_bound(pose_fims: Iterable[np.ndarray]) -> CrlbResult:
    fims = list(pose_fims)
    if not fims:
        raise InvalidArgument("need at least one pose FIM")
    # fixed summation order keeps the result deterministic
    total = np.zeros((3, 3))
    for f in fims:
        total = total + f
    return bounds_from_fim(total)


def expected_a(layout: SystemLayout, angles: ChannelAngles, phase, h_tilde1: complex,
               consts: RadioConstants, paper_literal_signs: bool = False,
               irs: IrsGains | None = None) -> np.ndarray:
    """Codebook average of the channel FIM in closed form.

    Averaging over complete DFT codebooks leaves only the MU array size and
    the IRS gains; the BS codebook size drops out.
    """
    _check_physical(consts.p_tx, consts.t_s, consts.n0, consts.bandwidth)
    irs = irs_gains(layout.l_side, angles, phase) if irs is None else irs
    n_m = layout.n_m
    d_over_lambda = 0.5
    k = consts.p_tx * consts.t_s / consts.n0
    h = complex(h_tilde1)
    h2 = abs(h) ** 2
    g, ga, ge = irs.gamma_irs, irs.gamma_irs_a_bar, irs.gamma_irs_e_bar
    g2 = abs(g) ** 2
    cos_rx = math.cos(angles.phi_rx1)
    # E[conj(gamma_rx_bar) gamma_rx] = -j * cross
    cross = math.pi * d_over_lambda * (n_m - 1) * cos_rx

    a = np.zeros((6, 6))
    a[0, 0] = k * math.pi**2 * consts.bandwidth**2 / 3 * h2 * g2
    a[1, 1] = (4 * k * math.pi**2 * d_over_lambda**2 * (n_m - 1) * (2 * n_m - 1) * cos_rx**2 / 6) * h2 * g2
    a[2, 2] = k * h2 * abs(ga) ** 2
    a[3, 3] = k * h2 * abs(ge) ** 2
    a[4, 4] = k * g2
    a[5, 5] = -k * g2 if paper_literal_signs else k * g2
    a[1, 2] = k * h2 * (-1j * cross * np.conj(g) * ga).real
    a[1, 3] = k * h2 * (-1j * cross * np.conj(g) * ge).real
    a[1, 4] = k * (-1j * cross * h.conjugate()).real * g2
    a[1, 5] = k * (cross * h.conjugate()).real * g2
    a[2, 3] = k * h2 * (np.conj(ga) * ge).real
    a[2, 4] = k * (h.conjugate() * np.conj(ga) * g).real
    a[2, 5] = k * (1j * h.conjugate() * np.conj(ga) * g).real
    a[3, 4] = k * (h.conjugate() * np.conj(ge) * g).real
    a[3, 5] = k * (1j * h.conjugate() * np.conj(ge) * g).real

    iu = np.triu_indices(6, 1)
    a[(iu[1], iu[0])] = a[iu]
    return a


def closed_form_peb_reb(varpi: float, t: np.ndarray, a: np.ndarray, t_s: float, t_c: float) -> CrlbResult:
    """Bounds as explicit functions of the time-allocation ratio: both scale as 1/sqrt(varpi)."""
    if not 0.0 < varpi <= 1.0:
        raise InvalidArgument(f"varpi must lie in (0, 1], got {varpi}")
    unit = bounds_from_fim(fim_pose(t, a))
    scale = math.sqrt(t_s / (t_c * varpi))
    return CrlbResult(unit.peb * scale, unit.reb * scale)


def unit_bounds(t: np.ndarray, a: np.ndarray, t_s: float, t_c: float) -> CrlbResult:
    """``sqrt(T_s/T_c)`` times the bounds of ``T A T^T``, i.e. the bounds at varpi = 1."""
    return closed_form_peb_reb(1.0, t, a, t_s, t_c)
