"""Placement geometry of the BS / IRS / MU triangle and the reflected-path channel.

Coordinates are meters.  The IRS lies parallel to the y-o-z plane, the BS array
is parallel to the x axis and the MU moves on the ground plane (z = 0).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateGeometry, DimensionMismatch

SPEED_OF_LIGHT = 2.99792458e8


@dataclass(frozen=True)
class Vec3:
    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(math.isfinite(c) for c in (self.x, self.y, self.z)):
            raise ValueError(f"non-finite coordinate in {self!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def norm(self) -> float:
        return math.sqrt(self.x**2 + self.y**2 + self.z**2)


@dataclass(frozen=True)
class Pose:
    """MU array center on the ground plus its in-plane rotation ``alpha``."""

    p: Vec3
    alpha: float

    def __post_init__(self):
        if self.p.z != 0.0:
            raise ValueError("MU must lie on the ground plane (p.z == 0)")
        if not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite")
        # canonical range [0, 2pi)
        object.__setattr__(self, "alpha", self.alpha % (2 * math.pi))

    @classmethod
    def from_xy(cls, px: float, py: float, alpha: float) -> "Pose":
        return cls(Vec3(float(px), float(py), 0.0), float(alpha))

    def shifted(self, dx: float = 0.0, dy: float = 0.0, dalpha: float = 0.0) -> "Pose":
        return Pose(Vec3(self.p.x + dx, self.p.y + dy, 0.0), self.alpha + dalpha)


@dataclass(frozen=True)
class SystemLayout:
    """Fixed infrastructure: BS and IRS centers (``q``, ``v``) plus the array sizes.

    ``l_side`` is the number of IRS rows (the IRS has ``l_side**2`` elements).
    ``n_b_total`` / ``n_m`` are the BS and MU antenna counts.
    """

    q: Vec3
    v: Vec3
    n_b_total: int
    n_m: int
    l_side: int
    wavelength: float

    def __post_init__(self):
        if self.l_side < 1 or self.n_b_total < 1 or self.n_m < 1:
            raise ValueError("array sizes must be >= 1")
        if self.wavelength <= 0:
            raise ValueError("wavelength must be positive")
        if (self.v - self.q).norm() == 0.0:
            raise DegenerateGeometry("IRS and BS centers coincide")

    @property
    def element_spacing(self) -> float:
        # half-wavelength spacing is fixed for every array in the system
        return self.wavelength / 2

    @property
    def n_irs(self) -> int:
        return self.l_side**2

    def with_l_side(self, l_side: int) -> "SystemLayout":
        return replace(self, l_side=l_side)


@dataclass(frozen=True)
class ChannelAngles:
    phi_tx1: float
    phi_irs1_a: float
    phi_irs1_e: float
    phi_irs2_a: float
    phi_irs2_e: float
    phi_rx1: float


@dataclass(frozen=True)
class PathGain:
    h1: complex
    rho1: float
    h_tilde1: complex
    tau1: float
    d11: float
    d12: float


def _clip_unit(x: float) -> float:
    # guard arcsin/arccos against 1 + 1e-16 style rounding
    return min(1.0, max(-1.0, x))


def bs_irs_angles(layout: SystemLayout) -> tuple[float, float, float]:
    """(phi_tx1, phi_irs1_a, phi_irs1_e) -- fixed once BS and IRS are deployed."""
    q, v = layout.q, layout.v
    d11 = (v - q).norm()
    horiz = math.hypot(v.x - q.x, v.y - q.y)
    if horiz == 0.0:
        raise DegenerateGeometry("BS directly above/below the IRS: azimuth undefined")
    phi_tx1 = math.asin(_clip_unit((v.x - q.x) / d11))
    phi_irs1_a = math.asin(_clip_unit((v.y - q.y) / horiz))
    phi_irs1_e = math.acos(_clip_unit((v.z - q.z) / d11))
    return phi_tx1, phi_irs1_a, phi_irs1_e


def mu_angles(layout: SystemLayout, pose: Pose) -> tuple[float, float, float]:
    """(phi_irs2_a, phi_irs2_e, phi_rx1) for the IRS -> MU hop."""
    v, p = layout.v, pose.p
    dx, dy = p.x - v.x, p.y - v.y
    horiz = math.hypot(dx, dy)
    if horiz == 0.0:
        raise DegenerateGeometry("MU directly below the IRS: azimuth undefined")
    d12 = (p - v).norm()
    beta_irs = v.z
    ca, sa = math.cos(pose.alpha), math.sin(pose.alpha)
    phi_irs2_a = math.asin(_clip_unit(dy / horiz))
    phi_irs2_e = math.acos(_clip_unit(beta_irs / d12))
    phi_rx1 = math.asin(_clip_unit((dx * ca - dy * sa) / d12))
    return phi_irs2_a, phi_irs2_e, phi_rx1


def derive_angles(layout: SystemLayout, pose: Pose) -> ChannelAngles:
    phi_tx1, phi_irs1_a, phi_irs1_e = bs_irs_angles(layout)
    phi_irs2_a, phi_irs2_e, phi_rx1 = mu_angles(layout, pose)
    return ChannelAngles(phi_tx1, phi_irs1_a, phi_irs1_e, phi_irs2_a, phi_irs2_e, phi_rx1)


def path_loss_factor(wavelength: float, total_distance: float, zeta: float = 1.0) -> float:
    """Return ``1/rho1 = zeta**2 * (wavelength / (4 pi d))**2``."""
    return zeta**2 * (wavelength / (4 * math.pi * total_distance)) ** 2


def path_delay_and_gain(layout: SystemLayout, pose: Pose, h1: complex, zeta: float = 1.0) -> PathGain:
    if zeta <= 0:
        raise ValueError("zeta must be positive")
    d11 = (layout.v - layout.q).norm()
    d12 = (pose.p - layout.v).norm()
    if d12 == 0.0:
        raise DegenerateGeometry("MU coincides with the IRS center")
    inv_rho = path_loss_factor(layout.wavelength, d11 + d12, zeta)
    rho1 = 1.0 / inv_rho
    return PathGain(
        h1=complex(h1),
        rho1=rho1,
        h_tilde1=complex(h1) * math.sqrt(inv_rho),
        tau1=(d11 + d12) / SPEED_OF_LIGHT,
        d11=d11,
        d12=d12,
    )


def draw_unit_gain(rng: np.random.Generator) -> complex:
    """Unit-modulus channel coefficient exp(j 2 pi u), u ~ U(0, 1)."""
    return complex(np.exp(2j * np.pi * rng.uniform()))


def assemble_channel_matrices(layout: SystemLayout, angles: ChannelAngles, phase, gain: PathGain,
                              n_b: int | None = None) -> np.ndarray:
    """Full ``N_M x N_B`` reflected channel ``h_tilde1 * H_IM @ Theta @ H_BI``.

    Only meant as a reference path for checking the factored scalar pipeline;
    it materialises the N x N phase-shift matrix.
    """
    from .arrays import steering_irs, steering_ula

    n_b = layout.n_b_total if n_b is None else n_b
    n = layout.n_irs
    if len(phase.thetas) != n:
        raise DimensionMismatch(f"phase config has {len(phase.thetas)} entries, IRS has {n}")
    a_tx = steering_ula(n_b, math.sin(angles.phi_tx1))
    a_rx = steering_ula(layout.n_m, math.sin(angles.phi_rx1))
    a_irs1 = steering_irs(layout.l_side, angles.phi_irs1_a, angles.phi_irs1_e)
    a_irs2 = steering_irs(layout.l_side, angles.phi_irs2_a, angles.phi_irs2_e)
    h_bi = np.outer(a_irs1, a_tx.conj())
    h_im = np.outer(a_rx, a_irs2.conj())
    theta = np.diag(phase.diagonal())
    return gain.h_tilde1 * (h_im @ theta @ h_bi)
