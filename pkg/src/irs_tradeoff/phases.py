"""IRS phase-shift configurations: localization/rate matched designs and a random baseline."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrays import steering_irs


@dataclass(frozen=True, eq=False)
class PhaseShiftConfig:
    """Diagonal of the IRS reflection matrix, ``delta * exp(j thetas)``."""

    thetas: np.ndarray
    delta: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.delta <= 1.0:
            raise ValueError("reflection coefficient delta must lie in (0, 1]")
        object.__setattr__(self, "thetas", np.asarray(self.thetas, dtype=float).ravel())

    @property
    def n(self) -> int:
        return self.thetas.shape[0]

    def diagonal(self) -> np.ndarray:
        return self.delta * np.exp(1j * self.thetas)

    def __eq__(self, other):
        if not isinstance(other, PhaseShiftConfig):
            return NotImplemented
        return self.delta == other.delta and np.array_equal(self.thetas, other.thetas)


def matched_phases(bs_angles: tuple[float, float], mu_angles: tuple[float, float], l_side: int,
                   delta: float = 1.0) -> PhaseShiftConfig:
    """Phases that co-phase the BS->IRS and IRS->MU responses element by element."""
    a1 = steering_irs(l_side, *bs_angles)
    a2 = steering_irs(l_side, *mu_angles)
    return PhaseShiftConfig(np.angle(a2 * a1.conj()), delta)


def design_theta1(angles_bs_irs, est_prev, l_side: int, delta: float = 1.0) -> PhaseShiftConfig:
    """Localization-stage configuration, built from the previous period's IRS->MU angle estimates.

    ``angles_bs_irs`` is ``(phi_irs1_a, phi_irs1_e)``; ``est_prev`` is
    ``(phi_irs2_a_hat, phi_irs2_e_hat)`` from period ``l-1``.
    """
    return matched_phases(angles_bs_irs, est_prev, l_side, delta)


def design_theta2(angles_bs_irs, est_now, l_side: int, delta: float = 1.0) -> PhaseShiftConfig:
    """Data-stage configuration, built from the current period's angle estimates."""
    return matched_phases(angles_bs_irs, est_now, l_side, delta)


def random_phases(n: int, rng_seed=None, delta: float = 1.0) -> PhaseShiftConfig:
    """i.i.d. phases uniform on [-pi, pi].  ``rng_seed`` may be a seed or a Generator."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(rng_seed)
    return PhaseShiftConfig(rng.uniform(-np.pi, np.pi, size=n), delta)
