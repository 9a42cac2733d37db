"""Radio and timing constants shared by the bound and rate computations."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidArgument


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


@dataclass(frozen=True)
class RadioConstants:
    """Transmit power ``p_tx`` (W), noise PSD ``n0`` (W/Hz), bandwidth (Hz) and
    the pilot / optimization / period durations (s)."""

    p_tx: float
    n0: float
    bandwidth: float
    t_s: float
    t_o: float
    t_c: float

    def __post_init__(self):
        for name in ("p_tx", "n0", "bandwidth", "t_s", "t_c"):
            if not getattr(self, name) > 0:
                raise InvalidArgument(f"{name} must be positive")
        if not 0 <= self.t_o < self.t_c:
            raise InvalidArgument("t_o must lie in [0, t_c)")

    @classmethod
    def from_dbm(cls, ptx_dbm, noise_dbm, bandwidth, t_s, t_o, t_c) -> "RadioConstants":
        """Build from dBm powers; ``noise_dbm`` is the total noise power sigma_w^2."""
        return cls(dbm_to_watts(ptx_dbm), dbm_to_watts(noise_dbm) / bandwidth, bandwidth, t_s, t_o, t_c)

    @property
    def noise_power(self) -> float:
        return self.n0 * self.bandwidth

    @property
    def varpi_max(self) -> float:
        """Largest admissible time-allocation ratio, ``1 - T_o / T_c``."""
        return 1.0 - self.t_o / self.t_c

    def varpi_of(self, m: int) -> float:
        """Time-allocation ratio used by ``m`` pilot slots."""
        return m * self.t_s / self.t_c
