"""Time-allocation optimizer: weighted (PEB + REB) minus rate, solved through its KKT system."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptySolution, InvalidArgument
from .fim import bounds_from_fim, fim_pose
from .link import rate_slope
from .radio import RadioConstants

LN2 = math.log(2.0)
BRACKET_LOW = 1e-9


@dataclass(frozen=True)
class ObjectiveParams:
    """``xhat``: PREB at varpi = 1; ``yhat``: ideal SNR per unit varpi; ``xi``: rate weight."""

    xhat: float
    yhat: float
    xi: float
    bandwidth: float
    t_o: float
    t_c: float

    def __post_init__(self):
        if not (self.xhat > 0 and self.yhat > 0 and self.xi >= 0):
            raise InvalidArgument("need xhat > 0, yhat > 0, xi >= 0")
        if not (self.bandwidth > 0 and 0 <= self.t_o < self.t_c):
            raise InvalidArgument("invalid bandwidth or timing")

    @property
    def varpi_max(self) -> float:
        return 1.0 - self.t_o / self.t_c


@dataclass(frozen=True)
class KktSolution:
    varpi1: float | None
    varpi2: float
    lambda1: float
    varpi_star: float
    objective_at_star: float


def compute_objective_params(t_hat: np.ndarray, a_hat: np.ndarray, h_tilde1_hat: complex, n_irs: int,
                             xi: float, consts: RadioConstants) -> ObjectiveParams:
    """Collapse the estimated Jacobian / expectation matrix / gain into the two scalars."""
    unit = bounds_from_fim(fim_pose(t_hat, a_hat))
    scale = math.sqrt(consts.t_s / consts.t_c)
    xhat = scale * (unit.peb + unit.reb)
    yhat = rate_slope(h_tilde1_hat, n_irs, consts)
    return ObjectiveParams(xhat, yhat, xi, consts.bandwidth, consts.t_o, consts.t_c)


def _check_domain(varpi, params):
    if not 0.0 < varpi <= params.varpi_max * (1 + 1e-12):
        raise InvalidArgument(f"varpi={varpi} outside (0, {params.varpi_max}]")


def preb(varpi: float, params: ObjectiveParams) -> float:
    return params.xhat / math.sqrt(varpi)


def rate(varpi: float, params: ObjectiveParams) -> float:
    return params.bandwidth * max(params.varpi_max - varpi, 0.0) * math.log2(1.0 + params.yhat * varpi)


def objective(varpi: float, params: ObjectiveParams) -> float:
    _check_domain(varpi, params)
    return preb(varpi, params) - params.xi * rate(varpi, params)


def objective_grid(varpi: np.ndarray, params: ObjectiveParams) -> np.ndarray:
    varpi = np.asarray(varpi, dtype=float)
    r = params.bandwidth * np.clip(params.varpi_max - varpi, 0.0, None) * np.log2(1.0 + params.yhat * varpi)
    return params.xhat / np.sqrt(varpi) - params.xi * r


def stationarity(varpi: float, params: ObjectiveParams) -> float:
    """Derivative of the objective; strictly increasing in varpi."""
    yv = params.yhat * varpi
    b = params.bandwidth
    d_rate = params.yhat * b * (params.varpi_max - varpi) / ((1.0 + yv) * LN2) - b * math.log2(1.0 + yv)
    return -0.5 * varpi**-1.5 * params.xhat - params.xi * d_rate


def solve_stationarity(params: ObjectiveParams, tol: float = 0.0) -> float | None:
    """Interior root of the stationarity condition (the lambda1 = 0 branch), or None.

    Bisection runs until the bracket is narrower than ``tol`` or can no longer
    be split in floating point (the default).
    """
    hi = params.varpi_max
    if stationarity(hi, params) < 0.0:
        return None
    lo = BRACKET_LOW
    while stationarity(lo, params) > 0.0:
        # root below the default bracket; keep shrinking while the domain allows
        lo *= 1e-3
        if lo < 1e-300:
            return None
    for _ in range(2000):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if stationarity(mid, params) > 0.0:
            hi = mid
        else:
            lo = mid
    flo, fhi = abs(stationarity(lo, params)), abs(stationarity(hi, params))
    return lo if flo <= fhi else hi


def boundary_multiplier(params: ObjectiveParams) -> float:
    vmax = params.varpi_max
    return 0.5 * vmax**-1.5 * params.xhat - params.xi * params.bandwidth * math.log2(1.0 + params.yhat * vmax)


def algorithm1(params: ObjectiveParams) -> KktSolution:
    """Pick the KKT point with the lower objective among the interior and boundary candidates."""
    vmax = params.varpi_max
    varpi1 = solve_stationarity(params)
    lam = boundary_multiplier(params)
    interior_ok = varpi1 is not None and 0.0 < varpi1 <= vmax
    if interior_ok and lam >= 0.0:
        star = min((varpi1, vmax), key=lambda w: objective(w, params))
    elif interior_ok:
        star = varpi1
    elif lam >= 0.0:
        star = vmax
    else:
        raise EmptySolution("no candidate satisfies the KKT conditions")
    return KktSolution(varpi1, vmax, lam, star, objective(star, params))


def grid_oracle(params: ObjectiveParams, grid_points: int = 100_000) -> float:
    """Brute-force argmin over ``varpi_max * k / grid_points``, k = 1..grid_points."""
    if grid_points < 1000:
        raise InvalidArgument("grid_points must be >= 1000")
    grid = params.varpi_max * np.arange(1, grid_points + 1) / grid_points
    return float(grid[int(np.argmin(objective_grid(grid, params)))])
