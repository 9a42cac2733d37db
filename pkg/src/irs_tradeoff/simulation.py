"""Multi-period working-process simulator with mobility and synthetic estimation errors.

Each period designs the localization-stage IRS from the previous estimates,
runs the full beam sweep (bounds plus fresh estimates), picks a beam pair with
a re-designed IRS, and finally optimizes the next period's time allocation.  Estimates are
truth plus injected errors; no estimator is simulated.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import fim as fimlib
from .arrays import irs_gains
from .errors import EmptySolution, SingularFim
from .geometry import PathGain, Pose, bs_irs_angles, derive_angles, draw_unit_gain, path_delay_and_gain
from .link import best_pair_for, eadr_closed_form, eadr_exact
from .optimizer import algorithm1, compute_objective_params
from .phases import PhaseShiftConfig, design_theta1, design_theta2, random_phases

log = logging.getLogger(__name__)

# RNG draw sites: one independent stream per (seed, trial, period, site)
SITE_MOBILITY, SITE_ESTIMATION, SITE_GAIN, SITE_PHASE, SITE_BOOTSTRAP = range(5)


@dataclass(frozen=True)
class ErrorModel:
    eps_xy: float = 0.0
    eps_alpha: float = 0.0
    sigma_h_sq: float = 0.0

    def __post_init__(self):
        if min(self.eps_xy, self.eps_alpha, self.sigma_h_sq) < 0:
            raise ValueError("error model parameters must be non-negative")


@dataclass(frozen=True)
class MobilityModel:
    upsilon_xy: float = 0.0

    def __post_init__(self):
        if self.upsilon_xy < 0:
            raise ValueError("upsilon_xy must be non-negative")


def stream(seed: int, trial: int, period: int, site: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(trial), int(period), int(site))))


def _disk_offset(radius: float, rng: np.random.Generator) -> tuple[float, float]:
    u, ang = rng.uniform(), rng.uniform(0.0, 2 * math.pi)
    r = radius * math.sqrt(u)
    return r * math.cos(ang), r * math.sin(ang)


def draw_mobility(pose: Pose, model: MobilityModel, rng: np.random.Generator) -> Pose:
    """Move the MU uniformly within a disk of radius ``upsilon_xy``; rotation is kept."""
    dx, dy = _disk_offset(model.upsilon_xy, rng)
    if dx == 0.0 and dy == 0.0:
        return pose
    return Pose.from_xy(pose.p.x + dx, pose.p.y + dy, pose.alpha)


@dataclass(frozen=True)
class Estimate:
    pose: Pose
    gain: PathGain
    angles: object


def apply_estimation_errors(layout, pose: Pose, gain: PathGain, model: ErrorModel, rng: np.random.Generator,
                            zeta: float = 1.0) -> Estimate:
    """Perturb the pose (disk offset, uniform rotation) and the gain (circular Gaussian); re-derive angles."""
    dx, dy = _disk_offset(model.eps_xy, rng)
    dalpha = rng.uniform(-model.eps_alpha, model.eps_alpha) if model.eps_alpha > 0 else 0.0
    noise = rng.standard_normal(2) * math.sqrt(model.sigma_h_sq / 2)
    dh = complex(noise[0], noise[1])

    pose_hat = pose if (dx == 0.0 and dy == 0.0 and dalpha == 0.0) else pose.shifted(dx, dy, dalpha)
    if pose_hat.p == pose.p and dh == 0:
        gain_hat = gain
    else:
        h_tilde_hat = gain.h_tilde1 + dh
        geo = path_delay_and_gain(layout, pose_hat, 1.0, zeta)
        # h1 consistent with the perturbed gain under the perturbed path loss
        h1_hat = h_tilde_hat * math.sqrt(geo.rho1)
        gain_hat = PathGain(h1_hat, geo.rho1, h_tilde_hat, geo.tau1, geo.d11, geo.d12)
    return Estimate(pose_hat, gain_hat, derive_angles(layout, pose_hat))


@dataclass
class PeriodState:
    """What period ``l`` inherits from period ``l-1``."""

    index: int
    pose: Pose
    est_irs2: tuple[float, float]
    varpi: float
    h1: complex


@dataclass
class PeriodRecord:
    period: int
    pose_true: Pose
    pose_est: Pose
    n_b: int
    varpi: float
    peb: float
    reb: float
    peb_closed: float
    reb_closed: float
    eadr: float
    eadr_closed: float
    eadr_est: float
    preb_est: float
    index_b: int
    index_m: int
    gamma_irs_abs: float
    varpi_next: float
    kkt: str
    flags: list = field(default_factory=list)


def n_b_for(varpi: float, cfg) -> int:
    """Active BS antennas implied by a time-allocation ratio (all MU antennas are always used)."""
    n = round(varpi * cfg.t_c / (cfg.n_antennas * cfg.ts_s))
    return int(min(max(n, 1), cfg.n_antennas))


def estimated_objective(cfg, layout, consts, est: Estimate):
    """Objective coefficients built only from estimates, with the data-stage IRS matched to them."""
    bs = bs_irs_angles(layout)
    phase_hat = design_theta2(bs[1:], (est.angles.phi_irs2_a, est.angles.phi_irs2_e), layout.l_side, cfg.delta)
    a_hat = fimlib.expected_a(layout, est.angles, phase_hat, est.gain.h_tilde1, consts,
                              paper_literal_signs=cfg.paper_literal_signs)
    t_hat = fimlib.jacobian_t(layout, est.pose, est.gain, zeta=cfg.zeta)
    return compute_objective_params(t_hat, a_hat, est.gain.h_tilde1, layout.n_irs, cfg.xi, consts)


@dataclass
class LinkMetrics:
    n_b: int
    varpi: float
    bound: fimlib.CrlbResult
    closed: fimlib.CrlbResult
    pair: object
    eadr: float
    eadr_closed: float
    flags: list


def evaluate_link(cfg, layout, consts, t, gain, angles, irs1, a, irs2, n_b: int, theta1) -> LinkMetrics:
    """Steps 2-3 for one active-antenna count: bounds from the sweep, then the rate of the chosen beams."""
    m = n_b * layout.n_m
    varpi = consts.varpi_of(m)
    flags = []
    j_eta = fimlib.sweep_fim(layout, angles, theta1, gain.h_tilde1, consts, n_b=n_b, irs=irs1)
    try:
        bound = fimlib.bounds_from_fim(fimlib.fim_pose(t, j_eta))
        closed = fimlib.closed_form_peb_reb(varpi, t, a, consts.t_s, consts.t_c)
    except SingularFim as exc:
        flags.append(f"singular-fim: {exc}")
        bound = closed = fimlib.CrlbResult(math.inf, math.inf)
    pair, _ = best_pair_for(n_b, layout.n_m, angles, irs1.gamma_irs, gain.h_tilde1, consts)
    rate = eadr_exact(pair, angles, irs2.gamma_irs, gain.h_tilde1, m, consts)
    rate_cf = eadr_closed_form(varpi, gain.h_tilde1, layout.n_irs, consts)
    return LinkMetrics(n_b, varpi, bound, closed, pair, rate.eadr, rate_cf.eadr, flags)


def run_period(cfg, state: PeriodState, seed: int, trial: int, fixed_n_b: int | None = None,
               random_phase: bool = False) -> tuple[PeriodRecord, PeriodState]:
    layout, consts = cfg.layout(), cfg.consts()
    l = state.index
    pose = state.pose
    gain = path_delay_and_gain(layout, pose, state.h1, cfg.zeta)
    angles = derive_angles(layout, pose)
    bs = (angles.phi_irs1_a, angles.phi_irs1_e)

    # Step 1: localization-stage IRS configuration from period l-1 estimates
    if random_phase:
        theta1 = random_phases(layout.n_irs, stream(seed, trial, l, SITE_PHASE), cfg.delta)
    else:
        theta1 = design_theta1(bs, state.est_irs2, layout.l_side, cfg.delta)
    irs1 = irs_gains(layout.l_side, angles, theta1)
    t = fimlib.jacobian_t(layout, pose, gain, angles, zeta=cfg.zeta)
    a = fimlib.expected_a(layout, angles, theta1, gain.h_tilde1, consts,
                          paper_literal_signs=cfg.paper_literal_signs, irs=irs1)

    # Step 2: the sweep also yields this period's (noisy) estimates
    est = apply_estimation_errors(layout, pose, gain, cfg.error_model(), stream(seed, trial, l, SITE_ESTIMATION),
                                  cfg.zeta)
    est_irs2 = (est.angles.phi_irs2_a, est.angles.phi_irs2_e)

    # Step 3: data-stage IRS configuration from the fresh estimates
    theta2 = theta1 if random_phase else design_theta2(bs, est_irs2, layout.l_side, cfg.delta)
    irs2 = irs1 if random_phase else irs_gains(layout.l_side, angles, theta2)
    n_b = fixed_n_b if fixed_n_b is not None else n_b_for(state.varpi, cfg)
    link = evaluate_link(cfg, layout, consts, t, gain, angles, irs1, a, irs2, n_b, theta1)
    flags = list(link.flags)
    rate_est = eadr_closed_form(link.varpi, est.gain.h_tilde1, layout.n_irs, consts)

    # Step 4: optimize the next period's time allocation from estimates only
    next_varpi, kkt, preb_est = state.varpi, "fallback", math.nan
    try:
        params = estimated_objective(cfg, layout, consts, est)
        preb_est = params.xhat / math.sqrt(link.varpi)
        sol = algorithm1(params)
        next_varpi = sol.varpi_star
        kkt = "boundary" if sol.varpi_star == sol.varpi2 else "interior"
    except EmptySolution:
        log.warning("period %d: empty KKT solution, keeping varpi=%.6g", l, state.varpi)
        flags.append("empty-solution")
    except SingularFim as exc:
        log.warning("period %d: estimated FIM singular (%s), keeping varpi", l, exc)
        flags.append("singular-estimated-fim")

    record = PeriodRecord(
        period=l, pose_true=pose, pose_est=est.pose, n_b=n_b, varpi=link.varpi,
        peb=link.bound.peb, reb=link.bound.reb, peb_closed=link.closed.peb, reb_closed=link.closed.reb,
        eadr=link.eadr, eadr_closed=link.eadr_closed, eadr_est=rate_est.eadr, preb_est=preb_est,
        index_b=link.pair.index_b, index_m=link.pair.index_m, gamma_irs_abs=abs(irs1.gamma_irs),
        varpi_next=next_varpi, kkt=kkt, flags=flags,
    )
    # Step 5: hand over to period l+1 (the MU may move in between)
    nxt_pose = draw_mobility(pose, cfg.mobility_model(), stream(seed, trial, l + 1, SITE_MOBILITY))
    nxt = PeriodState(l + 1, nxt_pose, est_irs2, next_varpi, state.h1)
    return record, nxt


def snapshot_sweep(cfg, seed: int, trial: int, n_b_values, random_phase: bool = False) -> list[LinkMetrics]:
    """First-period metrics for several active-antenna counts sharing one set of random draws.

    Equivalent to period 0 of ``run_trial`` with ``fixed_n_b`` set to each value in turn.
    """
    layout, consts = cfg.layout(), cfg.consts()
    state = bootstrap_state(cfg, seed, trial)
    pose = state.pose
    gain = path_delay_and_gain(layout, pose, state.h1, cfg.zeta)
    angles = derive_angles(layout, pose)
    bs = (angles.phi_irs1_a, angles.phi_irs1_e)
    if random_phase:
        theta1 = random_phases(layout.n_irs, stream(seed, trial, 0, SITE_PHASE), cfg.delta)
        theta2 = theta1
    else:
        theta1 = design_theta1(bs, state.est_irs2, layout.l_side, cfg.delta)
        est = apply_estimation_errors(layout, pose, gain, cfg.error_model(),
                                      stream(seed, trial, 0, SITE_ESTIMATION), cfg.zeta)
        theta2 = design_theta2(bs, (est.angles.phi_irs2_a, est.angles.phi_irs2_e), layout.l_side, cfg.delta)
    irs1 = irs_gains(layout.l_side, angles, theta1)
    irs2 = irs1 if theta2 is theta1 else irs_gains(layout.l_side, angles, theta2)
    t = fimlib.jacobian_t(layout, pose, gain, angles, zeta=cfg.zeta)
    a = fimlib.expected_a(layout, angles, theta1, gain.h_tilde1, consts,
                          paper_literal_signs=cfg.paper_literal_signs, irs=irs1)
    return [evaluate_link(cfg, layout, consts, t, gain, angles, irs1, a, irs2, int(nb), theta1)
            for nb in n_b_values]


def bootstrap_state(cfg, seed: int, trial: int, varpi: float | None = None) -> PeriodState:
    """Period-0 state: the missing prior estimate is truth plus the configured error."""
    layout = cfg.layout()
    pose = cfg.pose()
    h1 = draw_unit_gain(stream(seed, trial, 0, SITE_GAIN))
    gain = path_delay_and_gain(layout, pose, h1, cfg.zeta)
    prior = apply_estimation_errors(layout, pose, gain, cfg.error_model(), stream(seed, trial, 0, SITE_BOOTSTRAP),
                                    cfg.zeta)
    varpi0 = cfg.consts().varpi_max if varpi is None else varpi
    return PeriodState(0, pose, (prior.angles.phi_irs2_a, prior.angles.phi_irs2_e), varpi0, h1)


def run_trial(cfg, seed: int, trial: int, n_periods: int, fixed_n_b: int | None = None,
              random_phase: bool = False) -> list[PeriodRecord]:
    state = bootstrap_state(cfg, seed, trial)
    records = []
    for _ in range(n_periods):
        rec, state = run_period(cfg, state, seed, trial, fixed_n_b, random_phase)
        records.append(rec)
    return records


METRICS = ("peb", "reb", "peb_closed", "reb_closed", "eadr", "eadr_closed", "eadr_est", "preb_est",
           "varpi_next", "gamma_irs_abs")


@dataclass
class CampaignSummary:
    n_trials: int
    mean: dict
    sem: dict
    per_trial: dict


def run_campaign(cfg, n_trials: int, n_periods: int, seed: int, fixed_n_b: int | None = None,
                 random_phase: bool = False, metrics=METRICS) -> CampaignSummary:
    """Monte Carlo over independent trials; period 0 (bootstrap) is excluded when n_periods > 1."""
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    per_trial = {k: np.empty(n_trials) for k in metrics}
    for trial in range(n_trials):
        recs = run_trial(cfg, seed, trial, n_periods, fixed_n_b, random_phase)
        used = recs[1:] if len(recs) > 1 else recs
        for k in metrics:
            per_trial[k][trial] = np.mean([getattr(r, k) for r in used])
    mean = {k: float(np.mean(v)) for k, v in per_trial.items()}
    sem = {k: float(np.std(v, ddof=1) / math.sqrt(n_trials)) if n_trials > 1 else 0.0
           for k, v in per_trial.items()}
    return CampaignSummary(n_trials, mean, sem, per_trial)
