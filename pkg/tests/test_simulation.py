import math

import numpy as np
import pytest

from irs_tradeoff.simulation import (ErrorModel, MobilityModel, apply_estimation_errors, bootstrap_state,
                                     draw_mobility, n_b_for, run_campaign, run_period, run_trial, snapshot_sweep,
                                     stream)


def test_zero_mobility_keeps_pose(pose):
    assert draw_mobility(pose, MobilityModel(0.0), np.random.default_rng(0)) is pose


def test_mobility_disk_moments(pose):
    rng = np.random.default_rng(1)
    model = MobilityModel(7.0)
    radii = []
    for _ in range(100_000):
        nxt = draw_mobility(pose, model, rng)
        radii.append(math.hypot(nxt.p.x - pose.p.x, nxt.p.y - pose.p.y))
        assert nxt.alpha == pose.alpha
    radii = np.array(radii)
    assert radii.max() <= 7.0 + 1e-12
    assert radii.mean() == pytest.approx(2 / 3 * 7, rel=0.01)


def test_mobility_reproducible(pose):
    a = [draw_mobility(pose, MobilityModel(7), stream(3, 1, k, 0)).p for k in range(5)]
    b = [draw_mobility(pose, MobilityModel(7), stream(3, 1, k, 0)).p for k in range(5)]
    assert a == b


def test_zero_error_model_returns_truth(layout, pose, gain):
    est = apply_estimation_errors(layout, pose, gain, ErrorModel(), np.random.default_rng(0))
    assert est.pose is pose and est.gain is gain


def test_error_support_bounds(layout, pose, gain):
    rng = np.random.default_rng(2)
    model = ErrorModel(7.0, math.pi / 6, 0.0)
    for _ in range(2000):
        est = apply_estimation_errors(layout, pose, gain, model, rng)
        assert math.hypot(est.pose.p.x - pose.p.x, est.pose.p.y - pose.p.y) <= 7.0 + 1e-12
        d_alpha = (est.pose.alpha - pose.alpha + math.pi) % (2 * math.pi) - math.pi
        assert abs(d_alpha) <= math.pi / 6 + 1e-12


def test_gain_error_variance(layout, pose, gain):
    rng = np.random.default_rng(3)
    model = ErrorModel(0.0, 0.0, 1e-11)
    dh = np.array([apply_estimation_errors(layout, pose, gain, model, rng).gain.h_tilde1 - gain.h_tilde1
                   for _ in range(100_000)])
    assert np.mean(np.abs(dh) ** 2) == pytest.approx(1e-11, rel=0.02)
    assert np.var(dh.real) == pytest.approx(np.var(dh.imag), rel=0.05)


def test_estimated_angles_follow_estimated_pose(layout, pose, gain):
    from irs_tradeoff.geometry import derive_angles
    est = apply_estimation_errors(layout, pose, gain, ErrorModel(5.0, 0.2, 0.0), np.random.default_rng(4))
    assert est.angles == derive_angles(layout, est.pose)


def test_stationary_without_errors(cfg):
    recs = run_trial(cfg, 0, 0, 5)
    keys = ("peb", "reb", "eadr", "varpi", "varpi_next", "index_b", "index_m")
    for r in recs[2:]:
        assert all(getattr(r, k) == getattr(recs[1], k) for k in keys)
    assert recs[1].kkt == "interior"


def test_first_period_uses_bootstrap_ratio(cfg):
    state = bootstrap_state(cfg, 0, 0)
    assert state.varpi == cfg.consts().varpi_max
    rec, nxt = run_period(cfg, state, 0, 0)
    assert rec.n_b == cfg.n_antennas and rec.eadr == 0.0
    assert nxt.index == 1 and nxt.varpi == rec.varpi_next


def test_n_b_quantization(cfg):
    assert n_b_for(cfg.consts().varpi_max, cfg) == 32
    assert n_b_for(1e-6, cfg) == 1
    assert n_b_for(cfg.consts().varpi_of(5 * 32), cfg) == 5


def test_mobility_degrades_localization_gain(cfg):
    moved = cfg.replace(upsilon_xy_m=7.0)
    n = cfg.layout().n_irs
    recs = [run_trial(moved, 0, k, 3, fixed_n_b=8) for k in range(10)]
    assert all(r.gamma_irs_abs < n for rs in recs for r in rs[1:])
    still = run_campaign(cfg, 50, 2, 0, fixed_n_b=8)
    moving = run_campaign(moved, 50, 2, 0, fixed_n_b=8)
    assert moving.mean["peb"] > still.mean["peb"]


def test_localization_error_lowers_rate(cfg):
    base = run_campaign(cfg, 50, 2, 0, fixed_n_b=4)
    noisy = run_campaign(cfg.replace(eps_xy_m=7.0, eps_alpha_rad=math.pi / 6), 50, 2, 0, fixed_n_b=4)
    assert noisy.mean["eadr"] <= base.mean["eadr"]


def test_single_trial_campaign_equals_chain(cfg):
    s = run_campaign(cfg, 1, 1, 4, fixed_n_b=6)
    rec = run_trial(cfg, 4, 0, 1, fixed_n_b=6)[0]
    assert s.mean["peb"] == rec.peb and s.mean["eadr"] == rec.eadr and s.sem["peb"] == 0.0


def test_campaign_deterministic(cfg):
    noisy = cfg.replace(eps_xy_m=3.0, upsilon_xy_m=2.0, sigma_h_sq=1e-11)
    a, b = run_campaign(noisy, 6, 3, 11), run_campaign(noisy, 6, 3, 11)
    assert a.mean == b.mean and a.sem == b.sem


def test_larger_irs_has_lower_bound_everywhere(cfg):
    small, large = cfg.replace(l_side=8), cfg.replace(l_side=12)
    for n_b in range(1, 33):
        p_small = run_campaign(small, 50, 2, 0, fixed_n_b=n_b, metrics=("peb",)).mean["peb"]
        p_large = run_campaign(large, 50, 2, 0, fixed_n_b=n_b, metrics=("peb",)).mean["peb"]
        assert math.log10(p_large) < math.log10(p_small)


def test_snapshot_matches_first_period(cfg):
    noisy = cfg.replace(eps_xy_m=7.0, eps_alpha_rad=0.5)
    for random_phase in (False, True):
        pts = snapshot_sweep(noisy, 2, 3, [2, 9], random_phase)
        for pt in pts:
            rec = run_trial(noisy, 2, 3, 1, fixed_n_b=pt.n_b, random_phase=random_phase)[0]
            assert (rec.peb, rec.reb, rec.eadr) == (pt.bound.peb, pt.bound.reb, pt.eadr)


def test_invalid_models():
    with pytest.raises(ValueError):
        ErrorModel(-1.0)
    with pytest.raises(ValueError):
        MobilityModel(-0.1)
    with pytest.raises(ValueError):
        run_campaign(None, 0, 1, 0)
