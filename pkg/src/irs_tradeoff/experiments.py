"""Experiment runners and CSV/JSON emission of their sweeps."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import UnknownExperiment
from .geometry import derive_angles, path_delay_and_gain
from .optimizer import algorithm1, preb as preb_curve, rate as rate_curve
from .simulation import Estimate, bootstrap_state, estimated_objective, run_campaign, snapshot_sweep


@dataclass
class SweepResult:
    name: str
    variable: str
    grid: list
    rows: list[dict] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.rows) != len(self.grid):
            raise ValueError(f"{len(self.rows)} rows for a grid of {len(self.grid)} points")

    @property
    def columns(self) -> list[str]:
        cols: list[str] = []
        for row in self.rows:
            cols.extend(k for k in row if k not in cols)
        return cols


def _log10(x: float) -> float:
    return math.log10(x) if x > 0 else -math.inf


def _norm_varpi(varpi: float, cfg) -> float:
    return varpi * cfg.t_c / (cfg.t_c - cfg.to_s)


def _campaign_row(cfg, n_b: int, **extra) -> dict:
    s = run_campaign(cfg, cfg.trials, cfg.periods, cfg.seed, fixed_n_b=n_b)
    varpi = cfg.consts().varpi_of(n_b * cfg.n_antennas)
    m = s.mean
    row = dict(extra)
    row.update(
        n_b=n_b, varpi=varpi, norm_varpi=_norm_varpi(varpi, cfg),
        peb=m["peb"], reb=m["reb"], peb_closed=m["peb_closed"], reb_closed=m["reb_closed"],
        log10_peb=_log10(m["peb"]), log10_reb=_log10(m["reb"]),
        log10_peb_closed=_log10(m["peb_closed"]), log10_reb_closed=_log10(m["reb_closed"]),
        eadr=m["eadr"], eadr_closed=m["eadr_closed"],
        peb_sem=s.sem["peb"], reb_sem=s.sem["reb"], eadr_sem=s.sem["eadr"],
    )
    return row


def _n_b_grid(cfg) -> list[int]:
    return list(range(1, cfg.n_antennas + 1))


def sweep_time_allocation(cfg) -> SweepResult:
    """Bounds (sweep-accumulated and closed-form) against the quantized time ratio, per IRS size."""
    grid, rows = [], []
    for l_side in cfg.l_side_grid:
        sub = cfg.replace(l_side=l_side)
        for n_b in _n_b_grid(cfg):
            row = _campaign_row(sub, n_b, n_irs=l_side * l_side)
            for key in ("eadr", "eadr_closed", "eadr_sem"):
                row.pop(key)
            grid.append((l_side * l_side, row["varpi"]))
            rows.append(row)
    return SweepResult("sweep-time-allocation", "n_irs,varpi", grid, rows)


def tradeoff_curve(cfg) -> SweepResult:
    """Rate against time ratio and against the bounds at each quantized point, per IRS size."""
    grid, rows = [], []
    for l_side in cfg.l_side_grid:
        sub = cfg.replace(l_side=l_side)
        for n_b in _n_b_grid(cfg):
            row = _campaign_row(sub, n_b, n_irs=l_side * l_side)
            grid.append((l_side * l_side, row["varpi"]))
            rows.append(row)
    return SweepResult("tradeoff-curve", "n_irs,varpi", grid, rows)


def compare_random_phase(cfg, l_side: int = 8) -> SweepResult:
    """Designed versus uniformly random IRS phases at a fixed 64-element IRS."""
    sub = cfg.replace(l_side=l_side)
    grid = _n_b_grid(sub)
    consts = sub.consts()
    keys = ("peb", "reb", "eadr")
    acc = {mode: {k: np.empty((sub.trials, len(grid))) for k in keys} for mode in ("designed", "random")}
    for trial in range(sub.trials):
        for mode in acc:
            pts = snapshot_sweep(sub, sub.seed, trial, grid, random_phase=(mode == "random"))
            for j, pt in enumerate(pts):
                acc[mode]["peb"][trial, j] = pt.bound.peb
                acc[mode]["reb"][trial, j] = pt.bound.reb
                acc[mode]["eadr"][trial, j] = pt.eadr
    rows = []
    scale = 1.0 / math.sqrt(sub.trials)
    for j, n_b in enumerate(grid):
        varpi = consts.varpi_of(n_b * sub.n_antennas)
        row = {"n_irs": l_side * l_side, "n_b": n_b, "varpi": varpi, "norm_varpi": _norm_varpi(varpi, sub)}
        for mode, suffix in (("designed", ""), ("random", "_random")):
            for k in keys:
                col = acc[mode][k][:, j]
                row[k + suffix] = float(col.mean())
                row[k + suffix + "_sem"] = float(col.std(ddof=1) * scale) if sub.trials > 1 else 0.0
            row["log10_peb" + suffix] = _log10(row["peb" + suffix])
            row["log10_reb" + suffix] = _log10(row["reb" + suffix])
        rows.append(row)
    return SweepResult("compare-random-phase", "varpi", [float(r["varpi"]) for r in rows], rows)


def _optimal_row(cfg, **extra) -> dict:
    s = run_campaign(cfg, cfg.trials, cfg.periods, cfg.seed)
    consts = cfg.consts()
    row = dict(extra)
    row.update(
        varpi_opt=s.mean["varpi_next"], varpi_opt_sem=s.sem["varpi_next"],
        norm_varpi_opt=_norm_varpi(s.mean["varpi_next"], cfg), varpi_max=consts.varpi_max,
        tc_s=cfg.t_c, peb=s.mean["peb"], reb=s.mean["reb"], eadr=s.mean["eadr"],
    )
    return row


def optimal_varpi_vs_n(cfg) -> SweepResult:
    grid = [l * l for l in cfg.l_side_grid]
    rows = [_optimal_row(cfg.replace(l_side=l), n_irs=l * l) for l in cfg.l_side_grid]
    return SweepResult("optimal-varpi-vs-N", "n_irs", grid, rows)


def optimal_varpi_vs_antennas(cfg) -> SweepResult:
    """Optimal ratio against the array size; the coherence time follows the array unless pinned."""
    grid = list(cfg.antenna_grid)
    rows = [_optimal_row(cfg.replace(n_antennas=n), n_antennas=n) for n in grid]
    return SweepResult("optimal-varpi-vs-antennas", "n_antennas", grid, rows)


def _truth_objective(cfg, trial: int = 0):
    layout, consts = cfg.layout(), cfg.consts()
    state = bootstrap_state(cfg, cfg.seed, trial)
    gain = path_delay_and_gain(layout, state.pose, state.h1, cfg.zeta)
    truth = Estimate(state.pose, gain, derive_angles(layout, state.pose))
    return estimated_objective(cfg, layout, consts, truth)


def joint_optimum(cfg) -> SweepResult:
    """Closed-form rate/bound trade-off curve per IRS size plus the optimizer's operating point.

    Rows with ``point == "curve"`` trace the parametric curve; the single
    ``point == "optimum"`` row per size carries the Monte Carlo mean optimum.
    """
    grid, rows = [], []
    for l_side in cfg.l_side_grid:
        sub = cfg.replace(l_side=l_side)
        params = _truth_objective(sub)
        vmax = params.varpi_max
        n_irs = l_side * l_side
        for k in range(1, sub.curve_points + 1):
            v = vmax * k / sub.curve_points
            pr = preb_curve(v, params)
            grid.append((n_irs, v))
            rows.append({"n_irs": n_irs, "point": "curve", "varpi": v, "eadr": rate_curve(v, params),
                         "preb": pr, "log10_preb": _log10(pr)})
        s = run_campaign(sub, sub.trials, sub.periods, sub.seed)
        v_opt = s.mean["varpi_next"]
        pr = preb_curve(v_opt, params)
        grid.append((n_irs, v_opt))
        rows.append({"n_irs": n_irs, "point": "optimum", "varpi": v_opt, "eadr": rate_curve(v_opt, params),
                     "preb": pr, "log10_preb": _log10(pr), "varpi_opt_truth": algorithm1(params).varpi_star,
                     "varpi_opt_sem": s.sem["varpi_next"]})
    return SweepResult("joint-optimum", "n_irs,varpi", grid, rows)


EXPERIMENTS = {
    "sweep-time-allocation": sweep_time_allocation,
    "tradeoff-curve": tradeoff_curve,
    "compare-random-phase": compare_random_phase,
    "optimal-varpi-vs-N": optimal_varpi_vs_n,
    "optimal-varpi-vs-antennas": optimal_varpi_vs_antennas,
    "joint-optimum": joint_optimum,
}


def run_experiment(name: str, cfg) -> SweepResult:
    try:
        runner = EXPERIMENTS[name]
    except KeyError:
        raise UnknownExperiment(f"unknown experiment {name!r}; choose from {sorted(EXPERIMENTS)}") from None
    result = runner(cfg)
    result.config = cfg.echo()
    return result


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    return str(value)


def _json_value(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        # JSON has no inf/nan; keep them readable and round-trippable as strings
        return v if math.isfinite(v) else repr(v)
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    if isinstance(value, dict):
        return {k: _json_value(v) for k, v in value.items()}
    return value


def to_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    cols = result.columns
    writer.writerow(cols)
    for row in result.rows:
        writer.writerow([_fmt(row[c]) if c in row else "" for c in cols])
    return buf.getvalue()


def to_json(result: SweepResult) -> str:
    doc = {"experiment": result.name, "config": _json_value(result.config),
           "rows": [_json_value(r) for r in result.rows]}
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def emit(result: SweepResult, fmt: str, path: str | Path | None = None) -> str:
    """Serialize ``result`` as ``csv`` or ``json``; write it to ``path`` when given."""
    if fmt == "csv":
        text = to_csv(result)
    elif fmt == "json":
        text = to_json(result)
    else:
        raise ValueError(f"unsupported format {fmt!r}")
    if path is not None:
        Path(path).write_text(text)
    return text
