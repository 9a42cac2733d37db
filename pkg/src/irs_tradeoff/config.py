"""Scenario configuration: reference defaults plus a flat ``key = value`` file format."""
from __future__ import annotations

import configparser
import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .geometry import SPEED_OF_LIGHT, Pose, SystemLayout, Vec3
from .radio import RadioConstants
from .simulation import ErrorModel, MobilityModel


def _int_tuple(text) -> tuple[int, ...]:
    if isinstance(text, (tuple, list)):
        return tuple(int(v) for v in text)
    return tuple(int(v) for v in str(text).replace(",", " ").split())


@dataclass(frozen=True)
class ScenarioConfig:
    bs_x_m: float = 0.0
    bs_y_m: float = 0.0
    bs_z_m: float = 40.0
    irs_x_m: float = -20.0
    irs_y_m: float = 20.0
    irs_z_m: float = 30.0
    mu_x_m: float = 20.0
    mu_y_m: float = 40.0
    alpha_rad: float = math.pi / 4
    ptx_dbm: float = 27.0
    noise_dbm: float = -80.0
    n_antennas: int = 32
    fc_hz: float = 60e9
    bandwidth_hz: float = 100e6
    delta: float = 1.0
    zeta: float = 1.0
    ts_s: float = 67e-6
    to_s: float = 1e-3
    # None -> n_antennas**2 * ts_s + to_s
    tc_s: float | None = None
    l_side: int = 8
    eps_xy_m: float = 0.0
    eps_alpha_rad: float = 0.0
    sigma_h_sq: float = 0.0
    upsilon_xy_m: float = 0.0
    xi: float = 1e-9
    seed: int = 0
    trials: int = 50
    periods: int = 2
    paper_literal_signs: bool = False
    l_side_grid: tuple[int, ...] = (4, 8, 12, 16)
    antenna_grid: tuple[int, ...] = (2, 4, 8, 16, 32, 64)
    curve_points: int = 1000

    def __post_init__(self):
        problems = self.problems()
        if problems:
            raise ConfigError(problems)

    def problems(self) -> list[str]:
        out = []
        positive = ("fc_hz", "bandwidth_hz", "zeta", "ts_s", "n_antennas", "l_side", "trials", "periods",
                    "curve_points")
        for name in positive:
            if not getattr(self, name) > 0:
                out.append(f"{name}: must be positive (got {getattr(self, name)!r})")
        if not 0 < self.delta <= 1:
            out.append(f"delta: must lie in (0, 1] (got {self.delta!r})")
        if self.to_s < 0:
            out.append(f"to_s: must be non-negative (got {self.to_s!r})")
        for name in ("eps_xy_m", "eps_alpha_rad", "sigma_h_sq", "upsilon_xy_m", "xi"):
            if getattr(self, name) < 0:
                out.append(f"{name}: must be non-negative (got {getattr(self, name)!r})")
        if self.tc_s is not None and self.n_antennas > 0 and self.ts_s > 0:
            need = self.min_tc
            if self.tc_s < need * (1 - 1e-12):
                out.append(f"tc_s: {self.tc_s} is shorter than a full sweep plus optimization ({need})")
        if (self.irs_x_m, self.irs_y_m, self.irs_z_m) == (self.bs_x_m, self.bs_y_m, self.bs_z_m):
            out.append("irs_*: IRS and BS centers coincide")
        if any(v < 1 for v in self.l_side_grid) or any(v < 1 for v in self.antenna_grid):
            out.append("grids: entries must be >= 1")
        return out

    @property
    def min_tc(self) -> float:
        return self.n_antennas**2 * self.ts_s + self.to_s

    @property
    def t_c(self) -> float:
        return self.min_tc if self.tc_s is None else self.tc_s

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.fc_hz

    def layout(self) -> SystemLayout:
        return SystemLayout(
            q=Vec3(self.bs_x_m, self.bs_y_m, self.bs_z_m),
            v=Vec3(self.irs_x_m, self.irs_y_m, self.irs_z_m),
            n_b_total=self.n_antennas,
            n_m=self.n_antennas,
            l_side=self.l_side,
            wavelength=self.wavelength,
        )

    def pose(self) -> Pose:
        return Pose.from_xy(self.mu_x_m, self.mu_y_m, self.alpha_rad)

    def consts(self) -> RadioConstants:
        return RadioConstants.from_dbm(self.ptx_dbm, self.noise_dbm, self.bandwidth_hz, self.ts_s, self.to_s,
                                       self.t_c)

    def error_model(self) -> ErrorModel:
        return ErrorModel(self.eps_xy_m, self.eps_alpha_rad, self.sigma_h_sq)

    def mobility_model(self) -> MobilityModel:
        return MobilityModel(self.upsilon_xy_m)

    @property
    def noise_power_w(self) -> float:
        return 10.0 ** ((self.noise_dbm - 30.0) / 10.0)

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    def echo(self) -> dict:
        out = dataclasses.asdict(self)
        out["tc_s"] = self.t_c
        for key in ("l_side_grid", "antenna_grid"):
            out[key] = list(out[key])
        return out


_FIELDS = {f.name: f for f in dataclasses.fields(ScenarioConfig)}
_SECTION = "scenario"


def _convert(name: str, raw: str):
    ftype = str(_FIELDS[name].type)
    text = raw.strip()
    if ftype.startswith("tuple"):
        return _int_tuple(text)
    if ftype == "bool":
        low = text.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"not a boolean: {raw!r}")
    if ftype == "int":
        return int(text)
    if "None" in ftype and text.lower() in ("", "none", "auto"):
        return None
    return float(text)


def parse_overrides(pairs: dict[str, str]) -> dict:
    values, problems = {}, []
    for key, raw in pairs.items():
        name = key.strip().lower().replace("-", "_")
        if name not in _FIELDS:
            problems.append(f"{key}: unknown configuration key")
            continue
        try:
            values[name] = _convert(name, raw)
        except ValueError as exc:
            problems.append(f"{key}: {exc}")
    if problems:
        raise ConfigError(problems)
    return values


def load_config(path: str | Path | None = None, **overrides) -> ScenarioConfig:
    """Read a flat ``key = value`` file; missing keys keep their defaults.

    ``overrides`` are applied after the file and take already-typed values.
    """
    values = {}
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"config: cannot read {path}: {exc}") from exc
        parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
        parser.optionxform = str
        try:
            parser.read_string(f"[{_SECTION}]\n" + text)
        except configparser.Error as exc:
            raise ConfigError(f"config: parse error: {exc}") from exc
        values.update(parse_overrides(dict(parser[_SECTION])))
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return ScenarioConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
