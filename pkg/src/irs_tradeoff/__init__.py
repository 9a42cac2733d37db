"""Joint localization and communication trade-off for an IRS-assisted mmWave MIMO link."""
from .config import ScenarioConfig, load_config
from .errors import (ConfigError, DegenerateGeometry, DimensionMismatch, EmptySolution, InvalidArgument,
                     IrsTradeoffError, SingularFim, UnknownExperiment)
from .experiments import SweepResult, emit, run_experiment
from .simulation import ErrorModel, MobilityModel, run_campaign, run_period

__all__ = [
    "ScenarioConfig", "load_config", "ConfigError", "DegenerateGeometry", "DimensionMismatch", "EmptySolution",
    "InvalidArgument", "IrsTradeoffError", "SingularFim", "UnknownExperiment", "SweepResult", "emit",
    "run_experiment", "ErrorModel", "MobilityModel", "run_campaign", "run_period",
]
__version__ = "0.1.0"
