import math

import numpy as np
import pytest

from irs_tradeoff.config import load_config
from irs_tradeoff.geometry import ChannelAngles, derive_angles, path_delay_and_gain

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def cfg():
    return load_config()


@pytest.fixture(scope="session")
def layout(cfg):
    return cfg.layout()


@pytest.fixture(scope="session")
def consts(cfg):
    return cfg.consts()


@pytest.fixture(scope="session")
def pose(cfg):
    return cfg.pose()


@pytest.fixture(scope="session")
def angles(layout, pose):
    return derive_angles(layout, pose)


@pytest.fixture(scope="session")
def gain(layout, pose):
    return path_delay_and_gain(layout, pose, np.exp(0.7j))


def random_angles(rng) -> ChannelAngles:
    return ChannelAngles(
        phi_tx1=rng.uniform(-1.4, 1.4),
        phi_irs1_a=rng.uniform(-1.4, 1.4),
        phi_irs1_e=rng.uniform(0.1, math.pi - 0.1),
        phi_irs2_a=rng.uniform(-1.4, 1.4),
        phi_irs2_e=rng.uniform(0.1, math.pi - 0.1),
        phi_rx1=rng.uniform(-1.4, 1.4),
    )
