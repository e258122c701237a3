import math

import pytest

from unicurve.curve import UniversalCurve
from unicurve.rcurve import RationalCurve
from unicurve.scheduler import GrowthGauge, Schedule, build_schedule, resolve_all


@pytest.fixture(scope="session")
def gauge():
    return GrowthGauge.scaled_log(1.0, 1.0)  # phi(r) = 1 + log(1+r)


@pytest.fixture(scope="session")
def curve_z1():
    """[z : 1], the simplest dictionary element; g = 1/z."""
    return RationalCurve.from_strings([["0", "1"], ["1"]])


@pytest.fixture(scope="session")
def curve_z2p1():
    """[z^2+1 : z]; g = z/(z^2+1), poles at +/- i."""
    return RationalCurve.from_strings([["1", "0", "1"], ["0", "1"]])


@pytest.fixture(scope="session")
def curve_n2():
    """[z^2+1 : z : 1], the three-component (n=2) curve."""
    return RationalCurve.from_strings([["1", "0", "1"], ["0", "1"], ["1"]])


@pytest.fixture(scope="session")
def schedule_n1_k6(gauge, curve_z1, curve_z2p1):
    s = build_schedule([curve_z1, curve_z2p1], [0.0, math.pi / 2], 6, gauge, 1)
    return resolve_all(s)


@pytest.fixture(scope="session")
def schedule_n2_k4(gauge, curve_n2):
    s = build_schedule([curve_n2], [0.0, math.pi / 2], 4, gauge, 2)
    return resolve_all(s)


@pytest.fixture(scope="session")
def schedule_2block(gauge, curve_z1, curve_z2p1):
    """Two blocks, component degrees <= 2, used by the area cross-check."""
    s = build_schedule([curve_z1, curve_z2p1], [0.0], 2, gauge, 1)
    return resolve_all(s)


@pytest.fixture(scope="session")
def ucurve_n1_k6(schedule_n1_k6):
    return UniversalCurve(schedule_n1_k6)


@pytest.fixture(scope="session")
def ucurve_n2_k4(schedule_n2_k4):
    return UniversalCurve(schedule_n2_k4)


@pytest.fixture(scope="session")
def ucurve_2block(schedule_2block):
    return UniversalCurve(schedule_2block)


@pytest.fixture(scope="session")
def inv_z_curve(gauge, curve_z1):
    """h_1 = 1/z exactly: the [z:1] block translated by 0 (manual schedule)."""
    return UniversalCurve(Schedule.manual_schedule(1, gauge, [(curve_z1, 0.0 + 0.0j)]))
