import math

import pytest

from uavcov.channel import DENSE_URBAN, LinkParams, SnrThreshold, dbm_to_mw
from uavcov.coverage import Scenario
from uavcov.deployment import TetherConfig
from uavcov.distributions import HotSpot
from uavcov.geometry import Point2, Point3


@pytest.fixture(scope="session")
def link_defaults():
    """Baseline link budget used throughout: 1 dBm at both transmitters,
    -80 dBm noise floor, Nakagami m=2 fading, 15x SNR threshold."""
    return LinkParams(
        rho_b=dbm_to_mw(1.0),
        rho_u=dbm_to_mw(1.0),
        sigma_n2=dbm_to_mw(-80.0),
        alpha_b=3.0,
        alpha_u=2.7,
        eta_los=10.0 ** 0.16,
        eta_nlos=10.0 ** 2.3,
        m=2,
    )


@pytest.fixture(scope="session")
def dense_urban():
    return DENSE_URBAN


@pytest.fixture(scope="session")
def baseline(link_defaults, dense_urban):
    """Reference scenario: 150 m hot-spot at the origin, TBS 170 m away
    at 10 m height."""
    return Scenario(
        hotspot=HotSpot(Point2(0.0, 0.0), 150.0),
        tbs=Point3(170.0, 0.0, 10.0),
        env=dense_urban,
        link=link_defaults,
        threshold=SnrThreshold.from_link(15.0, link_defaults),
    )


@pytest.fixture(scope="session")
def tether():
    return TetherConfig(tether_len=50.0, min_inclination=math.radians(30.0))
