"""Shared fixtures: offline clients over the recorded response cache.

Every test runs with the network transport disabled; a request that
misses the fixture cache fails loudly instead of going online.
"""

from __future__ import annotations

import os
from pathlib import Path

import pytest

from streetnet.client import (
    ClientMode,
    DisabledTransport,
    NominatimClient,
    OverpassClient,
    RateLimiter,
    ResponseCache,
)
from streetnet.pipeline import network_from_bbox

import portland_fixtures as pf

FIXTURE_CACHE = Path(__file__).parent / "fixtures" / "cache"


@pytest.fixture(autouse=True)
def _scrub_env(monkeypatch):
    # config reads STREETNET_* from the process environment; keep tests
    # hermetic against whatever the host shell exports
    for key in list(os.environ):
        if key.startswith("STREETNET_"):
            monkeypatch.delenv(key)


def offline_clients() -> tuple[OverpassClient, NominatimClient]:
    transport = DisabledTransport()
    cache = ResponseCache(FIXTURE_CACHE)
    kwargs = dict(mode=ClientMode.FIXTURE_ONLY,
                  rate_limiter=RateLimiter(min_interval=0.0))
    return (OverpassClient(transport, cache, **kwargs),
            NominatimClient(transport, cache, **kwargs))


@pytest.fixture(scope="session")
def clients():
    return offline_clients()


@pytest.fixture(scope="session")
def _site_graphs():
    overpass, _ = offline_clients()
    return {
        "downtown": network_from_bbox(pf.DOWNTOWN_BBOX, overpass).freeze(),
        "laurelhurst": network_from_bbox(pf.LAURELHURST_BBOX, overpass).freeze(),
        "nw_heights": network_from_bbox(pf.NWHEIGHTS_BBOX, overpass).freeze(),
    }


@pytest.fixture()
def downtown(_site_graphs):
    return _site_graphs["downtown"].copy()


@pytest.fixture()
def laurelhurst(_site_graphs):
    return _site_graphs["laurelhurst"].copy()


@pytest.fixture()
def nw_heights(_site_graphs):
    return _site_graphs["nw_heights"].copy()
