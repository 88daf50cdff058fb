#!/usr/bin/env python3
"""Regenerate the offline response fixtures under tests/fixtures/cache.

Drives the real acquisition pipeline against a scripted transport with a
real on-disk cache, so every entry lands under exactly the key the client
derives for that request at test time. Nothing here duplicates the
canonicalization logic. Meta timestamps are pinned afterwards to keep the
tree stable, and a fixture-only replay at the end proves the cache can
serve the whole suite with the network transport disabled.
"""

from __future__ import annotations

import json
import shutil
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from streetnet.client import (
    ClientMode,
    DisabledTransport,
    NominatimClient,
    OverpassClient,
    RateLimiter,
    ResponseCache,
)
from streetnet.connectivity import is_strongly_connected
from streetnet.errors import EmptyResult, NoResult
from streetnet.geometry import bbox_to_polygon, polygon_area_km2
from streetnet.measures import AreaSpec, basic_stats
from streetnet.pipeline import (
    network_from_address,
    network_from_bbox,
    network_from_place,
)

import portland_fixtures as pf
from fakes import FakeTransport, ok

CACHE_DIR = ROOT / "tests" / "fixtures" / "cache"
PINNED_AT = "2026-01-15T00:00:00Z"


def clients(transport):
    cache = ResponseCache(CACHE_DIR)
    mode = (ClientMode.FIXTURE_ONLY if isinstance(transport, DisabledTransport)
            else ClientMode.CACHE_FIRST)
    kwargs = dict(mode=mode, rate_limiter=RateLimiter(min_interval=0.0))
    return (OverpassClient(transport, cache, **kwargs),
            NominatimClient(transport, cache, **kwargs))


def describe(label, g, bbox=None):
    area = None
    if bbox is not None:
        area = AreaSpec(area_km2=polygon_area_km2(bbox_to_polygon(*bbox)),
                        source="bbox")
    stats = basic_stats(g, area)
    bits = [f"n={g.n}", f"m={g.m}",
            f"streets/node={stats.avg_streets_per_node:.4f}",
            f"intersections={stats.intersection_count}"]
    if area is not None:
        bits.append(f"int/km2={stats.intersection_density_km2:.1f}")
    if stats.avg_circuity is not None:
        bits.append(f"circuity={stats.avg_circuity:.4f}")
    bits.append(f"sc={is_strongly_connected(g)}")
    print(f"  {label}: " + " ".join(bits))


def generate():
    sites = [
        ("downtown", pf.DOWNTOWN_BBOX, pf.downtown_payload()),
        ("laurelhurst", pf.LAURELHURST_BBOX, pf.laurelhurst_payload()),
        ("nw_heights", pf.NWHEIGHTS_BBOX, pf.nwheights_payload()),
    ]
    for name, bbox, payload in sites:
        overpass, _ = clients(FakeTransport([ok(payload)]))
        g = network_from_bbox(bbox, overpass)
        describe(name, g, bbox)

    # place fetch resolves a polygon boundary, then queries by poly clause
    overpass, nominatim = clients(FakeTransport(
        [ok(pf.laurelhurst_place_payload()), ok(pf.laurelhurst_payload())]))
    g = network_from_place(pf.PLACE_NAME, overpass, nominatim)
    describe("place", g)

    # footprints for the same boundary; the geocode entry is cached by now
    overpass, nominatim = clients(FakeTransport([ok(pf.footprints_payload())]))
    boundary = nominatim.geocode_place(pf.PLACE_NAME)
    collection, warnings = overpass.fetch_footprints(boundary.geometry)
    print(f"  footprints: features={len(collection['features'])} "
          f"warnings={warnings}")

    # address fetch: a point-only geocode plus a distance-bounded bbox query
    overpass, nominatim = clients(FakeTransport(
        [ok(pf.address_payload()), ok(pf.downtown_payload())]))
    g = network_from_address(pf.ADDRESS, pf.ADDRESS_DIST, overpass, nominatim)
    describe("address", g)

    # a footway-only site: the drive fetch caches its payload, then
    # raises once the filter leaves no usable ways
    overpass, _ = clients(FakeTransport([ok(pf.empty_site_payload())]))
    try:
        network_from_bbox(pf.EMPTY_SITE_BBOX, overpass)
        raise AssertionError("footway-only site should build no network")
    except EmptyResult:
        print("  empty site: EmptyResult (cached)")

    # geocoder misses both cache their payloads before raising
    _, nominatim = clients(FakeTransport([ok(pf.empty_place_payload())]))
    try:
        nominatim.geocode_place(pf.EMPTY_PLACE)
    except NoResult:
        print("  empty place: NoResult (cached)")
    _, nominatim = clients(FakeTransport([ok(pf.pointonly_place_payload())]))
    boundary = nominatim.geocode_place(pf.POINT_ONLY_PLACE)
    print(f"  point-only place: point_only={boundary.point_only}")


def pin_meta():
    for meta in sorted(CACHE_DIR.glob("*.meta.json")):
        doc = json.loads(meta.read_text())
        doc["fetched_at"] = PINNED_AT
        meta.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def replay():
    """Prove every request replays from fixtures with the network off."""
    overpass, nominatim = clients(DisabledTransport())
    for name, bbox in [("downtown", pf.DOWNTOWN_BBOX),
                       ("laurelhurst", pf.LAURELHURST_BBOX),
                       ("nw_heights", pf.NWHEIGHTS_BBOX)]:
        g = network_from_bbox(bbox, overpass)
        assert g.n > 0, name
    g = network_from_place(pf.PLACE_NAME, overpass, nominatim)
    assert g.n > 0
    boundary = nominatim.geocode_place(pf.PLACE_NAME)
    collection, warnings = overpass.fetch_footprints(boundary.geometry)
    assert len(collection["features"]) == 2 and warnings == 1
    g = network_from_address(pf.ADDRESS, pf.ADDRESS_DIST, overpass, nominatim)
    assert g.n > 0
    try:
        network_from_bbox(pf.EMPTY_SITE_BBOX, overpass)
        raise AssertionError("footway-only site should build no network")
    except EmptyResult:
        pass
    try:
        nominatim.geocode_place(pf.EMPTY_PLACE)
        raise AssertionError("empty place should not geocode")
    except NoResult:
        pass
    assert nominatim.geocode_place(pf.POINT_ONLY_PLACE).point_only
    print("  replay: all requests served from fixtures, network disabled")


def main():
    if CACHE_DIR.exists():
        shutil.rmtree(CACHE_DIR)
    CACHE_DIR.mkdir(parents=True)
    print("generating fixtures:")
    generate()
    pin_meta()
    replay()
    entries = len(list(CACHE_DIR.glob("*.bin")))
    print(f"wrote {entries} cache entries to {CACHE_DIR}")


if __name__ == "__main__":
    main()
