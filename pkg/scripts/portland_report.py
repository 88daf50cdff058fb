#!/usr/bin/env python3
"""Compare the three recorded Portland sites: grid downtown, streetcar-era
eastside, and hillside cul-de-sacs.

Runs entirely from the response fixtures under tests/fixtures/cache with
the network transport disabled, so the numbers are reproducible anywhere.
Basic morphology prints by default; --extended adds the centrality,
clustering, and connectivity families (the connectivity averages run a
max-flow per node pair, which takes a while on the larger sites).
"""

from __future__ import annotations

import argparse
import sys
import time
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
from streetnet.geometry import polygon_area_km2
from streetnet.measures import AreaSpec, basic_stats, extended_stats
from streetnet.pipeline import network_from_bbox
from streetnet.routing import nearest_node, shortest_path

import portland_fixtures as pf

SITES = [
    ("downtown", pf.DOWNTOWN_BBOX),
    ("laurelhurst", pf.LAURELHURST_BBOX),
    ("nw_heights", pf.NWHEIGHTS_BBOX),
]

BASIC_ROWS = [
    ("nodes", "n", "{:d}"),
    ("edges", "m", "{:d}"),
    ("street segments", "street_segment_count", "{:d}"),
    ("avg node degree", "avg_node_degree", "{:.4f}"),
    ("avg streets/node", "avg_streets_per_node", "{:.4f}"),
    ("intersections", "intersection_count", "{:d}"),
    ("intersections/km2", "intersection_density_km2", "{:.1f}"),
    ("street km/km2", "street_density_km2", "{:.2f}"),
    ("avg street length m", "avg_street_length", "{:.1f}"),
    ("circuity", "avg_circuity", "{:.4f}"),
    ("self-loop proportion", "self_loop_proportion", "{:.4f}"),
]

EXTENDED_ROWS = [
    ("avg clustering", "avg_clustering_coefficient", "{:.4f}"),
    ("avg weighted clustering", "avg_weighted_clustering_coefficient", "{:.4f}"),
    ("avg betweenness", "avg_betweenness_centrality", "{:.4f}"),
    ("avg closeness", "avg_closeness_centrality", "{:.6f}"),
    ("pagerank max node", "pagerank_max_node", "{:d}"),
    ("node connectivity", "node_connectivity", "{:d}"),
    ("edge connectivity", "edge_connectivity", "{:d}"),
    ("avg node connectivity", "avg_node_connectivity", "{:.3f}"),
    ("diameter m", "diameter", "{:.0f}"),
    ("radius m", "radius", "{:.0f}"),
]


def offline_clients():
    cache = ResponseCache(ROOT / "tests" / "fixtures" / "cache")
    kwargs = dict(mode=ClientMode.FIXTURE_ONLY,
                  rate_limiter=RateLimiter(min_interval=0.0))
    return (OverpassClient(DisabledTransport(), cache, **kwargs),
            NominatimClient(DisabledTransport(), cache, **kwargs))


def collect(extended: bool):
    overpass, _ = offline_clients()
    results = {}
    for name, bbox in SITES:
        g = network_from_bbox(bbox, overpass)
        area = AreaSpec(polygon_area_km2(g.boundary), source="polygon")
        if extended:
            stats = extended_stats(g, area, scc_mode="largest")
        else:
            stats = basic_stats(g, area)
        results[name] = (g, stats)
    return results


def print_table(results, rows):
    names = [name for name, _bbox in SITES]
    width = max(len(label) for label, *_rest in rows)
    print(f"{'':<{width}}  " + "".join(f"{n:>14}" for n in names))
    for label, field, fmt in rows:
        cells = []
        for name in names:
            value = getattr(results[name][1], field)
            cells.append("-" if value is None else fmt.format(value))
        print(f"{label:<{width}}  " + "".join(f"{c:>14}" for c in cells))


def route_demo(results):
    # corner-to-corner route across the two-way eastside grid
    g, _stats = results["laurelhurst"]
    south, west, north, east = pf.LAURELHURST_BBOX
    origin = nearest_node(g, (west, south))
    dest = nearest_node(g, (east, north))
    route = shortest_path(g, origin, dest)
    print(f"\nsample route (laurelhurst SW corner -> NE corner): "
          f"{len(route.nodes)} nodes, {route.total_cost:.0f} m")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--extended", action="store_true",
                        help="add centrality, clustering, and connectivity "
                             "rows (slower)")
    args = parser.parse_args()

    start = time.monotonic()
    results = collect(args.extended)
    print("three-site comparison, recorded half-km2 extracts:\n")
    print_table(results, BASIC_ROWS + (EXTENDED_ROWS if args.extended else []))
    flags = ", ".join(
        f"{name}: {'strongly connected' if is_strongly_connected(g) else 'one-way grid, not strongly connected'}"
        for name, (g, _s) in results.items())
    print(f"\nconnectivity: {flags}")
    route_demo(results)
    print(f"\ndone in {time.monotonic() - start:.1f}s, no network used")


if __name__ == "__main__":
    main()
