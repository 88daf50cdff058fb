"""Synthetic simplification fixtures with hand-derived expectations.

Each case builds a tiny raw graph and states, per mode, exactly which
nodes must survive and how many edges the simplified graph has. Raw
graphs come from the real element builder (lengths are haversine) except
the self-loop case, which needs an explicit loop edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from streetnet.graph import StreetGraph, build_graph
from streetnet.osmdata import NetworkType

from builders import make_graph, node_el, way_el

BASE = (-122.66, 45.53)
DEG_E = 0.0000128  # ~1 m of longitude at the base latitude
DEG_N = 0.0000090  # ~1 m of latitude


def _n(id_, dx, dy):
    return node_el(id_, BASE[0] + dx * DEG_E, BASE[1] + dy * DEG_N)


@dataclass
class SimplifyCase:
    name: str
    build: object  # () -> StreetGraph
    strict_nodes: set[int]
    non_strict_nodes: set[int]
    strict_edges: int
    non_strict_edges: int
    notes: str = ""
    # nodes the strict walk keeps without the predicate marking them
    # (endpoint-free cycles elect their minimum-id node)
    strict_synthetic: set[int] = field(default_factory=set)


def _chain():
    # one two-way way through three curvature points
    els = [_n(1, 0, 0), _n(2, 50, 5), _n(3, 100, -5), _n(4, 150, 5),
           _n(5, 200, 0),
           way_el(11, [1, 2, 3, 4, 5], highway="residential")]
    return build_graph(els, NetworkType.DRIVE)


def _elbow():
    # two ways meeting end to end at a corner: strict consolidates the
    # joint, non-strict keeps it because the osmids differ
    els = [_n(1, 0, 0), _n(2, 100, 0), _n(3, 100, 100),
           way_el(21, [1, 2], highway="residential"),
           way_el(22, [2, 3], highway="residential")]
    return build_graph(els, NetworkType.DRIVE)


def _ring():
    # closed loop drawn as two arcs; no node has a third street, so
    # strict mode finds no endpoint at all and must elect one
    els = [_n(1, 0, 0), _n(2, 80, 60), _n(3, 160, 0), _n(4, 80, -60),
           way_el(31, [1, 2, 3], highway="residential"),
           way_el(32, [3, 4, 1], highway="residential")]
    return build_graph(els, NetworkType.DRIVE)


def _transition():
    # one-way street becoming two-way at node 3 (directed degree 3 there)
    els = [_n(1, 0, 0), _n(2, 60, 0), _n(3, 120, 0), _n(4, 180, 0),
           _n(5, 240, 0),
           way_el(41, [1, 2, 3], highway="residential", oneway="yes"),
           way_el(42, [3, 4, 5], highway="residential")]
    return build_graph(els, NetworkType.DRIVE)


def _self_loop():
    # chain with a turning loop at its middle node; the loop pins node 3
    # as an endpoint and must survive consolidation intact
    coords = [(1, 0.0, 0.0), (2, 0.0008, 0.0), (3, 0.0016, 0.0),
              (4, 0.0024, 0.0), (5, 0.0032, 0.0)]
    nodes = [(i, BASE[0] + dx, BASE[1] + dy) for i, dx, dy in coords]
    edges = []
    for u, v in [(1, 2), (2, 3), (3, 4), (4, 5)]:
        edges.append((u, v, 70.0, {"osmid": 51, "oneway": False}))
        edges.append((v, u, 70.0, {"osmid": 51, "oneway": False}))
    edges.append((3, 3, 90.0, {"osmid": 52, "oneway": True}))
    return make_graph(nodes, edges)


CASES = [
    SimplifyCase("chain", _chain, {1, 5}, {1, 5}, 2, 2),
    SimplifyCase("elbow", _elbow, {1, 3}, {1, 2, 3}, 2, 4),
    SimplifyCase("ring", _ring, {1}, {1, 3}, 2, 4,
                 strict_synthetic={1},
                 notes="strict collapses the loop to a self-loop at the "
                       "minimum-id node"),
    SimplifyCase("oneway-transition", _transition, {1, 3, 5}, {1, 3, 5}, 3, 3),
    SimplifyCase("self-loop", _self_loop, {1, 3, 5}, {1, 3, 5}, 5, 5),
]
