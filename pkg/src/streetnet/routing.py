"""Shortest-path routing over the directed network.

Ties between equal-cost paths resolve to the lexicographically smallest
node-id sequence, found by a greedy walk over the shortest-path DAG
(forward distances from the source plus reverse distances to the target).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import EmptyGraph, MissingElevation, NoPath
from .graph import StreetGraph, great_circle
from .paths import dijkstra, min_parallel_edge, reconstruct


@dataclass
class Route:
    nodes: list[int]
    edges: list[tuple[int, int, int]]
    total_cost: float
    geometry: list[tuple[float, float]]

    def to_json(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "edges": [list(e) for e in self.edges],
            "total_cost": self.total_cost,
            "geometry": {
                "type": "LineString",
                "coordinates": [[x, y] for x, y in self.geometry],
            },
        }


def nearest_node(g: StreetGraph, point: tuple[float, float]) -> int:
    """Node closest to a (lon, lat) or projected (x, y) point; ties -> smallest id."""
    if g.n == 0:
        raise EmptyGraph("nearest_node on empty graph")
    best_id = None
    best_d = math.inf
    for node in g.nodes():
        if g.crs == "wgs84":
            d = great_circle(point, (node.x, node.y))
        else:
            d = math.hypot(node.x - point[0], node.y - point[1])
        if d < best_d or (d == best_d and (best_id is None or node.id < best_id)):
            best_d = d
            best_id = node.id
    return best_id


def _edge_coords(g: StreetGraph, u: int, v: int, key: int) -> list[tuple[float, float]]:
    rec = g.edge(u, v, key)
    if rec.geometry:
        return [tuple(p) for p in rec.geometry]
    return [g.node(u).coord(), g.node(v).coord()]


def _cheapest_hop(g: StreetGraph, u: int, v: int, weight: str):
    """Cheapest stored edge for a u->v traversal step, as (su, sv, key, w).

    On a graph flagged undirected the winning edge may be stored v->u;
    the returned endpoints always name the stored orientation. Ties
    prefer the traversal orientation, then the lowest key.
    """
    best = None
    candidates = [(u, v)]
    if g.undirected and u != v:
        candidates.append((v, u))
    for su, sv in candidates:
        found = min_parallel_edge(g, su, sv, weight)
        if found is None:
            continue
        key, w, _rec = found
        rank = (w, su != u, key)
        if best is None or rank < best[0]:
            best = (rank, su, sv, key, w)
    if best is None:
        return None
    return best[1:]


def _assemble(g: StreetGraph, nodes: list[int], weight: str, cost: float) -> Route:
    edges = []
    geometry: list[tuple[float, float]] = [g.node(nodes[0]).coord()]
    for u, v in zip(nodes, nodes[1:]):
        su, sv, key, _w = _cheapest_hop(g, u, v, weight)
        edges.append((su, sv, key))
        coords = _edge_coords(g, su, sv, key)
        if su != u:
            coords = coords[::-1]
        geometry.extend(coords[1:])
    return Route(nodes=nodes, edges=edges, total_cost=cost, geometry=geometry)


def shortest_path(g: StreetGraph, source: int, target: int,
                  weight: str = "length") -> Route:
    """Minimum-total-weight path from source to target.

    Edges are walked in their stored direction unless the graph is
    flagged undirected, in which case both ways are fair game. Parallel
    edges contribute their cheapest member (lowest key on ties). Raises
    NoPath when the target is unreachable.
    """
    if source == target:
        g.node(source)  # raises UnknownNode if absent
        return Route(nodes=[source], edges=[], total_cost=0.0,
                     geometry=[g.node(source).coord()])
    g.node(target)  # unknown ids should not masquerade as unreachable ones
    dist_f, pred = dijkstra(g, source, weight=weight)
    if target not in dist_f:
        raise NoPath(f"no path from {source} to {target}")
    total = dist_f[target]
    dist_r, _ = dijkstra(g, target, weight=weight, reverse=True)
    # slack absorbs float summation-order noise between the two sweeps
    slack = 1e-12 * max(1.0, total)

    # greedy lex-min walk over the shortest-path DAG
    nodes = [source]
    visited = {source}
    cur = source
    while cur != target:
        neighbors = set(g.successors(cur))
        if g.undirected:
            neighbors.update(g.predecessors(cur))
        candidates = []
        for v in neighbors:
            if v in visited or v not in dist_r:
                continue
            found = _cheapest_hop(g, cur, v, weight)
            if found is None:
                continue
            w = found[3]
            if dist_f[cur] + w + dist_r[v] <= total + slack:
                candidates.append(v)
        if not candidates:
            # zero-weight cycles can strand the greedy walk; the plain
            # predecessor path is still optimal and deterministic
            nodes = reconstruct(pred, target)
            break
        nxt = min(candidates)
        nodes.append(nxt)
        visited.add(nxt)
        cur = nxt
    return _assemble(g, nodes, weight, total)


def attach_grade_impedance(g: StreetGraph) -> None:
    """Store per-edge grade and |elevation change| impedance from node elevations."""
    missing = sorted(node.id for node in g.nodes() if node.elevation is None)
    if missing:
        raise MissingElevation(f"nodes missing elevation: {missing[:5]}"
                               + ("..." if len(missing) > 5 else ""))
    for u, v, _key, rec in g.edges():
        rise = g.node(v).elevation - g.node(u).elevation
        rec.grade = rise / rec.length if rec.length > 0 else 0.0
        rec.extra["grade_impedance"] = abs(rise)
        rec.extra["ascent"] = max(0.0, rise)


def route_by_grade(g: StreetGraph, source: int, target: int,
                   impedance: str = "grade_impedance") -> Route:
    """Route minimizing total |elevation change| (or total ascent).

    impedance: grade_impedance (sum of |rise|, default) or ascent (uphill only).
    """
    attach_grade_impedance(g)
    return shortest_path(g, source, target, weight=impedance)
