"""Single-source shortest path machinery shared by routing and measures."""

from __future__ import annotations

import heapq

from .errors import MissingWeight, NegativeWeight, UnknownNode
from .graph import EdgeRecord, StreetGraph


def edge_weight(rec: EdgeRecord, weight: str) -> float:
    if weight == "length":
        value = rec.length
    else:
        value = rec.extra.get(weight)
        if value is None and weight == "grade":
            value = rec.grade
    if value is None:
        raise MissingWeight(f"edge missing weight attribute {weight!r}")
    value = float(value)
    if value < 0:
        raise NegativeWeight(f"negative weight {value} for {weight!r}")
    return value


def min_parallel_edge(g: StreetGraph, u: int, v: int, weight: str = "length"):
    """Cheapest edge among parallels u->v; ties resolved by lowest key."""
    best = None
    for key, rec in g.edge_group(u, v).items():
        w = edge_weight(rec, weight)
        if best is None or w < best[1] or (w == best[1] and key < best[0]):
            best = (key, w, rec)
    return best  # (key, weight, record) or None


def dijkstra(
    g: StreetGraph,
    source: int,
    weight: str = "length",
    cutoff: float | None = None,
    target: int | None = None,
    reverse: bool = False,
) -> tuple[dict[int, float], dict[int, int | None]]:
    """Distances and predecessor tree from source over stored directions.

    reverse=True walks incoming edges instead, yielding distances TO the
    source; pred then maps each node to its successor on that path. A
    graph flagged undirected traverses every edge both ways, which makes
    reverse equivalent to forward.
    """
    if source not in g:
        raise UnknownNode(f"node {source} not in graph")
    dist: dict[int, float] = {}
    pred: dict[int, int | None] = {source: None}
    seen = {source: 0.0}
    heap: list[tuple[float, int]] = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if u in dist:
            continue
        dist[u] = d
        if target is not None and u == target:
            break
        if g.undirected:
            hops = [(b if a == u else a, rec)
                    for a, b, _key, rec in list(g.out_edges(u)) + list(g.in_edges(u))]
        elif reverse:
            hops = [(a, rec) for a, _b, _key, rec in g.in_edges(u)]
        else:
            hops = [(b, rec) for _a, b, _key, rec in g.out_edges(u)]
        grouped: dict[int, float] = {}
        for v, rec in hops:
            w = edge_weight(rec, weight)
            if v not in grouped or w < grouped[v]:
                grouped[v] = w
        for v, w in grouped.items():
            nd = d + w
            if cutoff is not None and nd > cutoff:
                continue
            if v not in dist and (v not in seen or nd < seen[v]):
                seen[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))
    return dist, pred


def reconstruct(pred: dict[int, int | None], target: int) -> list[int]:
    """Walk a predecessor map back from target to the tree root."""
    path = [target]
    while pred[path[-1]] is not None:
        path.append(pred[path[-1]])
    path.reverse()
    return path
