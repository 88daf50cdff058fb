"""Topology correction: collapse interstitial chains between true nodes.

OSM nodes mix real intersections and dead-ends with the points that merely
trace a street's curvature. Simplification keeps only the former and
consolidates each chain of sub-edges between them into a single edge that
retains the full polyline geometry and the summed length.
"""

from __future__ import annotations

from enum import Enum

from .errors import AlreadySimplified, UnknownNode
from .graph import EdgeRecord, StreetGraph


class SimplifyMode(Enum):
    STRICT = "strict"
    NON_STRICT = "non-strict"


def is_endpoint(g: StreetGraph, v: int, mode: SimplifyMode = SimplifyMode.STRICT) -> bool:
    """Decide whether v is a true graph-theoretic node.

    True when any of:
      a. v has a self-loop;
      b. v has a number of distinct neighbors other than 2 (dead-ends and
         junctions where a street continues through);
      c. v has exactly 2 neighbors but total directed degree outside
         {2, 4} (keeps the point where a street changes between one-way
         and two-way);
      d. mode is non-strict and the incident edges carry more than one
         distinct osmid (keeps elbows where differently numbered ways
         meet end to end).
    """
    if v not in g:
        raise UnknownNode(f"node {v} not in graph")
    if g.has_self_loop(v):
        return True
    neighbors = g.neighbors(v)
    if len(neighbors) != 2:
        return True
    if g.degree(v) not in (2, 4):
        return True
    if mode is SimplifyMode.NON_STRICT:
        osmids = set()
        for _u, _w, _key, rec in g.out_edges(v):
            osmids.add(_osmid_token(rec.osmid))
        for _u, _w, _key, rec in g.in_edges(v):
            osmids.add(_osmid_token(rec.osmid))
        if len(osmids) > 1:
            return True
    return False


def _osmid_token(osmid) -> tuple:
    if isinstance(osmid, list):
        return tuple(osmid)
    return (osmid,)


def _merge_attr(values: list):
    """Single shared value when uniform, else distinct values in first-seen order."""
    flat = []
    for value in values:
        items = value if isinstance(value, list) else [value]
        for item in items:
            if item not in flat:
                flat.append(item)
    if len(flat) == 1:
        return flat[0]
    return flat


def _consolidate(g: StreetGraph, node_path: list[int], edges: list[EdgeRecord]) -> EdgeRecord:
    geometry = [g.node(node_path[0]).coord()]
    for edge, node_id in zip(edges, node_path[1:]):
        if edge.geometry:
            geometry.extend(edge.geometry[1:])
        else:
            geometry.append(g.node(node_id).coord())
    merged = EdgeRecord(
        osmid=_merge_attr([e.osmid for e in edges]),
        length=sum(e.length for e in edges),
        oneway=all(e.oneway for e in edges),
        highway=_merge_attr([e.highway for e in edges if e.highway is not None]) or None,
        name=_merge_attr([e.name for e in edges if e.name is not None]) or None,
        geometry=geometry,
    )
    if len(edges) == 1:
        merged.grade = edges[0].grade
        merged.extra = dict(edges[0].extra)
    return merged


def simplify_graph(g: StreetGraph, mode: SimplifyMode = SimplifyMode.STRICT) -> StreetGraph:
    """Rebuild the graph on its endpoint set, one edge per directed chain.

    Every directed edge of the input is consumed by exactly one chain walk,
    so total length is conserved and directed reachability between
    endpoints is preserved. Interstitial cycles with no endpoint at all
    elect their minimum-id node as a synthetic endpoint so the walk
    terminates deterministically.
    """
    if g.simplified:
        raise AlreadySimplified("graph has already been simplified")

    endpoints = {v for v in g.node_ids() if is_endpoint(g, v, mode)}

    out = StreetGraph()
    g._clone_meta(out)
    out.simplified = True

    visited: set[tuple[int, int, int]] = set()
    chains: list[tuple[list[int], list[EdgeRecord]]] = []

    def walk_from(start: int):
        for _u, v, key, rec in sorted(g.out_edges(start), key=lambda e: (e[1], e[2])):
            if (start, v, key) in visited:
                continue
            visited.add((start, v, key))
            node_path = [start, v]
            edges = [rec]
            prev, cur = start, v
            while cur not in endpoints:
                step = None
                for _cu, w, wkey, wrec in sorted(g.out_edges(cur), key=lambda e: (e[1], e[2])):
                    if (cur, w, wkey) in visited:
                        continue
                    if w == prev and len(g.neighbors(cur)) == 2:
                        continue  # two-way chain: do not ping-pong back
                    step = (w, wkey, wrec)
                    break
                if step is None:
                    break  # degenerate chain with no continuation
                w, wkey, wrec = step
                visited.add((cur, w, wkey))
                node_path.append(w)
                edges.append(wrec)
                prev, cur = cur, w
            chains.append((node_path, edges))

    for endpoint in sorted(endpoints):
        walk_from(endpoint)

    # interstitial cycles never touched by an endpoint walk
    while True:
        leftovers = sorted(
            u for u, v, key, _rec in g.edges() if (u, v, key) not in visited
        )
        if not leftovers:
            break
        synthetic = leftovers[0]
        endpoints.add(synthetic)
        walk_from(synthetic)

    for node_id in sorted(endpoints):
        out.add_node(g.node(node_id).copy())
    for node_path, edges in chains:
        u, v = node_path[0], node_path[-1]
        # a chain may halt at a non-endpoint only in degenerate inputs;
        # keep that terminus so no edge is dropped
        for terminus in (u, v):
            if terminus not in out:
                out.add_node(g.node(terminus).copy())
        out.add_edge(u, v, _consolidate(g, node_path, edges))
    return out
