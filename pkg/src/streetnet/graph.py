"""Primal street network multidigraph and its construction from OSM elements.

The graph is directed, permits parallel edges (disambiguated by a dense
integer key per node pair) and self-loops, and carries spatial attributes
on nodes and edges. Construction from parsed OSM ways follows the tag
conventions decoded in :mod:`streetnet.osmdata`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import DanglingRef, EmptyGraph, UnknownNode
from .osmdata import NetworkType, OsmElement, oneway_direction

EARTH_RADIUS_M = 6_371_009.0

# relative tolerance for treating reciprocal edge lengths as equal
LENGTH_RTOL = 1e-6


def great_circle(a: tuple[float, float], b: tuple[float, float]) -> float:
    """Haversine distance in meters between two (lon, lat) points.

    Uses a spherical earth of radius 6,371,009 m. Symmetric, and zero
    exactly when the points coincide.
    """
    lon1, lat1 = a
    lon2, lat2 = b
    if lon1 == lon2 and lat1 == lat2:
        return 0.0
    phi1 = math.radians(lat1)
    phi2 = math.radians(lat2)
    dphi = phi2 - phi1
    dlam = math.radians(lon2 - lon1)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


@dataclass
class NodeRecord:
    """A graph node: an OSM node id with its coordinate and attributes."""

    id: int
    x: float  # lon degrees, or easting meters once projected
    y: float  # lat degrees, or northing meters once projected
    street_count: Optional[int] = None
    elevation: Optional[float] = None
    extra: dict = field(default_factory=dict)

    def coord(self) -> tuple[float, float]:
        return (self.x, self.y)

    def copy(self) -> "NodeRecord":
        return NodeRecord(self.id, self.x, self.y, self.street_count,
                          self.elevation, dict(self.extra))


@dataclass
class EdgeRecord:
    """A directed edge: one street segment (or a consolidated chain of them).

    ``geometry``, when present, is the ordered coordinate list of the full
    polyline; absent geometry means a straight chord between the endpoints.
    ``osmid``/``highway``/``name`` hold a single value, or a list of the
    distinct values merged during simplification.
    """

    osmid: object
    length: float
    oneway: bool
    highway: Optional[object] = None
    name: Optional[object] = None
    geometry: Optional[list[tuple[float, float]]] = None
    grade: Optional[float] = None
    extra: dict = field(default_factory=dict)

    def copy(self) -> "EdgeRecord":
        geom = list(self.geometry) if self.geometry is not None else None
        return EdgeRecord(self.osmid, self.length, self.oneway, self.highway,
                          self.name, geom, self.grade, dict(self.extra))


class StreetGraph:
    """Weighted multidigraph with self-loops and per-pair dense edge keys.

    ``meta`` invariants: ``crs`` is ``"wgs84"`` or ``"utm:<zone><N|S>"``;
    ``simplified`` flips to True only via topology simplification;
    ``undirected`` marks a projection whose edges are unordered street
    segments (stored with an arbitrary but deterministic orientation).
    """

    def __init__(self, crs: str = "wgs84", network_type: Optional[str] = None,
                 simplified: bool = False, undirected: bool = False):
        self.crs = crs
        self.network_type = network_type
        self.simplified = simplified
        self.undirected = undirected
        self.boundary = None  # optional GeoJSON geometry dict (query extent)
        self.extra_meta: dict = {}
        self._nodes: dict[int, NodeRecord] = {}
        self._succ: dict[int, dict[int, dict[int, EdgeRecord]]] = {}
        self._pred: dict[int, dict[int, dict[int, EdgeRecord]]] = {}
        self._frozen = False

    # --- mutation ---------------------------------------------------------

    def _check_mutable(self):
        if self._frozen:
            raise RuntimeError("graph is frozen")

    def freeze(self) -> "StreetGraph":
        """Mark the graph immutable; frozen graphs are safe to share."""
        self._frozen = True
        return self

    def add_node(self, node: NodeRecord):
        self._check_mutable()
        self._nodes[node.id] = node
        self._succ.setdefault(node.id, {})
        self._pred.setdefault(node.id, {})

    def add_edge(self, u: int, v: int, record: EdgeRecord) -> int:
        """Insert a directed edge and return its key (dense per (u, v))."""
        self._check_mutable()
        if u not in self._nodes:
            raise UnknownNode(f"node {u} not in graph")
        if v not in self._nodes:
            raise UnknownNode(f"node {v} not in graph")
        keyed = self._succ[u].setdefault(v, {})
        key = len(keyed)
        keyed[key] = record
        self._pred[v].setdefault(u, {})[key] = record
        return key

    def remove_node(self, node_id: int):
        self._check_mutable()
        if node_id not in self._nodes:
            raise UnknownNode(f"node {node_id} not in graph")
        for v in list(self._succ[node_id]):
            del self._pred[v][node_id]
        for u in list(self._pred[node_id]):
            if u != node_id:
                del self._succ[u][node_id]
        del self._succ[node_id]
        del self._pred[node_id]
        del self._nodes[node_id]

    # --- queries ----------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self._nodes)

    @property
    def m(self) -> int:
        return sum(len(keyed) for nbrs in self._succ.values() for keyed in nbrs.values())

    def __contains__(self, node_id) -> bool:
        return node_id in self._nodes

    def node(self, node_id: int) -> NodeRecord:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise UnknownNode(f"node {node_id} not in graph") from None

    def node_ids(self) -> list[int]:
        return list(self._nodes)

    def nodes(self) -> Iterator[NodeRecord]:
        return iter(self._nodes.values())

    def edge(self, u: int, v: int, key: int) -> EdgeRecord:
        return self._succ[u][v][key]

    def edge_group(self, u: int, v: int) -> dict[int, EdgeRecord]:
        """All parallel edges u -> v keyed by edge key (empty if none)."""
        return self._succ.get(u, {}).get(v, {})

    def edges(self) -> Iterator[tuple[int, int, int, EdgeRecord]]:
        """All edges in insertion order: (u, v, key, record)."""
        for u, nbrs in self._succ.items():
            for v, keyed in nbrs.items():
                for key, rec in keyed.items():
                    yield u, v, key, rec

    def sorted_edges(self) -> list[tuple[int, int, int, EdgeRecord]]:
        return sorted(self.edges(), key=lambda e: (e[0], e[1], e[2]))

    def out_edges(self, u: int) -> Iterator[tuple[int, int, int, EdgeRecord]]:
        for v, keyed in self._succ.get(u, {}).items():
            for key, rec in keyed.items():
                yield u, v, key, rec

    def in_edges(self, v: int) -> Iterator[tuple[int, int, int, EdgeRecord]]:
        for u, keyed in self._pred.get(v, {}).items():
            for key, rec in keyed.items():
                yield u, v, key, rec

    def successors(self, u: int) -> list[int]:
        return list(self._succ.get(u, {}))

    def predecessors(self, v: int) -> list[int]:
        return list(self._pred.get(v, {}))

    def neighbors(self, node_id: int) -> set[int]:
        """Distinct adjacent nodes in either direction, excluding the node."""
        nbrs = set(self._succ.get(node_id, {})) | set(self._pred.get(node_id, {}))
        nbrs.discard(node_id)
        return nbrs

    def out_degree(self, u: int) -> int:
        return sum(len(keyed) for keyed in self._succ.get(u, {}).values())

    def in_degree(self, v: int) -> int:
        return sum(len(keyed) for keyed in self._pred.get(v, {}).values())

    def degree(self, node_id: int) -> int:
        """Total incident edge count; a self-loop contributes 2."""
        return self.out_degree(node_id) + self.in_degree(node_id)

    def has_self_loop(self, node_id: int) -> bool:
        return node_id in self._succ.get(node_id, {})

    def self_loop_count(self) -> int:
        return sum(len(self._succ[u].get(u, {})) for u in self._succ)

    # --- copies -----------------------------------------------------------

    def _clone_meta(self, other: "StreetGraph"):
        other.crs = self.crs
        other.network_type = self.network_type
        other.simplified = self.simplified
        other.undirected = self.undirected
        other.boundary = self.boundary
        other.extra_meta = dict(self.extra_meta)

    def copy(self) -> "StreetGraph":
        g = StreetGraph()
        self._clone_meta(g)
        for node in self._nodes.values():
            g.add_node(node.copy())
        for u, v, _key, rec in self.edges():
            g.add_edge(u, v, rec.copy())
        return g

    def subgraph(self, keep: set[int]) -> "StreetGraph":
        """Copy with only the given nodes and the edges between them.

        Edge keys survive intact: a (u, v) pair keeps or loses all its
        parallel edges together, so keys stay dense from 0.
        """
        g = StreetGraph()
        self._clone_meta(g)
        for node_id in self._nodes:
            if node_id in keep:
                g.add_node(self._nodes[node_id].copy())
        for u, v, _key, rec in self.edges():
            if u in keep and v in keep:
                g.add_edge(u, v, rec.copy())
        return g


def build_graph(elements: list[OsmElement], network_type: NetworkType) -> StreetGraph:
    """Assemble the primal multidigraph from tag-filtered OSM elements.

    One node per OSM node referenced by some way. Each consecutive node-ref
    pair becomes a single directed edge for one-way streets (refs reversed
    first when the tag points against ref order) or a reciprocal pair for
    bidirectional streets. The walk network type always adds reciprocal
    pairs, ignoring one-way tags.
    """
    nodes = {e.id: e for e in elements if e.kind == "node"}
    ways = [e for e in elements if e.kind == "way"]

    referenced = set()
    for way in ways:
        for ref in way.node_refs:
            if ref not in nodes:
                raise DanglingRef(f"way {way.id} references missing node {ref}")
            referenced.add(ref)

    g = StreetGraph(crs="wgs84", network_type=network_type.value, simplified=False)
    for ref in referenced:
        osm_node = nodes[ref]
        g.add_node(NodeRecord(id=ref, x=osm_node.lon, y=osm_node.lat))

    force_bidirectional = network_type is NetworkType.WALK
    for way in ways:
        direction = oneway_direction(way.tags)
        refs = way.node_refs
        if direction == "reverse":
            refs = list(reversed(refs))
        oneway = direction != "both" and not force_bidirectional
        highway = way.tags.get("highway")
        name = way.tags.get("name")
        for u, v in zip(refs, refs[1:]):
            length = great_circle(nodes[u].lonlat(), nodes[v].lonlat())
            g.add_edge(u, v, EdgeRecord(osmid=way.id, length=length,
                                        oneway=oneway, highway=highway, name=name))
            if not oneway:
                g.add_edge(v, u, EdgeRecord(osmid=way.id, length=length,
                                            oneway=False, highway=highway, name=name))
    return g


def _lengths_match(a: float, b: float) -> bool:
    return abs(a - b) <= LENGTH_RTOL * max(abs(a), abs(b), 1e-12)


def _osmid_key(osmid):
    # merged osmid lists come out in walk order, which differs between the
    # two directions of a consolidated two-way chain; compare as a set
    if isinstance(osmid, list):
        return frozenset(osmid)
    return frozenset((osmid,))


def undirected_projection(g: StreetGraph) -> StreetGraph:
    """Collapse reciprocal directed edge pairs into single street segments.

    A pair (u, v) / (v, u) with the same osmid and equal length (within
    1e-6 relative) becomes one undirected edge; unmatched directed edges
    are kept as single undirected edges. Parallel self-loops collapse
    pairwise the same way. Idempotent: projecting twice equals once.
    """
    if g.undirected:
        return g.copy()
    out = StreetGraph()
    g._clone_meta(out)
    out.undirected = True
    for node in g.nodes():
        out.add_node(node.copy())

    consumed = set()
    for u, v, key, rec in g.sorted_edges():
        if (u, v, key) in consumed:
            continue
        consumed.add((u, v, key))
        # find an unconsumed reverse twin with the same osmid and length
        for rkey in sorted(g._succ.get(v, {}).get(u, {})):
            if (v, u, rkey) in consumed:
                continue
            twin = g.edge(v, u, rkey)
            if _osmid_key(twin.osmid) == _osmid_key(rec.osmid) \
                    and _lengths_match(twin.length, rec.length):
                consumed.add((v, u, rkey))
                break
        out.add_edge(u, v, rec.copy())
    return out


def streets_per_node(g: StreetGraph) -> dict[int, int]:
    """Physical street ends emanating from each node, stored on the nodes.

    Counted on the undirected projection; a self-loop contributes 2
    because both ends of the loop leave the same node.
    """
    if g.n == 0:
        raise EmptyGraph("streets_per_node on empty graph")
    u_graph = g if g.undirected else undirected_projection(g)
    counts = {node_id: 0 for node_id in u_graph.node_ids()}
    for u, v, _key, _rec in u_graph.edges():
        counts[u] += 1
        counts[v] += 1  # self-loop: u == v adds twice
    for node_id, count in counts.items():
        g.node(node_id).street_count = count
    return counts
