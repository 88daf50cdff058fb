"""Network statistic suite: counts, lengths, densities, circuity, centralities.

basic_stats covers the count/length/density family; extended_stats adds
centralities, clustering, connectivity, PageRank, and the eccentricity
family. Both return a NetworkStats record that serializes to flat JSON
with absent fields omitted.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field, fields

from .centrality import (
    avg_neighborhood_degree,
    betweenness,
    closeness,
    clustering,
    degree_centrality,
    pagerank,
)
from .connectivity import connectivity_suite, is_strongly_connected, largest_scc
from .errors import EmptyGraph, NotStronglyConnected
from .graph import StreetGraph, great_circle, streets_per_node, undirected_projection
from .paths import edge_weight


@dataclass(frozen=True)
class AreaSpec:
    """Land area used as the denominator of the density measures."""
    area_km2: float
    source: str = "user-supplied"  # polygon | bbox | user-supplied

    def __post_init__(self):
        if self.area_km2 <= 0:
            raise ValueError("area must be positive")


@dataclass
class NetworkStats:
    n: int = 0
    m: int = 0
    avg_node_degree: float = 0.0
    intersection_count: int | None = None
    avg_streets_per_node: float | None = None
    streets_per_node_counts: dict[int, int] | None = None
    streets_per_node_proportions: dict[int, float] | None = None
    total_edge_length: float | None = None
    avg_edge_length: float | None = None
    total_street_length: float | None = None
    avg_street_length: float | None = None
    street_segment_count: int | None = None
    node_density_km2: float | None = None
    intersection_density_km2: float | None = None
    edge_density_km2: float | None = None
    street_density_km2: float | None = None
    avg_circuity: float | None = None
    self_loop_proportion: float | None = None
    mean_avg_neighborhood_degree: float | None = None
    mean_avg_weighted_neighborhood_degree: float | None = None
    avg_degree_centrality: float | None = None
    avg_clustering_coefficient: float | None = None
    avg_weighted_clustering_coefficient: float | None = None
    pagerank_max: float | None = None
    pagerank_max_node: int | None = None
    pagerank_min: float | None = None
    pagerank_min_node: int | None = None
    node_connectivity: int | None = None
    node_connectivity_undirected: int | None = None
    avg_node_connectivity: float | None = None
    avg_node_connectivity_undirected: float | None = None
    edge_connectivity: int | None = None
    eccentricity: dict[int, float] | None = None
    diameter: float | None = None
    radius: float | None = None
    center: list[int] | None = None
    periphery: list[int] | None = None
    avg_closeness_centrality: float | None = None
    avg_betweenness_centrality: float | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        """Flat dict in declaration order, absent (None) fields omitted."""
        out = {}
        for f in fields(self):
            if f.name == "extra":
                continue
            value = getattr(self, f.name)
            if value is not None:
                out[f.name] = value
        out.update(self.extra)
        return out


def _chord(g: StreetGraph, u: int, v: int) -> float:
    a = g.node(u)
    b = g.node(v)
    if g.crs == "wgs84":
        return great_circle((a.x, a.y), (b.x, b.y))
    return math.hypot(b.x - a.x, b.y - a.y)


def circuity(g: StreetGraph) -> float | None:
    """Sum of edge lengths over sum of straight chords, self-loops excluded."""
    total_len = 0.0
    total_chord = 0.0
    for u, v, _key, rec in g.edges():
        if u == v:
            continue
        total_len += rec.length
        total_chord += _chord(g, u, v)
    if total_chord == 0:
        return None
    return total_len / total_chord


def _street_counts(g: StreetGraph) -> dict[int, int]:
    stored = {node.id: node.street_count for node in g.nodes()}
    if all(v is not None for v in stored.values()):
        return stored  # trust counts computed before truncation
    return streets_per_node(g)


def basic_stats(g: StreetGraph, area: AreaSpec | None = None) -> NetworkStats:
    if g.n == 0:
        raise EmptyGraph("cannot compute stats of an empty graph")
    n = g.n
    m = g.m
    stats = NetworkStats(n=n, m=m, avg_node_degree=2.0 * m / n)

    counts = _street_counts(g)
    stats.intersection_count = sum(1 for c in counts.values() if c > 1)
    stats.avg_streets_per_node = sum(counts.values()) / n
    histogram: dict[int, int] = {}
    for c in counts.values():
        histogram[c] = histogram.get(c, 0) + 1
    stats.streets_per_node_counts = dict(sorted(histogram.items()))
    stats.streets_per_node_proportions = {
        k: v / n for k, v in stats.streets_per_node_counts.items()
    }

    lengths = [rec.length for _u, _v, _key, rec in g.edges()]
    stats.total_edge_length = sum(lengths)
    stats.avg_edge_length = stats.total_edge_length / m if m else 0.0

    streets = g if g.undirected else undirected_projection(g)
    street_lengths = [rec.length for _u, _v, _key, rec in streets.edges()]
    stats.street_segment_count = streets.m
    stats.total_street_length = sum(street_lengths)
    stats.avg_street_length = (
        stats.total_street_length / streets.m if streets.m else 0.0
    )

    if area is not None:
        km2 = area.area_km2
        stats.node_density_km2 = n / km2
        stats.intersection_density_km2 = stats.intersection_count / km2
        stats.edge_density_km2 = stats.total_edge_length / 1000.0 / km2
        stats.street_density_km2 = stats.total_street_length / 1000.0 / km2

    stats.avg_circuity = circuity(g)
    stats.self_loop_proportion = g.self_loop_count() / m if m else 0.0
    return stats


def eccentricity_suite(g: StreetGraph, weight: str = "length") -> dict:
    """Eccentricity per node plus diameter/radius/center/periphery, meters.

    Requires strong connectivity so every distance is finite.
    """
    if g.n == 0:
        raise EmptyGraph("eccentricity of an empty graph")
    if not is_strongly_connected(g):
        raise NotStronglyConnected(
            "eccentricity requires a strongly connected graph"
        )
    adj: dict[int, dict[int, float]] = {v: {} for v in g.node_ids()}
    for u, v, _key, rec in g.edges():
        if u == v:
            continue
        w = edge_weight(rec, weight)
        if v not in adj[u] or w < adj[u][v]:
            adj[u][v] = w
        if g.undirected and (u not in adj[v] or w < adj[v][u]):
            adj[v][u] = w
    ecc: dict[int, float] = {}
    for s in g.node_ids():
        dist = {s: 0.0}
        heap = [(0.0, s)]
        done: set[int] = set()
        while heap:
            d, u = heapq.heappop(heap)
            if u in done:
                continue
            done.add(u)
            for v, w in adj[u].items():
                nd = d + w
                if v not in done and (v not in dist or nd < dist[v]):
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
        ecc[s] = max(dist.values())
    diameter = max(ecc.values())
    radius = min(ecc.values())
    return {
        "eccentricity": ecc,
        "diameter": diameter,
        "radius": radius,
        "center": sorted(v for v, e in ecc.items() if e == radius),
        "periphery": sorted(v for v, e in ecc.items() if e == diameter),
    }


def extended_stats(
    g: StreetGraph,
    area: AreaSpec | None = None,
    scc_mode: str = "raise",  # raise | largest | skip
) -> NetworkStats:
    """Full statistic record. scc_mode governs the eccentricity family on
    graphs that are not strongly connected: raise, compute on the largest
    strongly connected component, or leave those fields absent."""
    stats = basic_stats(g, area)

    neigh = avg_neighborhood_degree(g, weighted=False)
    stats.mean_avg_neighborhood_degree = sum(neigh.values()) / g.n
    weighted_neigh = avg_neighborhood_degree(g, weighted=True)
    stats.mean_avg_weighted_neighborhood_degree = sum(weighted_neigh.values()) / g.n

    stats.avg_degree_centrality = sum(degree_centrality(g).values()) / g.n
    stats.avg_clustering_coefficient = sum(clustering(g).values()) / g.n
    stats.avg_weighted_clustering_coefficient = (
        sum(clustering(g, weighted=True).values()) / g.n
    )

    ranks = pagerank(g)
    best = max(ranks.items(), key=lambda kv: (kv[1], -kv[0]))
    worst = min(ranks.items(), key=lambda kv: (kv[1], kv[0]))
    stats.pagerank_max_node, stats.pagerank_max = best
    stats.pagerank_min_node, stats.pagerank_min = worst

    conn = connectivity_suite(g)
    stats.node_connectivity = int(conn["node_connectivity"])
    stats.edge_connectivity = int(conn["edge_connectivity"])
    stats.avg_node_connectivity = conn["avg_node_connectivity"]
    stats.node_connectivity_undirected = int(conn["node_connectivity_undirected"])
    stats.avg_node_connectivity_undirected = conn["avg_node_connectivity_undirected"]

    stats.avg_closeness_centrality = sum(closeness(g).values()) / g.n
    stats.avg_betweenness_centrality = sum(betweenness(g).values()) / g.n

    ecc_graph = g
    if not is_strongly_connected(g):
        if scc_mode == "raise":
            raise NotStronglyConnected(
                "graph is not strongly connected; rerun on the largest "
                "strongly connected component to get eccentricity fields"
            )
        if scc_mode == "skip":
            ecc_graph = None
        elif scc_mode == "largest":
            ecc_graph = largest_scc(g)
        else:
            raise ValueError(f"unknown scc_mode {scc_mode!r}")
    if ecc_graph is not None:
        family = eccentricity_suite(ecc_graph)
        stats.eccentricity = family["eccentricity"]
        stats.diameter = family["diameter"]
        stats.radius = family["radius"]
        stats.center = family["center"]
        stats.periphery = family["periphery"]
    return stats
