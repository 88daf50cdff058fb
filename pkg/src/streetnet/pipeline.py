"""End-to-end network acquisition: geocode, buffer, fetch, build, truncate.

The order matters: the region is buffered (default 500 m) before the
fetch so that per-node street counts are computed on the wider extent,
then the graph is truncated back to the requested boundary. Intersections
near the edge keep correct counts even when their cross streets leave
the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

from .client import NominatimClient, OverpassClient, fetch_elevations
from .errors import EmptyResult, NoResult
from .graph import StreetGraph, build_graph, streets_per_node
from .geometry import bbox_to_polygon, buffer_bbox, buffer_polygon, truncate_graph
from .osmdata import NetworkType, tag_filter
from .simplify import SimplifyMode, simplify_graph


@dataclass
class NetworkQuery:
    """One resolved acquisition request: a boundary plus build options."""

    boundary: dict | tuple  # GeoJSON polygon or (south, west, north, east)
    network_type: NetworkType = NetworkType.DRIVE
    buffer_m: float = 500.0
    simplify: bool = True
    simplify_mode: SimplifyMode = SimplifyMode.STRICT


def _expand(boundary, buffer_m: float):
    if buffer_m <= 0:
        return boundary
    if isinstance(boundary, dict):
        return buffer_polygon(boundary, buffer_m)
    return buffer_bbox(*boundary, distance=buffer_m)


def build_network(query: NetworkQuery, overpass: OverpassClient) -> StreetGraph:
    """Run the full pipeline for an already-resolved boundary."""
    fetch_region = _expand(query.boundary, query.buffer_m)
    response = overpass.fetch_streets(fetch_region, query.network_type)

    accept = tag_filter(query.network_type)
    kept_ways = [e for e in response.elements
                 if e.kind == "way" and accept(e.tags)]
    refs = {r for way in kept_ways for r in way.node_refs}
    kept_nodes = [e for e in response.elements
                  if e.kind == "node" and e.id in refs]
    if not kept_ways:
        raise EmptyResult("no ways matched the network-type filter")

    g = build_graph(kept_nodes + kept_ways, query.network_type)
    if query.simplify:
        g = simplify_graph(g, query.simplify_mode)
    streets_per_node(g)

    g = truncate_graph(g, query.boundary)
    g.boundary = query.boundary if isinstance(query.boundary, dict) \
        else bbox_to_polygon(*query.boundary)
    g.extra_meta["query_hash"] = response.query_hash
    return g


def network_from_bbox(bbox: tuple[float, float, float, float],
                      overpass: OverpassClient, **options) -> StreetGraph:
    return build_network(NetworkQuery(boundary=tuple(bbox), **options), overpass)


def network_from_polygon(polygon: dict, overpass: OverpassClient,
                         **options) -> StreetGraph:
    return build_network(NetworkQuery(boundary=polygon, **options), overpass)


def network_from_point(point: tuple[float, float], dist: float,
                       overpass: OverpassClient, **options) -> StreetGraph:
    """Square bbox of side 2*dist centered on (lon, lat): dist meters in
    each cardinal direction."""
    lon, lat = point
    bbox = buffer_bbox(lat, lon, lat, lon, distance=dist)
    return build_network(NetworkQuery(boundary=bbox, **options), overpass)


def network_from_place(place: str, overpass: OverpassClient,
                       nominatim: NominatimClient, **options) -> StreetGraph:
    boundary = nominatim.geocode_place(place)
    if boundary.point_only:
        raise NoResult(
            f"geocoder returned only a point for {place!r}; "
            "use an address query with an explicit distance")
    return build_network(NetworkQuery(boundary=boundary.geometry, **options),
                         overpass)


def network_from_address(address: str, dist: float, overpass: OverpassClient,
                         nominatim: NominatimClient, **options) -> StreetGraph:
    boundary = nominatim.geocode_place(address)
    return network_from_point(boundary.centroid, dist, overpass, **options)


def attach_elevations(g: StreetGraph, provider) -> None:
    """Fetch and store an elevation for every node (PartialFailure if any
    node cannot be resolved)."""
    nodes = [(node_id, g.node(node_id).x, g.node(node_id).y)
             for node_id in sorted(g.node_ids())]
    for record in fetch_elevations(nodes, provider):
        g.node(record.node_id).elevation = record.elevation
