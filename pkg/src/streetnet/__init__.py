"""Street network acquisition, simplification, and analysis toolkit.

Builds primal, non-planar, directed multigraphs of street networks from
OpenStreetMap data (or recorded fixtures), simplifies their topology to
intersections and dead-ends, and computes the metric/topological measure
suite, shortest-path routing, and GraphML/GeoJSON/SVG serialization.
"""

from .errors import StreetNetError
from .graph import (
    EdgeRecord,
    NodeRecord,
    StreetGraph,
    build_graph,
    great_circle,
    streets_per_node,
    undirected_projection,
)
from .measures import AreaSpec, NetworkStats, basic_stats, extended_stats
from .osmdata import NetworkType, OsmElement, parse_overpass, tag_filter
from .pipeline import (
    NetworkQuery,
    attach_elevations,
    build_network,
    network_from_address,
    network_from_bbox,
    network_from_place,
    network_from_point,
    network_from_polygon,
)
from .routing import Route, nearest_node, route_by_grade, shortest_path
from .serialize import export_geojson, load_graphml, render_svg, save_graphml
from .simplify import SimplifyMode, is_endpoint, simplify_graph

__version__ = "0.1.0"

__all__ = [
    "AreaSpec",
    "EdgeRecord",
    "NetworkQuery",
    "NetworkStats",
    "NetworkType",
    "NodeRecord",
    "OsmElement",
    "Route",
    "SimplifyMode",
    "StreetGraph",
    "StreetNetError",
    "attach_elevations",
    "basic_stats",
    "build_graph",
    "build_network",
    "export_geojson",
    "extended_stats",
    "great_circle",
    "is_endpoint",
    "load_graphml",
    "nearest_node",
    "network_from_address",
    "network_from_bbox",
    "network_from_place",
    "network_from_point",
    "network_from_polygon",
    "parse_overpass",
    "render_svg",
    "route_by_grade",
    "save_graphml",
    "shortest_path",
    "simplify_graph",
    "streets_per_node",
    "tag_filter",
    "undirected_projection",
]
