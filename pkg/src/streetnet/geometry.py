"""Geodesy and spatial scoping: UTM projection, buffering, truncation.

The transverse Mercator conversion is a 6th-order Krueger series on the
WGS84 ellipsoid (a = 6,378,137 m, f = 1/298.257223563), accurate to
millimeters within a zone. Polygon buffering delegates to shapely after
projecting into the polygon's UTM zone; point-in-polygon uses an even-odd
ray cast with boundary points counted inside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from shapely.geometry import shape as shapely_shape
from shapely.geometry import mapping as shapely_mapping

from .errors import (
    AlreadyProjected,
    EmptyResult,
    InvalidPolygon,
    UnknownNode,
)
from .graph import StreetGraph
from .paths import dijkstra

WGS84_A = 6_378_137.0
WGS84_F = 1.0 / 298.257223563
UTM_K0 = 0.9996
UTM_FALSE_EASTING = 500_000.0
UTM_FALSE_NORTHING_SOUTH = 10_000_000.0

_N = WGS84_F / (2.0 - WGS84_F)
_N2 = _N * _N
_N3 = _N2 * _N
_N4 = _N3 * _N
_N5 = _N4 * _N
_N6 = _N5 * _N

# rectifying radius
_A_CAP = WGS84_A / (1 + _N) * (1 + _N2 / 4 + _N4 / 64 + _N6 / 256)

_ALPHA = (
    _N / 2 - 2 * _N2 / 3 + 5 * _N3 / 16 + 41 * _N4 / 180 - 127 * _N5 / 288 + 7891 * _N6 / 37800,
    13 * _N2 / 48 - 3 * _N3 / 5 + 557 * _N4 / 1440 + 281 * _N5 / 630 - 1983433 * _N6 / 1935360,
    61 * _N3 / 240 - 103 * _N4 / 140 + 15061 * _N5 / 26880 + 167603 * _N6 / 181440,
    49561 * _N4 / 161280 - 179 * _N5 / 168 + 6601661 * _N6 / 7257600,
    34729 * _N5 / 80640 - 3418889 * _N6 / 1995840,
    212378941 * _N6 / 319334400,
)

_BETA = (
    _N / 2 - 2 * _N2 / 3 + 37 * _N3 / 96 - _N4 / 360 - 81 * _N5 / 512 + 96199 * _N6 / 604800,
    _N2 / 48 + _N3 / 15 - 437 * _N4 / 1440 + 46 * _N5 / 105 - 1118711 * _N6 / 3870720,
    17 * _N3 / 480 - 37 * _N4 / 840 - 209 * _N5 / 4480 + 5569 * _N6 / 90720,
    4397 * _N4 / 161280 - 11 * _N5 / 504 - 830251 * _N6 / 7257600,
    4583 * _N5 / 161280 - 108847 * _N6 / 3991680,
    20648693 * _N6 / 638668800,
)

_E_SQ = WGS84_F * (2.0 - WGS84_F)
_E = math.sqrt(_E_SQ)


@dataclass(frozen=True)
class UtmZone:
    zone: int  # 1..60
    hemisphere: str  # "north" | "south"

    @property
    def central_meridian(self) -> float:
        return (self.zone - 1) * 6 - 180 + 3

    def label(self) -> str:
        return f"{self.zone}{'N' if self.hemisphere == 'north' else 'S'}"


def utm_zone_for(lon: float, lat: float) -> UtmZone:
    """UTM zone containing a lon/lat point: floor((lon+180)/6)+1, clamped."""
    zone = int(math.floor((lon + 180.0) / 6.0)) + 1
    zone = min(60, max(1, zone))
    return UtmZone(zone=zone, hemisphere="north" if lat >= 0 else "south")


def lonlat_to_utm(lon: float, lat: float, zone: UtmZone) -> tuple[float, float]:
    """Forward transverse Mercator: (lon, lat) degrees to (easting, northing)."""
    lam = math.radians(lon - zone.central_meridian)
    phi = math.radians(lat)

    sin_phi = math.sin(phi)
    if abs(sin_phi) >= 1.0:  # pole: conformal tangent diverges
        xi_p = math.copysign(math.pi / 2.0, phi)
        eta_p = 0.0
    else:
        t = math.sinh(math.atanh(sin_phi) - 2 * math.sqrt(_N) / (1 + _N)
                      * math.atanh(2 * math.sqrt(_N) / (1 + _N) * sin_phi))
        xi_p = math.atan2(t, math.cos(lam))
        eta_p = math.asinh(math.sin(lam) / math.hypot(t, math.cos(lam)))

    xi = xi_p
    eta = eta_p
    for j, alpha in enumerate(_ALPHA, start=1):
        xi += alpha * math.sin(2 * j * xi_p) * math.cosh(2 * j * eta_p)
        eta += alpha * math.cos(2 * j * xi_p) * math.sinh(2 * j * eta_p)

    easting = UTM_FALSE_EASTING + UTM_K0 * _A_CAP * eta
    northing = UTM_K0 * _A_CAP * xi
    if zone.hemisphere == "south":
        northing += UTM_FALSE_NORTHING_SOUTH
    return easting, northing


def utm_to_lonlat(easting: float, northing: float, zone: UtmZone) -> tuple[float, float]:
    """Inverse transverse Mercator: (easting, northing) back to (lon, lat)."""
    if zone.hemisphere == "south":
        northing = northing - UTM_FALSE_NORTHING_SOUTH
    xi = northing / (UTM_K0 * _A_CAP)
    eta = (easting - UTM_FALSE_EASTING) / (UTM_K0 * _A_CAP)

    xi_p = xi
    eta_p = eta
    for j, beta in enumerate(_BETA, start=1):
        xi_p -= beta * math.sin(2 * j * xi) * math.cosh(2 * j * eta)
        eta_p -= beta * math.cos(2 * j * xi) * math.sinh(2 * j * eta)

    lam = math.atan2(math.sinh(eta_p), math.cos(xi_p))
    tau_c = math.sin(xi_p) / math.hypot(math.sinh(eta_p), math.cos(xi_p))

    # conformal tangent back to geographic tangent by Newton iteration
    def conformal_tangent(tau: float) -> float:
        hyp = math.hypot(1.0, tau)
        sig = math.sinh(_E * math.atanh(_E * tau / hyp))
        return math.hypot(1.0, sig) * tau - sig * hyp

    e2m = 1.0 - _E_SQ
    tau = tau_c / e2m
    for _ in range(8):
        approx = conformal_tangent(tau)
        dtau = ((tau_c - approx) * (1.0 + e2m * tau * tau)
                / (e2m * math.hypot(1.0, tau) * math.hypot(1.0, approx)))
        tau += dtau
        if abs(dtau) < 1e-15 * max(1.0, abs(tau_c)):
            break
    phi = math.atan(tau)
    return zone.central_meridian + math.degrees(lam), math.degrees(phi)


# --- polygon helpers ------------------------------------------------------------


def _rings(geometry: dict) -> list[list[tuple[float, float]]]:
    """All rings of a GeoJSON Polygon or MultiPolygon as coordinate lists."""
    gtype = geometry.get("type")
    if gtype == "Polygon":
        polys = [geometry["coordinates"]]
    elif gtype == "MultiPolygon":
        polys = geometry["coordinates"]
    else:
        raise InvalidPolygon(f"expected Polygon or MultiPolygon, got {gtype!r}")
    return [[(float(x), float(y)) for x, y in ring] for poly in polys for ring in poly]


def polygon_centroid(geometry: dict) -> tuple[float, float]:
    """Mean of the exterior ring vertices; adequate for zone selection."""
    rings = _rings(geometry)
    if not rings or not rings[0]:
        raise InvalidPolygon("polygon has no coordinates")
    pts = rings[0]
    if pts[0] == pts[-1] and len(pts) > 1:
        pts = pts[:-1]
    return (sum(p[0] for p in pts) / len(pts), sum(p[1] for p in pts) / len(pts))


def _transform_geometry(geometry: dict, fn) -> dict:
    gtype = geometry["type"]

    def ring_map(ring):
        return [list(fn(x, y)) for x, y in ring]

    if gtype == "Polygon":
        coords = [ring_map(r) for r in geometry["coordinates"]]
    elif gtype == "MultiPolygon":
        coords = [[ring_map(r) for r in poly] for poly in geometry["coordinates"]]
    else:
        raise InvalidPolygon(f"expected Polygon or MultiPolygon, got {gtype!r}")
    return {"type": gtype, "coordinates": coords}


def buffer_polygon(geometry: dict, distance: float) -> dict:
    """Expand a lon/lat polygon outward by a distance in meters.

    Projects into the polygon's UTM zone, buffers there, and unprojects.
    Distance 0 returns the input unchanged.
    """
    if distance < 0:
        raise InvalidPolygon("buffer distance must be >= 0")
    if distance == 0:
        return geometry
    lon, lat = polygon_centroid(geometry)
    zone = utm_zone_for(lon, lat)
    projected = _transform_geometry(geometry, lambda x, y: lonlat_to_utm(x, y, zone))
    shp = shapely_shape(projected)
    if not shp.is_valid:
        raise InvalidPolygon("polygon is not valid")
    buffered = shp.buffer(distance, quad_segs=8)
    back = _transform_geometry(shapely_mapping(buffered),
                               lambda x, y: utm_to_lonlat(x, y, zone))
    return back


def polygon_area_km2(geometry: dict) -> float:
    """Shoelace area of a lon/lat polygon, evaluated in its UTM zone."""
    lon, lat = polygon_centroid(geometry)
    zone = utm_zone_for(lon, lat)
    gtype = geometry["type"]
    polys = [geometry["coordinates"]] if gtype == "Polygon" else geometry["coordinates"]
    total = 0.0
    for poly in polys:
        for i, ring in enumerate(poly):
            pts = [lonlat_to_utm(x, y, zone) for x, y in ring]
            s = 0.0
            for (x1, y1), (x2, y2) in zip(pts, pts[1:] + pts[:1]):
                s += x1 * y2 - x2 * y1
            ring_area = abs(s) / 2.0
            total += ring_area if i == 0 else -ring_area  # holes subtract
    return total / 1e6


def bbox_to_polygon(south: float, west: float, north: float, east: float) -> dict:
    return {
        "type": "Polygon",
        "coordinates": [[
            [west, south], [east, south], [east, north], [west, north], [west, south],
        ]],
    }


def buffer_bbox(south: float, west: float, north: float, east: float,
                distance: float) -> tuple[float, float, float, float]:
    """Expand a lon/lat bbox by a distance in meters in every direction."""
    lat_mid = (south + north) / 2.0
    dlat = math.degrees(distance / 6_371_009.0)
    dlon = dlat / max(1e-9, math.cos(math.radians(lat_mid)))
    return (south - dlat, west - dlon, north + dlat, east + dlon)


def _on_segment(px, py, x1, y1, x2, y2) -> bool:
    cross = (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1)
    if abs(cross) > 1e-12 * max(1.0, abs(x2 - x1), abs(y2 - y1)):
        return False
    return min(x1, x2) - 1e-12 <= px <= max(x1, x2) + 1e-12 and \
        min(y1, y2) - 1e-12 <= py <= max(y1, y2) + 1e-12


def point_in_polygon(point: tuple[float, float], geometry: dict) -> bool:
    """Even-odd ray cast over every ring; boundary points count inside."""
    px, py = point
    inside = False
    for ring in _rings(geometry):
        pts = ring if ring[0] == ring[-1] else ring + [ring[0]]
        for (x1, y1), (x2, y2) in zip(pts, pts[1:]):
            if _on_segment(px, py, x1, y1, x2, y2):
                return True
            if (y1 > py) != (y2 > py):
                x_cross = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
                if px < x_cross:
                    inside = not inside
    return inside


# --- graph scoping ---------------------------------------------------------------


def _inside_bbox(x, y, bbox) -> bool:
    south, west, north, east = bbox
    return west <= x <= east and south <= y <= north


def truncate_graph(g: StreetGraph, boundary) -> StreetGraph:
    """Drop nodes outside a polygon (GeoJSON dict) or bbox (s, w, n, e).

    Pre-computed street_count values ride along unchanged; nodes left
    isolated by the cut are removed as well.
    """
    if isinstance(boundary, dict):
        keep = {node.id for node in g.nodes()
                if point_in_polygon((node.x, node.y), boundary)}
    else:
        keep = {node.id for node in g.nodes() if _inside_bbox(node.x, node.y, boundary)}
    if not keep:
        raise EmptyResult("no nodes inside the truncation boundary")
    out = g.subgraph(keep)
    isolated = [node.id for node in out.nodes() if out.degree(node.id) == 0]
    for node_id in isolated:
        out.remove_node(node_id)
    if out.n == 0:
        raise EmptyResult("truncation left only isolated nodes")
    return out


def truncate_by_network_distance(g: StreetGraph, center: int, radius: float) -> StreetGraph:
    """Keep nodes within a shortest-path length radius of center (directed)."""
    if center not in g:
        raise UnknownNode(f"node {center} not in graph")
    dist, _pred = dijkstra(g, center, weight="length")
    keep = {node_id for node_id, d in dist.items() if d <= radius}
    return g.subgraph(keep)


def graph_centroid(g: StreetGraph) -> tuple[float, float]:
    xs = [node.x for node in g.nodes()]
    ys = [node.y for node in g.nodes()]
    return (sum(xs) / len(xs), sum(ys) / len(ys))


def project_graph(g: StreetGraph) -> StreetGraph:
    """Convert a wgs84 graph to UTM meters in the zone of its centroid."""
    if g.crs != "wgs84":
        raise AlreadyProjected(f"graph crs is {g.crs!r}, expected wgs84")
    lon, lat = graph_centroid(g)
    zone = utm_zone_for(lon, lat)
    out = g.copy()
    for node in out.nodes():
        node.x, node.y = lonlat_to_utm(node.x, node.y, zone)
    for _u, _v, _key, rec in out.edges():
        if rec.geometry is not None:
            rec.geometry = [lonlat_to_utm(x, y, zone) for x, y in rec.geometry]
    out.crs = f"utm:{zone.label()}"
    return out
