"""Persistence and export: GraphML save/load, GeoJSON layers, SVG rendering.

GraphML is the round-trip format: every attribute key is declared before
use, floats are written with repr for lossless 15+ digit fidelity, edge
geometry rides as WKT LINESTRING text, and list-valued attributes (merged
osmids, names) are JSON-encoded strings. Unknown keys found when loading
a foreign file are preserved as opaque extra attributes.
"""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from xml.sax.saxutils import escape, quoteattr

from .errors import EmptyGraph, FileParseError, NotProjected, SchemaViolation
from .graph import EdgeRecord, NodeRecord, StreetGraph, undirected_projection

GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"

SQUARE_MILE_M = 1609.34

_GRAPH_KEYS = {
    "crs": "string",
    "network_type": "string",
    "simplified": "boolean",
    "undirected": "boolean",
    "boundary": "string",  # GeoJSON text
}
_NODE_KEYS = {
    "x": "double",
    "y": "double",
    "street_count": "long",
    "elevation": "double",
}
_EDGE_KEYS = {
    "key": "long",
    "osmid": "string",  # int or JSON list
    "length": "double",
    "oneway": "boolean",
    "highway": "string",
    "name": "string",
    "geometry": "string",  # WKT LINESTRING
    "grade": "double",
}


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _wkt_linestring(coords) -> str:
    body = ", ".join(f"{repr(float(x))} {repr(float(y))}" for x, y in coords)
    return f"LINESTRING ({body})"


def _parse_wkt_linestring(text: str) -> list[tuple[float, float]]:
    text = text.strip()
    if not text.upper().startswith("LINESTRING"):
        raise SchemaViolation(f"expected WKT LINESTRING, got {text[:30]!r}")
    inner = text[text.index("(") + 1:text.rindex(")")]
    coords = []
    for pair in inner.split(","):
        xs = pair.split()
        if len(xs) != 2:
            raise SchemaViolation(f"bad WKT coordinate {pair!r}")
        coords.append((float(xs[0]), float(xs[1])))
    return coords


def _jsonish(value) -> str:
    """Plain text -> bare string; anything else JSON-encoded.

    Strings that would themselves decode as JSON (a street named "101")
    get quoted so the reader's decode step restores them losslessly.
    """
    if isinstance(value, str):
        try:
            json.loads(value)
        except ValueError:
            return value
    return json.dumps(value)


def _unjsonish(text: str):
    try:
        return json.loads(text)
    except (ValueError, TypeError):
        return text


def save_graphml(g: StreetGraph, path: str) -> None:
    lines = ['<?xml version="1.0" encoding="utf-8"?>']
    lines.append(f'<graphml xmlns="{GRAPHML_NS}">')

    # collect extra attribute names so every key is declared up front
    graph_extra = sorted(k for k in g.extra_meta)
    node_extra = sorted({k for node in g.nodes() for k in node.extra})
    edge_extra = sorted({k for _u, _v, _k, rec in g.edges() for k in rec.extra})

    def declare(domain: str, name: str, attr_type: str):
        lines.append(
            f'  <key id="{domain[0]}_{name}" for="{domain}" '
            f'attr.name="{name}" attr.type="{attr_type}"/>'
        )

    for name, attr_type in _GRAPH_KEYS.items():
        declare("graph", name, attr_type)
    for name in graph_extra:
        declare("graph", name, "string")
    for name, attr_type in _NODE_KEYS.items():
        declare("node", name, attr_type)
    for name in node_extra:
        declare("node", name, "string")
    for name, attr_type in _EDGE_KEYS.items():
        declare("edge", name, attr_type)
    for name in edge_extra:
        declare("edge", name, "string")

    lines.append('  <graph edgedefault="directed">')

    def data(domain: str, name: str, value):
        lines.append(
            f'    <data key="{domain[0]}_{name}">{escape(_fmt(value))}</data>'
        )

    data("graph", "crs", g.crs)
    if g.network_type is not None:
        data("graph", "network_type", g.network_type)
    data("graph", "simplified", g.simplified)
    data("graph", "undirected", g.undirected)
    if g.boundary is not None:
        data("graph", "boundary", json.dumps(g.boundary))
    for name in graph_extra:
        data("graph", name, _jsonish(g.extra_meta[name]))

    for node_id in sorted(g.node_ids()):
        node = g.node(node_id)
        lines.append(f'    <node id={quoteattr(str(node_id))}>')
        parts = [("x", node.x), ("y", node.y)]
        if node.street_count is not None:
            parts.append(("street_count", node.street_count))
        if node.elevation is not None:
            parts.append(("elevation", node.elevation))
        for name in sorted(node.extra):
            parts.append((name, _jsonish(node.extra[name])))
        for name, value in parts:
            lines.append(
                f'      <data key="n_{name}">{escape(_fmt(value))}</data>'
            )
        lines.append('    </node>')

    for u, v, key, rec in g.sorted_edges():
        lines.append(
            f'    <edge source={quoteattr(str(u))} target={quoteattr(str(v))}>'
        )
        parts = [
            ("key", key),
            ("osmid", _jsonish(rec.osmid)),
            ("length", rec.length),
            ("oneway", rec.oneway),
        ]
        if rec.highway is not None:
            parts.append(("highway", _jsonish(rec.highway)))
        if rec.name is not None:
            parts.append(("name", _jsonish(rec.name)))
        if rec.geometry is not None:
            parts.append(("geometry", _wkt_linestring(rec.geometry)))
        if rec.grade is not None:
            parts.append(("grade", rec.grade))
        for name in sorted(rec.extra):
            parts.append((name, _jsonish(rec.extra[name])))
        for name, value in parts:
            lines.append(
                f'      <data key="e_{name}">{escape(_fmt(value))}</data>'
            )
        lines.append('    </edge>')

    lines.append('  </graph>')
    lines.append('</graphml>')
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _parse_bool(text: str) -> bool:
    return text.strip().lower() in ("true", "1", "yes")


def load_graphml(path: str) -> StreetGraph:
    try:
        tree = ET.parse(path)
    except (ET.ParseError, OSError) as exc:
        raise FileParseError(f"cannot parse GraphML {path}: {exc}") from exc
    root = tree.getroot()

    keys: dict[str, tuple[str, str, str]] = {}  # id -> (domain, name, type)
    for el in root:
        if _local(el.tag) == "key":
            keys[el.get("id")] = (
                el.get("for", ""), el.get("attr.name", el.get("id")),
                el.get("attr.type", "string"),
            )

    graph_el = None
    for el in root:
        if _local(el.tag) == "graph":
            graph_el = el
            break
    if graph_el is None:
        raise SchemaViolation("no <graph> element")

    def collect(el) -> dict[str, str]:
        out = {}
        for child in el:
            if _local(child.tag) == "data":
                _domain, name, _t = keys.get(
                    child.get("key"), ("", child.get("key"), "string"))
                out[name] = child.text or ""
        return out

    meta = collect(graph_el)
    g = StreetGraph(
        crs=meta.pop("crs", "wgs84"),
        network_type=meta.pop("network_type", None),
        simplified=_parse_bool(meta.pop("simplified", "false")),
        undirected=_parse_bool(meta.pop("undirected", "false")),
    )
    boundary = meta.pop("boundary", None)
    if boundary:
        g.boundary = json.loads(boundary)
    for name, text in meta.items():
        g.extra_meta[name] = _unjsonish(text)

    known_node = set(_NODE_KEYS)
    for el in graph_el:
        if _local(el.tag) != "node":
            continue
        raw = collect(el)
        node_id = el.get("id")
        if "x" not in raw or "y" not in raw:
            raise SchemaViolation(f"node {node_id} missing x/y")
        node = NodeRecord(id=int(node_id), x=float(raw["x"]), y=float(raw["y"]))
        if "street_count" in raw:
            node.street_count = int(raw["street_count"])
        if "elevation" in raw:
            node.elevation = float(raw["elevation"])
        for name, text in raw.items():
            if name not in known_node:
                node.extra[name] = _unjsonish(text)
        g.add_node(node)

    known_edge = set(_EDGE_KEYS)
    pending: list[tuple[int, int, int, EdgeRecord]] = []
    for el in graph_el:
        if _local(el.tag) != "edge":
            continue
        raw = collect(el)
        u, v = el.get("source"), el.get("target")
        for mandatory in ("osmid", "length", "oneway", "key"):
            if mandatory not in raw:
                raise SchemaViolation(f"edge {u}->{v} missing {mandatory!r}")
        rec = EdgeRecord(
            osmid=_unjsonish(raw["osmid"]),
            length=float(raw["length"]),
            oneway=_parse_bool(raw["oneway"]),
            highway=_unjsonish(raw["highway"]) if "highway" in raw else None,
            name=_unjsonish(raw["name"]) if "name" in raw else None,
        )
        if "geometry" in raw:
            rec.geometry = _parse_wkt_linestring(raw["geometry"])
        if "grade" in raw:
            rec.grade = float(raw["grade"])
        for name, text in raw.items():
            if name not in known_edge:
                rec.extra[name] = _unjsonish(text)
        pending.append((int(u), int(v), int(raw["key"]), rec))

    # dense keys are assigned in insertion order, so insert key-sorted
    for u, v, key, rec in sorted(pending, key=lambda t: (t[0], t[1], t[2])):
        assigned = g.add_edge(u, v, rec)
        if assigned != key:
            raise SchemaViolation(
                f"edge {u}->{v} key {key} out of dense order (got {assigned})"
            )
    return g


# --- GeoJSON ----------------------------------------------------------------------


def _round_coord(g: StreetGraph, x: float, y: float) -> list[float]:
    digits = 7 if g.crs == "wgs84" else 3
    return [round(x, digits), round(y, digits)]


def graph_to_geojson(g: StreetGraph) -> tuple[dict, dict]:
    """(nodes, edges) feature collections; edges from the undirected projection."""
    if g.n == 0:
        raise EmptyGraph("cannot export an empty graph")
    node_features = []
    for node_id in sorted(g.node_ids()):
        node = g.node(node_id)
        props = {"id": node_id}
        if node.street_count is not None:
            props["street_count"] = node.street_count
        if node.elevation is not None:
            props["elevation"] = node.elevation
        props.update(node.extra)
        node_features.append({
            "type": "Feature",
            "geometry": {"type": "Point",
                         "coordinates": _round_coord(g, node.x, node.y)},
            "properties": props,
        })

    streets = g if g.undirected else undirected_projection(g)
    edge_features = []
    for u, v, key, rec in streets.sorted_edges():
        coords = rec.geometry or [streets.node(u).coord(), streets.node(v).coord()]
        props = {
            "u": u, "v": v, "key": key,
            "osmid": rec.osmid, "length": rec.length, "oneway": rec.oneway,
        }
        if rec.highway is not None:
            props["highway"] = rec.highway
        if rec.name is not None:
            props["name"] = rec.name
        props.update(rec.extra)
        edge_features.append({
            "type": "Feature",
            "geometry": {
                "type": "LineString",
                "coordinates": [_round_coord(g, x, y) for x, y in coords],
            },
            "properties": props,
        })
    nodes_fc = {"type": "FeatureCollection", "features": node_features}
    edges_fc = {"type": "FeatureCollection", "features": edge_features}
    return nodes_fc, edges_fc


def export_geojson(g: StreetGraph, path_nodes: str, path_edges: str) -> None:
    nodes_fc, edges_fc = graph_to_geojson(g)
    for path, payload in ((path_nodes, nodes_fc), (path_edges, edges_fc)):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


# --- SVG --------------------------------------------------------------------------


def render_svg(
    g: StreetGraph,
    width_px: int = 800,
    stroke_m: float = 5.0,
    bbox: tuple[float, float, float, float] | None = None,
    square_mile_center: tuple[float, float] | None = None,
) -> str:
    """Figure-ground SVG: edges as paths in a meters viewBox.

    Requires projected coordinates. square_mile_center crops the view to a
    1609.34 m square centered on the given (x, y). Output is deterministic:
    sorted edge order, fixed 3-decimal coordinates.
    """
    if g.crs == "wgs84":
        raise NotProjected("render_svg needs projected (meter) coordinates")
    if g.n == 0:
        raise EmptyGraph("cannot render an empty graph")

    if square_mile_center is not None:
        cx, cy = square_mile_center
        half = SQUARE_MILE_M / 2.0
        minx, maxx = cx - half, cx + half
        miny, maxy = cy - half, cy + half
    elif bbox is not None:
        minx, miny, maxx, maxy = bbox
    else:
        xs, ys = [], []
        for node in g.nodes():
            xs.append(node.x)
            ys.append(node.y)
        for _u, _v, _key, rec in g.edges():
            for x, y in rec.geometry or ():
                xs.append(x)
                ys.append(y)
        minx, maxx = min(xs), max(xs)
        miny, maxy = min(ys), max(ys)

    span_x = max(maxx - minx, 1e-9)
    span_y = max(maxy - miny, 1e-9)
    height_px = width_px * span_y / span_x

    def pt(x: float, y: float) -> str:
        return f"{x - minx:.3f},{maxy - y:.3f}"  # flip y: SVG grows downward

    paths = []
    for u, v, key, rec in g.sorted_edges():
        coords = rec.geometry or [g.node(u).coord(), g.node(v).coord()]
        exs = [c[0] for c in coords]
        eys = [c[1] for c in coords]
        if max(exs) < minx or min(exs) > maxx or max(eys) < miny or min(eys) > maxy:
            continue  # fully outside the crop
        d = "M " + " L ".join(pt(x, y) for x, y in coords)
        paths.append(f'  <path d="{d}" id="edge-{u}-{v}-{key}"/>')

    svg = [
        '<?xml version="1.0" encoding="utf-8"?>',
        (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width_px}" '
         f'height="{height_px:.3f}" viewBox="0 0 {span_x:.3f} {span_y:.3f}">'),
        f'<rect x="0" y="0" width="{span_x:.3f}" height="{span_y:.3f}" fill="#111111"/>',
        (f'<g stroke="#f5f5f5" stroke-width="{stroke_m:.3f}" fill="none" '
         'stroke-linecap="round">'),
    ]
    svg.extend(paths)
    svg.append('</g>')
    svg.append('</svg>')
    return "\n".join(svg) + "\n"
