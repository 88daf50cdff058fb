"""Raw OSM element model, payload parsing, and network-type tag filters.

The tag filter sets and the one-way decode rules are the pinned,
versioned tables documented in docs/filters.md; the Overpass query
templates in :mod:`streetnet.client` embed the same sets.
"""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

from .errors import MalformedPayload, UnsupportedFormat


class NetworkType(Enum):
    """What counts as an edge when building a street network."""

    DRIVE = "drive"
    DRIVE_SERVICE = "drive_service"
    WALK = "walk"  # implies bidirectionalization at graph build time
    BIKE = "bike"
    ALL = "all"
    ALL_PRIVATE = "all_private"


@dataclass
class OsmElement:
    """A raw OSM node or way as parsed from an Overpass payload."""

    id: int
    kind: str  # "node" | "way"
    lon: Optional[float] = None
    lat: Optional[float] = None
    node_refs: list[int] = field(default_factory=list)
    tags: dict[str, str] = field(default_factory=dict)

    def lonlat(self) -> tuple[float, float]:
        return (self.lon, self.lat)


@dataclass
class ParseResult:
    elements: list[OsmElement]
    warnings: list[str] = field(default_factory=list)

    @property
    def warning_count(self) -> int:
        return len(self.warnings)


def _validate_node(id_, lon, lat):
    if id_ <= 0:
        return f"node {id_}: non-positive id"
    if not (-180.0 <= lon <= 180.0 and -90.0 <= lat <= 90.0):
        return f"node {id_}: coordinates ({lon}, {lat}) out of range"
    return None


def _validate_way(id_, refs):
    if id_ <= 0:
        return f"way {id_}: non-positive id"
    if len(refs) < 2:
        return f"way {id_}: fewer than 2 node refs"
    return None


def parse_overpass(payload: bytes, format: str = "json") -> ParseResult:
    """Parse an Overpass payload into OsmElement values.

    Relations and other unknown element kinds are skipped with a counted
    warning, as are elements violating basic invariants (ids must be
    positive, node coordinates in range, ways need at least 2 refs).
    Raises MalformedPayload with a byte offset for undecodable input.
    """
    if format == "json":
        return _parse_json(payload)
    if format == "xml":
        return _parse_xml(payload)
    raise UnsupportedFormat(f"format {format!r} not supported (json or xml)")


def _parse_json(payload: bytes) -> ParseResult:
    try:
        doc = json.loads(payload)
    except json.JSONDecodeError as exc:
        raise MalformedPayload(f"invalid JSON at byte {exc.pos}: {exc.msg}",
                               offset=exc.pos) from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("elements"), list):
        raise MalformedPayload("JSON document lacks an 'elements' array", offset=0)

    elements: list[OsmElement] = []
    warnings: list[str] = []
    for raw in doc["elements"]:
        kind = raw.get("type")
        if kind == "node":
            try:
                id_, lon, lat = int(raw["id"]), float(raw["lon"]), float(raw["lat"])
            except (KeyError, TypeError, ValueError):
                warnings.append(f"skipped node with missing fields: {raw.get('id')}")
                continue
            problem = _validate_node(id_, lon, lat)
            if problem:
                warnings.append(f"skipped {problem}")
                continue
            elements.append(OsmElement(id=id_, kind="node", lon=lon, lat=lat,
                                       tags=dict(raw.get("tags", {}))))
        elif kind == "way":
            try:
                id_ = int(raw["id"])
                refs = [int(r) for r in raw["nodes"]]
            except (KeyError, TypeError, ValueError):
                warnings.append(f"skipped way with missing fields: {raw.get('id')}")
                continue
            problem = _validate_way(id_, refs)
            if problem:
                warnings.append(f"skipped {problem}")
                continue
            elements.append(OsmElement(id=id_, kind="way", node_refs=refs,
                                       tags=dict(raw.get("tags", {}))))
        else:
            warnings.append(f"skipped element of kind {kind!r}")
    return ParseResult(elements, warnings)


def _byte_offset(payload: bytes, line: int, column: int) -> int:
    lines = payload.split(b"\n")
    return sum(len(l) + 1 for l in lines[: line - 1]) + column


def _parse_xml(payload: bytes) -> ParseResult:
    try:
        root = ET.fromstring(payload)
    except ET.ParseError as exc:
        line, column = exc.position
        offset = _byte_offset(payload, line, column)
        raise MalformedPayload(f"invalid XML at byte {offset}: {exc.msg}",
                               offset=offset) from exc

    elements: list[OsmElement] = []
    warnings: list[str] = []
    for child in root:
        if child.tag == "node":
            try:
                id_ = int(child.attrib["id"])
                lon = float(child.attrib["lon"])
                lat = float(child.attrib["lat"])
            except (KeyError, ValueError):
                warnings.append(f"skipped node with missing fields: {child.attrib.get('id')}")
                continue
            problem = _validate_node(id_, lon, lat)
            if problem:
                warnings.append(f"skipped {problem}")
                continue
            tags = {t.attrib["k"]: t.attrib["v"] for t in child.findall("tag")}
            elements.append(OsmElement(id=id_, kind="node", lon=lon, lat=lat, tags=tags))
        elif child.tag == "way":
            try:
                id_ = int(child.attrib["id"])
            except (KeyError, ValueError):
                warnings.append("skipped way with missing id")
                continue
            refs = [int(nd.attrib["ref"]) for nd in child.findall("nd")]
            problem = _validate_way(id_, refs)
            if problem:
                warnings.append(f"skipped {problem}")
                continue
            tags = {t.attrib["k"]: t.attrib["v"] for t in child.findall("tag")}
            elements.append(OsmElement(id=id_, kind="way", node_refs=refs, tags=tags))
        elif child.tag in ("note", "meta", "bounds"):
            continue
        else:
            warnings.append(f"skipped element of kind {child.tag!r}")
    return ParseResult(elements, warnings)


def elements_to_json(elements: list[OsmElement]) -> bytes:
    """Serialize elements back to Overpass JSON (inverse of parsing)."""
    out = []
    for e in elements:
        if e.kind == "node":
            raw = {"type": "node", "id": e.id, "lat": e.lat, "lon": e.lon}
        else:
            raw = {"type": "way", "id": e.id, "nodes": list(e.node_refs)}
        if e.tags:
            raw["tags"] = dict(e.tags)
        out.append(raw)
    return json.dumps({"version": 0.6, "elements": out}).encode()


# --- network type tag filters --------------------------------------------------
#
# Pinned accept/reject sets (see docs/filters.md). Every type requires a
# highway tag; every type except all_private additionally rejects private
# access.

DRIVE_REJECT_HIGHWAY = frozenset({
    "footway", "cycleway", "path", "steps", "pedestrian", "track",
    "service", "construction", "proposed",
})
DRIVE_SERVICE_REJECT_HIGHWAY = DRIVE_REJECT_HIGHWAY - {"service"}
WALK_REJECT_HIGHWAY = frozenset({"motorway", "motorway_link"})
BIKE_REJECT_HIGHWAY = frozenset({"motorway"})

PRIVATE_ACCESS_VALUES = frozenset({"private", "no"})


def is_private(tags: dict[str, str]) -> bool:
    """True iff the access tag denotes private or closed access."""
    return tags.get("access") in PRIVATE_ACCESS_VALUES


def tag_filter(network_type: NetworkType) -> Callable[[dict[str, str]], bool]:
    """Total predicate over way tags deciding edge membership for a type."""

    def accept(tags: dict[str, str]) -> bool:
        highway = tags.get("highway")
        if highway is None:
            return False
        if network_type is NetworkType.ALL_PRIVATE:
            return True
        if is_private(tags):
            return False
        if network_type is NetworkType.ALL:
            return True
        if network_type is NetworkType.DRIVE:
            return highway not in DRIVE_REJECT_HIGHWAY
        if network_type is NetworkType.DRIVE_SERVICE:
            return highway not in DRIVE_SERVICE_REJECT_HIGHWAY
        if network_type is NetworkType.WALK:
            return highway not in WALK_REJECT_HIGHWAY and tags.get("foot") != "no"
        if network_type is NetworkType.BIKE:
            return highway not in BIKE_REJECT_HIGHWAY and tags.get("bicycle") != "no"
        raise AssertionError(f"unhandled network type {network_type}")

    return accept


def overpass_filter_clauses(network_type: NetworkType) -> str:
    """Overpass QL clauses mirroring tag_filter, for the query templates.

    The way selector already requires a highway tag; these add the reject
    regexes. Value lists are sorted so query text (and thus cache keys)
    is stable.
    """
    def reject(tag: str, values) -> str:
        return f'["{tag}"!~"^({"|".join(sorted(values))})$"]'

    clauses = ""
    if network_type is NetworkType.DRIVE:
        clauses += reject("highway", DRIVE_REJECT_HIGHWAY)
    elif network_type is NetworkType.DRIVE_SERVICE:
        clauses += reject("highway", DRIVE_SERVICE_REJECT_HIGHWAY)
    elif network_type is NetworkType.WALK:
        clauses += reject("highway", WALK_REJECT_HIGHWAY)
        clauses += reject("foot", {"no"})
    elif network_type is NetworkType.BIKE:
        clauses += reject("highway", BIKE_REJECT_HIGHWAY)
        clauses += reject("bicycle", {"no"})
    if network_type is not NetworkType.ALL_PRIVATE:
        clauses += reject("access", PRIVATE_ACCESS_VALUES)
    return clauses


def oneway_direction(tags: dict[str, str]) -> str:
    """Decode the oneway tag: 'forward', 'reverse', or 'both'.

    yes/true/1 mean one-way along node-ref order; -1/reverse mean one-way
    against it; anything else (including absence) means bidirectional.
    """
    value = tags.get("oneway")
    if value in ("yes", "true", "1"):
        return "forward"
    if value in ("-1", "reverse"):
        return "reverse"
    return "both"
