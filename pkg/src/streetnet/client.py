"""Clients for the external services: Overpass, Nominatim, and elevation.

Every request flows through a Transport (swappable for tests), a response
cache keyed by the sha256 of the canonical request text, and a per-host
rate limiter. Mode selects live, cache-first, or fixture-only operation;
fixture-only never touches the transport, which makes the whole test
suite runnable with a transport that fails on use.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from urllib.parse import urlencode, urlsplit

import requests

from .errors import (
    FixtureMissing,
    InvalidPolygon,
    NetworkDisabled,
    NoResult,
    PartialFailure,
    ProviderAuth,
    RateLimited,
    ServerBusy,
    TransportError,
)
from .geometry import bbox_to_polygon, polygon_area_km2
from .osmdata import NetworkType, OsmElement, overpass_filter_clauses, parse_overpass

DEFAULT_OVERPASS_URL = "https://overpass-api.de/api/interpreter"
DEFAULT_NOMINATIM_URL = "https://nominatim.openstreetmap.org"
DEFAULT_TIMEOUT_S = 180.0
DEFAULT_MAX_TILE_KM2 = 50.0
DEFAULT_MAX_RETRIES = 4
RATE_LIMIT_S = 1.0
USER_AGENT = "streetnet/0.1 (street network research toolkit)"


@dataclass
class TransportResponse:
    status: int
    content: bytes
    headers: dict[str, str] = field(default_factory=dict)


class HttpTransport:
    """requests-backed transport; one shared session."""

    def __init__(self):
        self._session = requests.Session()
        self._session.headers["User-Agent"] = USER_AGENT

    def request(self, method: str, url: str, params=None, data=None,
                timeout: float = DEFAULT_TIMEOUT_S) -> TransportResponse:
        try:
            resp = self._session.request(
                method, url, params=params, data=data, timeout=timeout)
        except requests.RequestException as exc:
            raise TransportError(f"{method} {url} failed: {exc}") from exc
        return TransportResponse(
            status=resp.status_code,
            content=resp.content,
            headers={k.lower(): v for k, v in resp.headers.items()},
        )


class DisabledTransport:
    """Fails on any use; guards offline test runs."""

    def request(self, method, url, params=None, data=None, timeout=None):
        raise NetworkDisabled(f"network access disabled (attempted {method} {url})")


class RateLimiter:
    """Serializes requests per host with a minimum interval between them.

    Clock and sleep are injectable so tests run instantly.
    """

    def __init__(self, min_interval: float = RATE_LIMIT_S,
                 clock=time.monotonic, sleep=time.sleep):
        self.min_interval = min_interval
        self._clock = clock
        self._sleep = sleep
        self._last: dict[str, float] = {}

    def wait(self, host: str) -> None:
        now = self._clock()
        last = self._last.get(host)
        if last is not None:
            remaining = self.min_interval - (now - last)
            if remaining > 0:
                self._sleep(remaining)
        self._last[host] = self._clock()


class ResponseCache:
    """Raw response bytes on disk plus a metadata sidecar per entry."""

    def __init__(self, cache_dir: str | Path):
        self.root = Path(cache_dir)
        self.root.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def key_for(canonical: str) -> str:
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def _paths(self, key: str) -> tuple[Path, Path]:
        return self.root / f"{key}.bin", self.root / f"{key}.meta.json"

    def get(self, key: str) -> bytes | None:
        body, _meta = self._paths(key)
        if body.exists():
            return body.read_bytes()
        return None

    def put(self, key: str, content: bytes, canonical: str) -> None:
        body, meta = self._paths(key)
        tmp = body.with_suffix(".tmp")
        tmp.write_bytes(content)
        tmp.replace(body)  # atomic: readers never see partial writes
        meta_tmp = meta.with_suffix(".tmp")
        meta_tmp.write_text(json.dumps({
            "request": canonical,
            "fetched_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        }, indent=2))
        meta_tmp.replace(meta)


class ClientMode(Enum):
    LIVE = "live"
    CACHE_FIRST = "cache_first"
    FIXTURE_ONLY = "fixture_only"


def canonical_request(url: str, params: dict | None = None,
                      data: str | None = None) -> str:
    """Stable text form of a request; its sha256 is the cache key."""
    parts = [url]
    if params:
        parts.append(urlencode(sorted(params.items())))
    if data:
        parts.append(data)
    return "\n".join(parts)


class ApiClient:
    """Shared request plumbing: cache, rate limit, retry with backoff."""

    def __init__(self, endpoint: str, transport, cache: ResponseCache | None,
                 mode: ClientMode = ClientMode.CACHE_FIRST,
                 rate_limiter: RateLimiter | None = None,
                 max_retries: int = DEFAULT_MAX_RETRIES,
                 timeout: float = DEFAULT_TIMEOUT_S,
                 sleep=time.sleep):
        self.endpoint = endpoint
        self.transport = transport
        self.cache = cache
        self.mode = mode
        self.rate_limiter = rate_limiter or RateLimiter()
        self.max_retries = max_retries
        self.timeout = timeout
        self._sleep = sleep

    def request_bytes(self, url: str, params: dict | None = None,
                      data: str | None = None, method: str = "GET") -> bytes:
        canonical = canonical_request(url, params, data)
        key = ResponseCache.key_for(canonical)
        if self.cache is not None and self.mode is not ClientMode.LIVE:
            hit = self.cache.get(key)
            if hit is not None:
                return hit
        if self.mode is ClientMode.FIXTURE_ONLY:
            raise FixtureMissing(
                f"no fixture for request {key[:12]}... ({url})")

        host = urlsplit(url).netloc
        delay = 1.0
        for attempt in range(self.max_retries + 1):
            self.rate_limiter.wait(host)
            resp = self.transport.request(
                method, url, params=params, data=data, timeout=self.timeout)
            if resp.status == 200:
                if self.cache is not None:
                    self.cache.put(key, resp.content, canonical)
                return resp.content
            if resp.status in (429, 504) or resp.status == 503:
                if attempt == self.max_retries:
                    if resp.status == 429:
                        raise RateLimited("rate limited and retries exhausted")
                    raise ServerBusy(f"server busy (HTTP {resp.status}), "
                                     "retries exhausted")
                retry_after = resp.headers.get("retry-after")
                pause = float(retry_after) if retry_after else delay
                self._sleep(pause)
                delay *= 2.0
                continue
            if resp.status in (401, 403):
                raise ProviderAuth(f"HTTP {resp.status} from {host}")
            raise TransportError(f"HTTP {resp.status} from {host}")
        raise TransportError("unreachable")  # loop always returns or raises


# --- Nominatim --------------------------------------------------------------------


@dataclass
class PlaceBoundary:
    display_name: str
    geometry: dict | None  # GeoJSON Polygon/MultiPolygon in lon/lat
    centroid: tuple[float, float]  # (lon, lat)
    bbox: tuple[float, float, float, float]  # (south, west, north, east)
    point_only: bool = False


def nominatim_search_params(name: str) -> dict[str, str]:
    return {
        "q": name,
        "format": "jsonv2",
        "polygon_geojson": "1",
        "limit": "5",
    }


class NominatimClient(ApiClient):
    def __init__(self, transport, cache=None, endpoint=DEFAULT_NOMINATIM_URL,
                 **kwargs):
        super().__init__(endpoint, transport, cache, **kwargs)

    def geocode_place(self, name: str) -> PlaceBoundary:
        """Top-ranked polygon result for a place name; point results are
        flagged point_only with empty geometry."""
        if not name or not name.strip():
            raise NoResult("empty geocoding query")
        params = nominatim_search_params(name)
        payload = self.request_bytes(f"{self.endpoint}/search", params=params)
        try:
            results = json.loads(payload)
        except ValueError as exc:
            raise TransportError(f"bad geocoder payload: {exc}") from exc
        if not results:
            raise NoResult(f"no geocoding result for {name!r}")
        polygonal = [r for r in results
                     if r.get("geojson", {}).get("type")
                     in ("Polygon", "MultiPolygon")]
        chosen = polygonal[0] if polygonal else results[0]
        south, north, west, east = (float(x) for x in chosen["boundingbox"])
        centroid = (float(chosen["lon"]), float(chosen["lat"]))
        geometry = chosen.get("geojson")
        point_only = geometry is None or geometry.get("type") not in (
            "Polygon", "MultiPolygon")
        return PlaceBoundary(
            display_name=chosen.get("display_name", name),
            geometry=None if point_only else geometry,
            centroid=centroid,
            bbox=(south, west, north, east),
            point_only=point_only,
        )


# --- Overpass ---------------------------------------------------------------------


@dataclass
class OverpassResponse:
    elements: list[OsmElement]
    fetched_at: str
    query_hash: str


def _region_bbox(region) -> tuple[float, float, float, float]:
    if isinstance(region, dict):
        xs, ys = [], []
        gtype = region.get("type")
        polys = [region["coordinates"]] if gtype == "Polygon" \
            else region["coordinates"]
        for poly in polys:
            for ring in poly:
                for x, y in ring:
                    xs.append(x)
                    ys.append(y)
        return (min(ys), min(xs), max(ys), max(xs))
    return tuple(region)


def _poly_clause(region: dict) -> str:
    # Overpass poly filter wants "lat lon lat lon ..." of the outer ring
    gtype = region.get("type")
    poly = region["coordinates"] if gtype == "Polygon" \
        else region["coordinates"][0]
    ring = poly[0]
    pts = ring[:-1] if ring[0] == ring[-1] else ring
    body = " ".join(f"{lat:.7f} {lon:.7f}" for lon, lat in pts)
    return f'(poly:"{body}")'


def build_streets_query(region, network_type: NetworkType,
                        timeout_s: int = int(DEFAULT_TIMEOUT_S)) -> str:
    """The pinned Overpass QL template for one street-network request."""
    filters = overpass_filter_clauses(network_type)
    if isinstance(region, dict):
        area = _poly_clause(region)
    else:
        south, west, north, east = region
        area = f"({south:.7f},{west:.7f},{north:.7f},{east:.7f})"
    return (
        f"[out:json][timeout:{timeout_s}];\n"
        f"(\n  way[\"highway\"]{filters}{area};\n);\n"
        "(._;>;);\nout body;\n"
    )


def build_footprints_query(region, timeout_s: int = int(DEFAULT_TIMEOUT_S)) -> str:
    if isinstance(region, dict):
        area = _poly_clause(region)
    else:
        south, west, north, east = region
        area = f"({south:.7f},{west:.7f},{north:.7f},{east:.7f})"
    return (
        f"[out:json][timeout:{timeout_s}];\n"
        f"(\n  way[\"building\"]{area};\n);\n"
        "(._;>;);\nout body;\n"
    )


def _split_bbox(bbox, max_tile_km2: float):
    """Grid of sub-bboxes each at most max_tile_km2."""
    south, west, north, east = bbox
    area = polygon_area_km2(bbox_to_polygon(south, west, north, east))
    if area <= max_tile_km2:
        return [bbox]
    import math
    tiles_per_side = math.ceil(math.sqrt(area / max_tile_km2))
    lat_step = (north - south) / tiles_per_side
    lon_step = (east - west) / tiles_per_side
    tiles = []
    for i in range(tiles_per_side):
        for j in range(tiles_per_side):
            tiles.append((
                south + i * lat_step, west + j * lon_step,
                south + (i + 1) * lat_step, west + (j + 1) * lon_step,
            ))
    return tiles


class OverpassClient(ApiClient):
    def __init__(self, transport, cache=None, endpoint=DEFAULT_OVERPASS_URL,
                 max_tile_km2: float = DEFAULT_MAX_TILE_KM2, **kwargs):
        super().__init__(endpoint, transport, cache, **kwargs)
        self.max_tile_km2 = max_tile_km2

    def _run_query(self, query: str) -> list[OsmElement]:
        payload = self.request_bytes(self.endpoint, data=query, method="POST")
        return parse_overpass(payload, "json").elements

    def fetch_streets(self, region, network_type: NetworkType) -> OverpassResponse:
        """All tag-filtered ways intersecting the region plus their nodes.

        Regions larger than the tile cap are split into a bbox grid and the
        responses merged, deduplicating elements by id.
        """
        self._check_region(region)
        if isinstance(region, dict):
            queries = [build_streets_query(region, network_type,
                                           int(self.timeout))]
        else:
            tiles = _split_bbox(tuple(region), self.max_tile_km2)
            queries = [build_streets_query(t, network_type, int(self.timeout))
                       for t in tiles]
        merged: dict[tuple[str, int], OsmElement] = {}
        for query in queries:
            for el in self._run_query(query):
                merged.setdefault((el.kind, el.id), el)
        elements = list(merged.values())
        combined = "\n---\n".join(queries)
        return OverpassResponse(
            elements=elements,
            fetched_at=time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            query_hash=ResponseCache.key_for(combined),
        )

    @staticmethod
    def _check_region(region) -> None:
        south, west, north, east = _region_bbox(region)
        if north <= south or east <= west:
            raise InvalidPolygon("region has zero area")

    def fetch_footprints(self, region) -> tuple[dict, int]:
        """Building polygons as a GeoJSON FeatureCollection.

        Only closed ways become features; unclosed building ways are
        skipped and counted in the returned warnings tally.
        """
        self._check_region(region)
        query = build_footprints_query(region, int(self.timeout))
        elements = self._run_query(query)
        nodes = {e.id: e for e in elements if e.kind == "node"}
        features = []
        warnings = 0
        for way in (e for e in elements if e.kind == "way"):
            if "building" not in way.tags:
                continue
            if len(way.node_refs) < 4 or way.node_refs[0] != way.node_refs[-1]:
                warnings += 1
                continue
            try:
                ring = [[nodes[r].lon, nodes[r].lat] for r in way.node_refs]
            except KeyError:
                warnings += 1
                continue
            features.append({
                "type": "Feature",
                "geometry": {"type": "Polygon", "coordinates": [ring]},
                "properties": {"id": way.id, **way.tags},
            })
        features.sort(key=lambda f: f["properties"]["id"])
        return {"type": "FeatureCollection", "features": features}, warnings


# --- elevation --------------------------------------------------------------------


@dataclass(frozen=True)
class ElevationRecord:
    node_id: int
    elevation: float


class HttpElevationProvider(ApiClient):
    """POSTs {"locations": [{latitude, longitude}...]} batches and reads
    {"results": [{elevation}...]}, the common open-elevation wire shape."""

    batch_limit = 512

    def __init__(self, endpoint: str, transport, cache=None, **kwargs):
        super().__init__(endpoint, transport, cache, **kwargs)

    def fetch_batch(self, coords: list[tuple[float, float]]) -> list[float | None]:
        body = json.dumps({
            "locations": [
                {"latitude": lat, "longitude": lon} for lon, lat in coords
            ]
        }, sort_keys=True)
        payload = self.request_bytes(self.endpoint, data=body, method="POST")
        try:
            results = json.loads(payload)["results"]
        except (ValueError, KeyError) as exc:
            raise TransportError(f"bad elevation payload: {exc}") from exc
        out: list[float | None] = []
        for item in results:
            value = item.get("elevation")
            if value is None or not isinstance(value, (int, float)) \
                    or value != value:  # NaN check
                out.append(None)
            else:
                out.append(float(value))
        return out


class StaticElevationProvider:
    """Deterministic in-process provider: elevation = fn(lon, lat)."""

    batch_limit = 512

    def __init__(self, fn):
        self._fn = fn

    def fetch_batch(self, coords: list[tuple[float, float]]) -> list[float | None]:
        return [self._fn(lon, lat) for lon, lat in coords]


def fetch_elevations(nodes: list[tuple[int, float, float]],
                     provider) -> list[ElevationRecord]:
    """One ElevationRecord per (id, lon, lat), order-preserving and batched.

    Raises PartialFailure naming every node the provider could not resolve.
    """
    if not nodes:
        raise NoResult("no nodes to look up")
    limit = getattr(provider, "batch_limit", 512)
    values: list[float | None] = []
    for start in range(0, len(nodes), limit):
        batch = nodes[start:start + limit]
        values.extend(provider.fetch_batch([(lon, lat) for _id, lon, lat in batch]))
    missing = [node_id for (node_id, _lon, _lat), v in zip(nodes, values)
               if v is None]
    if missing:
        raise PartialFailure(
            f"no elevation for {len(missing)} node(s)", missing_ids=missing)
    return [ElevationRecord(node_id=node_id, elevation=v)
            for (node_id, _lon, _lat), v in zip(nodes, values)]
