"""Command-line front end: fetch, stats, route, export, boundary, footprints.

Machine-readable JSON goes to stdout; human summaries and warnings go to
stderr. Exit codes: 0 ok, 1 io/parse, 2 usage, 3 geocoding, 4 transport,
5 empty result, 6 not strongly connected, 7 no path.
"""

from __future__ import annotations

import argparse
import json
import sys

from .client import (
    ClientMode,
    DisabledTransport,
    HttpTransport,
    NominatimClient,
    OverpassClient,
    RateLimiter,
    ResponseCache,
)
from .config import Config, load_config
from .errors import (
    EmptyGraph,
    EmptyResult,
    FileParseError,
    FixtureMissing,
    InvalidPolygon,
    IoError,
    MalformedPayload,
    NetworkDisabled,
    NoPath,
    NoResult,
    NotStronglyConnected,
    RateLimited,
    SchemaViolation,
    ServerBusy,
    StreetNetError,
    TransportError,
    UnknownNode,
)
from .geometry import UtmZone, lonlat_to_utm, polygon_area_km2, project_graph
from .measures import AreaSpec, basic_stats, extended_stats
from .osmdata import NetworkType
from .pipeline import (
    network_from_address,
    network_from_bbox,
    network_from_place,
    network_from_point,
    network_from_polygon,
)
from .routing import nearest_node, shortest_path
from .serialize import export_geojson, load_graphml, render_svg, save_graphml
from .simplify import SimplifyMode

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_GEOCODING = 3
EXIT_TRANSPORT = 4
EXIT_EMPTY = 5
EXIT_NOT_STRONGLY_CONNECTED = 6
EXIT_NO_PATH = 7


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="streetnet",
        description="Street network acquisition, simplification, and analysis.",
    )
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--cache-dir", help="response cache directory")
    parser.add_argument("--client-mode",
                        choices=["live", "cache_first", "fixture_only"],
                        help="network mode (default cache_first)")
    parser.add_argument("--overpass-url", help="Overpass endpoint")
    parser.add_argument("--nominatim-url", help="Nominatim endpoint")
    sub = parser.add_subparsers(dest="command", required=True)

    fetch = sub.add_parser("fetch", help="download and build a street network")
    where = fetch.add_mutually_exclusive_group(required=True)
    where.add_argument("--place", help="geocodable place name")
    where.add_argument("--bbox", help="south,west,north,east degrees")
    where.add_argument("--point", help="lon,lat (requires --dist)")
    where.add_argument("--address", help="geocodable address (requires --dist)")
    where.add_argument("--polygon-file", help="GeoJSON polygon file")
    fetch.add_argument("--dist", type=float,
                       help="meters in each cardinal direction")
    fetch.add_argument("--network-type", default=None,
                       choices=[t.value for t in NetworkType])
    fetch.add_argument("--buffer", type=float, default=None,
                       help="fetch buffer in meters (default 500)")
    fetch.add_argument("--no-simplify", action="store_true")
    fetch.add_argument("--mode", choices=["strict", "non-strict"],
                       default=None, help="simplification mode")
    fetch.add_argument("--out", required=True, help="output GraphML path")

    stats = sub.add_parser("stats", help="compute network statistics")
    stats.add_argument("--in", dest="input", required=True, help="GraphML file")
    stats.add_argument("--area", type=float,
                       help="area in km^2 (default: boundary polygon area)")
    stats.add_argument("--extended", action="store_true",
                       help="add centrality/connectivity/eccentricity fields")
    stats.add_argument("--largest-scc", action="store_true",
                       help="compute eccentricity on the largest strongly "
                            "connected component when needed")

    route = sub.add_parser("route", help="shortest path between two points")
    route.add_argument("--in", dest="input", required=True)
    route.add_argument("--from", dest="origin", required=True, help="lon,lat")
    route.add_argument("--to", dest="dest", required=True, help="lon,lat")
    route.add_argument("--weight", default="length")

    export = sub.add_parser("export", help="write GeoJSON layers or SVG")
    export.add_argument("--in", dest="input", required=True)
    export.add_argument("--format", required=True, choices=["geojson", "svg"])
    export.add_argument("--out", required=True,
                        help="svg: file path; geojson: base path "
                             "(writes <base>_nodes/_edges.geojson)")
    export.add_argument("--square-mile", help="lon,lat center of a one-square-"
                                              "mile crop (svg only)")

    boundary = sub.add_parser("boundary", help="geocode place boundaries")
    boundary.add_argument("--place", action="append", required=True,
                          help="repeatable")
    boundary.add_argument("--out", required=True, help="output GeoJSON path")

    foot = sub.add_parser("footprints", help="download building footprints")
    foot.add_argument("--place", required=True)
    foot.add_argument("--out", required=True, help="output GeoJSON path")
    return parser


def _make_clients(cfg: Config):
    if cfg.mode == "fixture_only":
        transport = DisabledTransport()
    else:
        transport = HttpTransport()
    cache = ResponseCache(cfg.cache_dir)
    mode = ClientMode(cfg.mode)
    limiter = RateLimiter(min_interval=cfg.rate_limit_s)
    overpass = OverpassClient(
        transport, cache, endpoint=cfg.overpass_url, mode=mode,
        rate_limiter=limiter, max_retries=cfg.max_retries,
        timeout=cfg.timeout_s, max_tile_km2=cfg.max_tile_km2)
    nominatim = NominatimClient(
        transport, cache, endpoint=cfg.nominatim_url, mode=mode,
        rate_limiter=limiter, max_retries=cfg.max_retries)
    return overpass, nominatim


def _parse_lonlat(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected lon,lat — got {text!r}")
    return float(parts[0]), float(parts[1])


def _cmd_fetch(args, cfg: Config) -> int:
    overpass, nominatim = _make_clients(cfg)
    options = {
        "network_type": NetworkType(args.network_type
                                    or cfg.default_network_type),
        "buffer_m": cfg.default_buffer_m if args.buffer is None else args.buffer,
        "simplify": not args.no_simplify,
        "simplify_mode": SimplifyMode((args.mode or cfg.simplify_mode)),
    }
    if (args.point or args.address) and args.dist is None:
        print("--point/--address require --dist", file=sys.stderr)
        return EXIT_USAGE
    if args.place:
        g = network_from_place(args.place, overpass, nominatim, **options)
    elif args.bbox:
        south, west, north, east = (float(x) for x in args.bbox.split(","))
        g = network_from_bbox((south, west, north, east), overpass, **options)
    elif args.point:
        g = network_from_point(_parse_lonlat(args.point), args.dist,
                               overpass, **options)
    elif args.address:
        g = network_from_address(args.address, args.dist, overpass,
                                 nominatim, **options)
    else:
        polygon = json.loads(open(args.polygon_file).read())
        if polygon.get("type") == "Feature":
            polygon = polygon["geometry"]
        g = network_from_polygon(polygon, overpass, **options)
    save_graphml(g, args.out)
    print(f"{g.n} nodes, {g.m} edges ({g.network_type})", file=sys.stderr)
    print(json.dumps({"n": g.n, "m": g.m, "network_type": g.network_type,
                      "out": args.out}))
    return EXIT_OK


def _cmd_stats(args, cfg: Config) -> int:
    g = load_graphml(args.input)
    area = None
    if args.area is not None:
        area = AreaSpec(area_km2=args.area, source="user-supplied")
    elif g.boundary is not None:
        area = AreaSpec(area_km2=polygon_area_km2(g.boundary), source="polygon")
    if args.extended:
        scc_mode = "largest" if args.largest_scc else "raise"
        stats = extended_stats(g, area, scc_mode=scc_mode)
    else:
        stats = basic_stats(g, area)
    print(json.dumps(stats.to_dict(), indent=2))
    return EXIT_OK


def _cmd_route(args, cfg: Config) -> int:
    g = load_graphml(args.input)
    source = nearest_node(g, _parse_lonlat(args.origin))
    target = nearest_node(g, _parse_lonlat(args.dest))
    route = shortest_path(g, source, target, weight=args.weight)
    print(json.dumps(route.to_json(), indent=2))
    return EXIT_OK


def _cmd_export(args, cfg: Config) -> int:
    g = load_graphml(args.input)
    if args.format == "geojson":
        nodes_path = f"{args.out}_nodes.geojson"
        edges_path = f"{args.out}_edges.geojson"
        export_geojson(g, nodes_path, edges_path)
        print(json.dumps({"nodes": nodes_path, "edges": edges_path}))
        return EXIT_OK
    if g.crs == "wgs84":
        g = project_graph(g)
    center = None
    if args.square_mile:
        # crop center arrives in lon/lat; project it into graph units
        # using the zone recorded in the graph crs ("utm:10N")
        lon, lat = _parse_lonlat(args.square_mile)
        zone_label = g.crs.split(":", 1)[1]
        zone = UtmZone(int(zone_label[:-1]),
                       "north" if zone_label[-1] == "N" else "south")
        center = lonlat_to_utm(lon, lat, zone)
    svg = render_svg(g, square_mile_center=center)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    print(json.dumps({"out": args.out}))
    return EXIT_OK


def _cmd_boundary(args, cfg: Config) -> int:
    _overpass, nominatim = _make_clients(cfg)
    features = []
    for place in args.place:
        boundary = nominatim.geocode_place(place)
        if boundary.geometry is None:
            raise NoResult(f"no polygon boundary for {place!r}")
        features.append({
            "type": "Feature",
            "geometry": boundary.geometry,
            "properties": {"display_name": boundary.display_name,
                           "query": place},
        })
    collection = {"type": "FeatureCollection", "features": features}
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(collection, fh, indent=2)
        fh.write("\n")
    print(json.dumps({"out": args.out, "count": len(features)}))
    return EXIT_OK


def _cmd_footprints(args, cfg: Config) -> int:
    overpass, nominatim = _make_clients(cfg)
    boundary = nominatim.geocode_place(args.place)
    region = boundary.geometry if boundary.geometry is not None else boundary.bbox
    collection, warnings = overpass.fetch_footprints(region)
    if warnings:
        print(f"skipped {warnings} malformed footprint way(s)", file=sys.stderr)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(collection, fh, indent=2)
        fh.write("\n")
    print(json.dumps({"out": args.out,
                      "count": len(collection["features"])}))
    return EXIT_OK


_COMMANDS = {
    "fetch": _cmd_fetch,
    "stats": _cmd_stats,
    "route": _cmd_route,
    "export": _cmd_export,
    "boundary": _cmd_boundary,
    "footprints": _cmd_footprints,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(
            config_file=args.config,
            overrides={
                "cache_dir": args.cache_dir,
                "mode": args.client_mode,
                "overpass_url": args.overpass_url,
                "nominatim_url": args.nominatim_url,
            },
        )
        return _COMMANDS[args.command](args, cfg)
    except NoResult as exc:
        print(f"geocoding failed: {exc}", file=sys.stderr)
        return EXIT_GEOCODING
    except (TransportError, NetworkDisabled, RateLimited, ServerBusy,
            FixtureMissing) as exc:
        print(f"transport failure: {exc}", file=sys.stderr)
        return EXIT_TRANSPORT
    except (EmptyResult, EmptyGraph) as exc:
        print(f"empty result: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except NotStronglyConnected as exc:
        print(f"{exc} (pass --largest-scc to analyze the largest component)",
              file=sys.stderr)
        return EXIT_NOT_STRONGLY_CONNECTED
    except NoPath as exc:
        print(f"no path: {exc}", file=sys.stderr)
        return EXIT_NO_PATH
    except (FileParseError, SchemaViolation, MalformedPayload, IoError,
            InvalidPolygon, UnknownNode, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except StreetNetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
