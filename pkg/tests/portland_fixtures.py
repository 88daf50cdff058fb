"""Deterministic Portland street-network fixtures.

Three ~0.5 km^2 study sites with deliberately different street texture,
plus the geocoder and footprint payloads the CLI tests replay:

* downtown: 9x9 one-way alternating grid, 80 m spacing. Every node has
  four incident streets once the outward stubs are counted, so the
  streets-per-node average is exactly 4.0 and every edge is one-way.
* laurelhurst: 8x8 two-way grid, 100 m spacing, with 13 interior
  segments removed (disjoint endpoints) and a few collinear midpoint
  vertices that strict simplification must consolidate.
* nw_heights: a curvy two-way arterial crossing the site with a handful
  of branches and culs-de-sac; low intersection density, circuity > 1.

Each site is sized so the whole network sits inside the 500 m fetch
buffer and the grids/branches extend past the request bbox only via
stub ways, which truncation removes while their street counts persist.

Intended ordering (intersection density and avg streets/node alike):
downtown > laurelhurst > nw_heights.
"""

from __future__ import annotations

import json
import math

from streetnet.geometry import bbox_to_polygon

# mean-radius meters per degree of latitude; matches the package constant
M_PER_DEG = math.pi * 6371009 / 180.0

DOWNTOWN_CENTER = (-122.6784, 45.5152)
LAURELHURST_CENTER = (-122.6253, 45.5266)
NWHEIGHTS_CENTER = (-122.7837, 45.5450)

# (south, west, north, east); frozen 7-decimal literals so CLI --bbox
# strings round-trip to the identical floats
DOWNTOWN_BBOX = (45.5120524, -122.682892, 45.5183476, -122.673908)
LAURELHURST_BBOX = (45.5233624, -122.6299213, 45.5298376, -122.6206787)
NWHEIGHTS_BBOX = (45.5417624, -122.7883228, 45.5482376, -122.7790772)

PLACE_NAME = "Laurelhurst, Portland, Oregon"
ADDRESS = "1120 SW 5th Ave, Portland"
EMPTY_PLACE = "Atlantis, Cascadia"
POINT_ONLY_PLACE = "Pioneer Courthouse, Portland"

# the address geocodes to exactly this point; the --point CLI test uses
# the same coordinates so both share one Overpass fixture
ADDRESS_POINT = (-122.6784, 45.5152)
ADDRESS_DIST = 360.0

# a recorded site whose only way is a footway: a drive fetch parses fine
# but yields no usable ways, exercising the empty-result path offline
EMPTY_SITE_CENTER = (-122.7005, 45.5620)
EMPTY_SITE_BBOX = (45.5610011, -122.7020013, 45.5630009, -122.6990014)


def _ll(center, dx, dy):
    """Offset a (lon, lat) center by meters east/north, 7-decimal rounded."""
    clon, clat = center
    lat = clat + dy / M_PER_DEG
    lon = clon + dx / (M_PER_DEG * math.cos(math.radians(clat)))
    return round(lon, 7), round(lat, 7)


def _node(id_, center, dx, dy):
    lon, lat = _ll(center, dx, dy)
    return {"type": "node", "id": id_, "lat": lat, "lon": lon}


def _way(id_, refs, **tags):
    return {"type": "way", "id": id_, "nodes": list(refs), "tags": tags}


def _payload(elements):
    doc = {
        "version": 0.6,
        "generator": "Overpass API 0.7.62",
        "osm3s": {
            "timestamp_osm_base": "2026-01-15T00:00:00Z",
            "copyright": "The data included in this document is from "
                         "www.openstreetmap.org. The data is made available "
                         "under ODbL.",
        },
        "elements": elements,
    }
    return json.dumps(doc).encode("utf-8")


def _stub_dirs(i, j, n):
    """Outward unit directions for a periphery grid node (corners get two)."""
    dirs = []
    if j == 0:
        dirs.append((-1, 0))
    if j == n - 1:
        dirs.append((1, 0))
    if i == 0:
        dirs.append((0, -1))
    if i == n - 1:
        dirs.append((0, 1))
    return dirs


# --- downtown: one-way alternating grid --------------------------------------------

_DT_N = 9
_DT_STEP = 80.0
_DT_ROWS = ["Ankeny", "Ash", "Pine", "Oak", "Stark",
            "Washington", "Alder", "Morrison", "Yamhill"]
_DT_COLS = ["1st", "2nd", "3rd", "4th", "5th", "6th", "7th", "8th", "9th"]


def _dt_id(i, j):
    return 10000 + 100 * i + j


def _dt_xy(i, j):
    return (-320.0 + _DT_STEP * j, -320.0 + _DT_STEP * i)


def downtown_payload() -> bytes:
    elements = []
    for i in range(_DT_N):
        for j in range(_DT_N):
            elements.append(_node(_dt_id(i, j), DOWNTOWN_CENTER, *_dt_xy(i, j)))

    # a relation in the middle of the stream; parsers must skip it
    elements.append({
        "type": "relation", "id": 9999,
        "members": [{"type": "way", "ref": 1000, "role": ""}],
        "tags": {"type": "route", "route": "bus", "ref": "20"},
    })

    for i in range(_DT_N):
        tags = {"highway": "tertiary" if i == 4 else "residential",
                "name": f"SW {_DT_ROWS[i]} St",
                "oneway": "yes" if i % 2 == 0 else "-1"}
        elements.append(_way(1000 + i, [_dt_id(i, j) for j in range(_DT_N)],
                             **tags))
    for j in range(_DT_N):
        tags = {"highway": "residential", "name": f"SW {_DT_COLS[j]} Ave",
                "oneway": "yes" if j % 2 == 0 else "-1"}
        elements.append(_way(1100 + j, [_dt_id(i, j) for i in range(_DT_N)],
                             **tags))

    # one-way stubs leaving the grid; far enough out to be truncated away
    k = 0
    for i in range(_DT_N):
        for j in range(_DT_N):
            for dx, dy in _stub_dirs(i, j, _DT_N):
                x, y = _dt_xy(i, j)
                tip = 20000 + k
                elements.append(_node(tip, DOWNTOWN_CENTER,
                                      x + dx * _DT_STEP, y + dy * _DT_STEP))
                elements.append(_way(1200 + k, [_dt_id(i, j), tip],
                                     highway="residential", oneway="yes"))
                k += 1

    # a footway through the middle; the drive filter must drop it client-side
    elements.append(_node(29000, DOWNTOWN_CENTER, -310.0, 0.0))
    elements.append(_node(29001, DOWNTOWN_CENTER, -310.0, 80.0))
    elements.append(_way(1999, [29000, 29001], highway="footway"))
    return _payload(elements)


# --- laurelhurst: two-way grid with gaps and interstitials --------------------------

_LH_N = 8
_LH_STEP = 100.0
_LH_ROWS = ["Oak", "Pine", "Ash", "Ankeny", "Burnside", "Couch", "Davis",
            "Everett"]
# (i, j) meaning segment (i,j)-(i,j+1); endpoints all interior and disjoint
_LH_GAPS_H = [(1, 1), (1, 4), (2, 2), (2, 5), (3, 1),
              (4, 4), (5, 2), (5, 5), (6, 1), (6, 3)]
# (i, j) meaning segment (i,j)-(i+1,j)
_LH_GAPS_V = [(3, 6), (4, 1), (2, 4)]


def _lh_id(i, j):
    return 30000 + 100 * i + j


def _lh_xy(i, j):
    return (-350.0 + _LH_STEP * j, -350.0 + _LH_STEP * i)


def _runs(count, removed):
    """Contiguous index runs [start, end] of intact unit segments."""
    runs, start = [], None
    for s in range(count):
        if s in removed:
            if start is not None:
                runs.append((start, s))
                start = None
        elif start is None:
            start = s
    if start is not None:
        runs.append((start, count))
    return runs


def laurelhurst_payload() -> bytes:
    elements = []
    for i in range(_LH_N):
        for j in range(_LH_N):
            elements.append(_node(_lh_id(i, j), LAURELHURST_CENTER,
                                  *_lh_xy(i, j)))
    # collinear midpoints: two inside row 0, one splitting column 0 in two
    elements.append(_node(35000, LAURELHURST_CENTER, -100.0, -350.0))
    elements.append(_node(35001, LAURELHURST_CENTER, 0.0, -350.0))
    elements.append(_node(35002, LAURELHURST_CENTER, -350.0, 0.0))

    row_mids = {(0, 2): 35000, (0, 3): 35001}  # (i, j): node after (i, j)
    for i in range(_LH_N):
        gaps = {j for r, j in _LH_GAPS_H if r == i}
        for part, (a, b) in enumerate(_runs(_LH_N - 1, gaps)):
            refs = []
            for j in range(a, b + 1):
                refs.append(_lh_id(i, j))
                if (i, j) in row_mids and j < b:
                    refs.append(row_mids[(i, j)])
            elements.append(_way(3000 + 20 * i + part, refs,
                                 highway="residential",
                                 name=f"NE {_LH_ROWS[i]} St"))
    for j in range(_LH_N):
        gaps = {i for i, c in _LH_GAPS_V if c == j}
        name = f"NE {28 + j}th Ave"
        if j == 0:
            # split at the midpoint: distinct osmids on either side, so
            # non-strict simplification must keep node 35002
            elements.append(_way(3500, [_lh_id(i, 0) for i in range(4)]
                                 + [35002], highway="residential", name=name))
            elements.append(_way(3501, [35002] + [_lh_id(i, 0)
                                                  for i in range(4, _LH_N)],
                                 highway="residential", name=name))
            continue
        for part, (a, b) in enumerate(_runs(_LH_N - 1, gaps)):
            elements.append(_way(3520 + 20 * j + part,
                                 [_lh_id(i, j) for i in range(a, b + 1)],
                                 highway="residential", name=name))

    k = 0
    for i in range(_LH_N):
        for j in range(_LH_N):
            for dx, dy in _stub_dirs(i, j, _LH_N):
                x, y = _lh_xy(i, j)
                tip = 40000 + k
                elements.append(_node(tip, LAURELHURST_CENTER,
                                      x + dx * _LH_STEP, y + dy * _LH_STEP))
                elements.append(_way(4000 + k, [_lh_id(i, j), tip],
                                     highway="residential"))
                k += 1
    return _payload(elements)


# --- nw heights: curvy arterial with branches ---------------------------------------

# named junction and terminal nodes as (id, dx, dy); A0/A6 sit outside the
# request bbox so truncation trims the arterial ends
_NWH_NODES = {
    "A0": (50000, -500.0, -150.0),
    "A1": (50001, -280.0, -80.0),
    "A2": (50002, -140.0, -20.0),
    "A3": (50003, 0.0, 40.0),
    "A4": (50004, 140.0, 90.0),
    "A5": (50005, 280.0, 130.0),
    "A6": (50006, 500.0, 200.0),
    "B2": (50010, -250.0, -320.0),
    "C2": (50020, -140.0, 160.0),
    "C3": (50021, -200.0, 300.0),
    "E2": (50030, 140.0, 250.0),
    "E3": (50031, 200.0, 330.0),
    "G2": (50040, 140.0, -60.0),
    "F2": (50050, 60.0, -180.0),
}


def _curvy(a, b, amp):
    """Two vertices at 1/3 and 2/3 of a->b, offset perpendicular by +/-amp."""
    (ax, ay), (bx, by) = a, b
    vx, vy = bx - ax, by - ay
    norm = math.hypot(vx, vy)
    px, py = -vy / norm, vx / norm
    one = (ax + vx / 3 + amp * px, ay + vy / 3 + amp * py)
    two = (ax + 2 * vx / 3 - amp * px, ay + 2 * vy / 3 - amp * py)
    return [one, two]


def nwheights_payload() -> bytes:
    elements = []
    coords = {}
    for name, (id_, dx, dy) in _NWH_NODES.items():
        coords[name] = (dx, dy)
        elements.append(_node(id_, NWHEIGHTS_CENTER, dx, dy))

    vertex_id = [55000]

    def chain(names, amp):
        """Node-ref list threading curvy vertices between the named stops."""
        refs = [_NWH_NODES[names[0]][0]]
        for a, b in zip(names, names[1:]):
            for x, y in _curvy(coords[a], coords[b], amp):
                vid = vertex_id[0]
                vertex_id[0] += 1
                elements.append(_node(vid, NWHEIGHTS_CENTER, x, y))
                refs.append(vid)
            refs.append(_NWH_NODES[b][0])
        return refs

    ways = [
        (5000, ["A0", "A1", "A2", "A3", "A4", "A5", "A6"], 40.0,
         {"highway": "tertiary", "name": "NW Ridgeline Rd"}),
        (5010, ["A1", "B2"], 25.0,
         {"highway": "residential", "name": "NW Bluff Ct"}),
        (5020, ["A2", "C2"], 25.0,
         {"highway": "residential", "name": "NW Cornell Spur"}),
        (5021, ["C2", "C3"], 25.0,
         {"highway": "residential", "name": "NW Cornell Spur"}),
        (5030, ["C2", "E2"], 25.0,
         {"highway": "residential", "name": "NW Loop Ln"}),
        (5040, ["A4", "E2"], 25.0,
         {"highway": "residential", "name": "NW Ridgeview Dr"}),
        (5041, ["E2", "E3"], 25.0,
         {"highway": "residential", "name": "NW Ridgeview Dr"}),
        (5050, ["A4", "G2"], 25.0,
         {"highway": "residential", "name": "NW Hollow Ct"}),
        # two ways meeting at F2: strict mode merges them into one edge,
        # non-strict keeps F2 because the osmids differ
        (5060, ["A3", "F2"], 25.0,
         {"highway": "residential", "name": "NW Saltzman Way"}),
        (5061, ["F2", "A5"], 25.0,
         {"highway": "residential", "name": "NW Saltzman Way"}),
    ]
    for osmid, stops, amp, tags in ways:
        elements.append(_way(osmid, chain(stops, amp), **tags))
    return _payload(elements)


# --- geocoder and footprint payloads ------------------------------------------------


def _bbox_strings(bbox):
    south, west, north, east = bbox
    return [str(south), str(north), str(west), str(east)]


def laurelhurst_place_payload() -> bytes:
    clon, clat = LAURELHURST_CENTER
    results = [
        {
            # a point hit ranked first; the polygon result below must win
            "place_id": 101, "osm_type": "node", "osm_id": 777001,
            "lat": str(clat), "lon": str(clon),
            "display_name": "Laurelhurst Park, Portland, Oregon, United States",
            "boundingbox": _bbox_strings(LAURELHURST_BBOX),
            "geojson": {"type": "Point", "coordinates": [clon, clat]},
        },
        {
            "place_id": 102, "osm_type": "relation", "osm_id": 777002,
            "lat": str(clat), "lon": str(clon),
            "display_name": "Laurelhurst, Portland, Oregon, United States",
            "boundingbox": _bbox_strings(LAURELHURST_BBOX),
            "geojson": bbox_to_polygon(*LAURELHURST_BBOX),
        },
    ]
    return json.dumps(results).encode("utf-8")


def address_payload() -> bytes:
    lon, lat = ADDRESS_POINT
    results = [{
        "place_id": 103, "osm_type": "node", "osm_id": 777003,
        "lat": str(lat), "lon": str(lon),
        "display_name": "1120, SW 5th Avenue, Portland, Multnomah County, "
                        "Oregon, 97204, United States",
        "boundingbox": [str(lat - 1e-4), str(lat + 1e-4),
                        str(lon - 1e-4), str(lon + 1e-4)],
    }]
    return json.dumps(results).encode("utf-8")


def empty_place_payload() -> bytes:
    return b"[]"


def pointonly_place_payload() -> bytes:
    results = [{
        "place_id": 104, "osm_type": "node", "osm_id": 777004,
        "lat": "45.5188", "lon": "-122.6795",
        "display_name": "Pioneer Courthouse, Portland, Oregon, United States",
        "boundingbox": ["45.5187", "45.5189", "-122.6796", "-122.6794"],
        "geojson": {"type": "Point", "coordinates": [-122.6795, 45.5188]},
    }]
    return json.dumps(results).encode("utf-8")


def empty_site_payload() -> bytes:
    elements = [
        _node(70000, EMPTY_SITE_CENTER, -30.0, 0.0),
        _node(70001, EMPTY_SITE_CENTER, 30.0, 0.0),
        _way(7000, [70000, 70001], highway="footway"),
    ]
    return _payload(elements)


def footprints_payload() -> bytes:
    elements = []

    def square(first_id, cx, cy, half):
        ids = [first_id + t for t in range(4)]
        offsets = [(-half, -half), (half, -half), (half, half), (-half, half)]
        for id_, (dx, dy) in zip(ids, offsets):
            elements.append(_node(id_, LAURELHURST_CENTER, cx + dx, cy + dy))
        return ids + [ids[0]]

    elements.append(_way(6000, square(60000, -40.0, -40.0, 15.0),
                         building="yes"))
    elements.append(_way(6001, square(60010, 60.0, 30.0, 12.0),
                         building="house"))
    # unclosed ring: must be skipped with a warning, not drawn
    elements.append(_node(60020, LAURELHURST_CENTER, 120.0, -80.0))
    elements.append(_node(60021, LAURELHURST_CENTER, 150.0, -80.0))
    elements.append(_node(60022, LAURELHURST_CENTER, 150.0, -50.0))
    elements.append(_way(6002, [60020, 60021, 60022], building="yes"))
    return _payload(elements)
