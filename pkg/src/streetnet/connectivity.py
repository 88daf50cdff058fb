"""Connectivity analysis: components, vertex/edge cuts via max-flow."""

from __future__ import annotations

from collections import deque

from .errors import Disconnected
from .graph import StreetGraph, undirected_projection


def _successor_sets(g: StreetGraph, symmetric: bool) -> dict[int, set[int]]:
    succ: dict[int, set[int]] = {v: set() for v in g.node_ids()}
    for u, v, _key, _rec in g.edges():
        succ[u].add(v)
        if symmetric or g.undirected:
            succ[v].add(u)
    return succ


def weakly_connected_components(g: StreetGraph) -> list[set[int]]:
    succ = _successor_sets(g, symmetric=True)
    seen: set[int] = set()
    comps = []
    for start in g.node_ids():
        if start in seen:
            continue
        comp = {start}
        queue = deque([start])
        seen.add(start)
        while queue:
            u = queue.popleft()
            for v in succ[u]:
                if v not in seen:
                    seen.add(v)
                    comp.add(v)
                    queue.append(v)
        comps.append(comp)
    return comps


def strongly_connected_components(g: StreetGraph) -> list[set[int]]:
    """Tarjan's algorithm, iterative to survive deep chains."""
    succ = _successor_sets(g, symmetric=False)
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    comps: list[set[int]] = []
    counter = [0]

    for root in g.node_ids():
        if root in index:
            continue
        work = [(root, iter(sorted(succ[root])))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(sorted(succ[w]))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def is_weakly_connected(g: StreetGraph) -> bool:
    return g.n > 0 and len(weakly_connected_components(g)) == 1


def is_strongly_connected(g: StreetGraph) -> bool:
    if g.undirected:
        return is_weakly_connected(g)
    return g.n > 0 and len(strongly_connected_components(g)) == 1


def largest_scc(g: StreetGraph) -> StreetGraph:
    comps = strongly_connected_components(g)
    best = max(comps, key=lambda c: (len(c), -min(c)))
    return g.subgraph(best)


# --- max-flow core ----------------------------------------------------------------


def _maxflow(cap: dict, source, sink) -> int:
    """Edmonds-Karp over an integer capacity dict-of-dicts (mutated)."""
    flow = 0
    while True:
        parent = {source: None}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            if u == sink:
                break
            for v, c in cap.get(u, {}).items():
                if c > 0 and v not in parent:
                    parent[v] = u
                    queue.append(v)
        if sink not in parent:
            return flow
        path = []
        v = sink
        while parent[v] is not None:
            path.append((parent[v], v))
            v = parent[v]
        bottleneck = min(cap[u][v] for u, v in path)
        for u, v in path:
            cap[u][v] -= bottleneck
            cap.setdefault(v, {})[u] = cap.get(v, {}).get(u, 0) + bottleneck
        flow += bottleneck


def _multiplicity(g: StreetGraph, symmetric: bool) -> dict[int, dict[int, int]]:
    mult: dict[int, dict[int, int]] = {v: {} for v in g.node_ids()}
    for u, v, _key, _rec in g.edges():
        if u == v:
            continue  # self-loops never separate anything
        mult[u][v] = mult[u].get(v, 0) + 1
        if symmetric or g.undirected:
            mult[v][u] = mult[v].get(u, 0) + 1
    return mult


def _split_capacities(mult: dict[int, dict[int, int]]) -> dict:
    """Vertex-split transform: v becomes v_in -(1)-> v_out; edges join outs to ins."""
    cap: dict = {}
    for v in mult:
        cap[(v, 0)] = {(v, 1): 1}  # (v, 0) = in side, (v, 1) = out side
        cap.setdefault((v, 1), {})
    for u, nbrs in mult.items():
        for v, m in nbrs.items():
            cap[(u, 1)][(v, 0)] = m
    return cap


def local_node_connectivity(g: StreetGraph, s: int, t: int) -> int:
    """Max internally vertex-disjoint directed paths s -> t (Menger)."""
    if s == t:
        raise ValueError("local node connectivity needs distinct endpoints")
    mult = _multiplicity(g, symmetric=False)
    cap = _split_capacities(mult)
    return _maxflow(cap, (s, 1), (t, 0))


def node_connectivity(g: StreetGraph) -> int:
    """Minimum vertex removals that break strong connectivity."""
    if not is_strongly_connected(g):
        return 0
    nodes = g.node_ids()
    n = len(nodes)
    if n == 1:
        return 0
    mult = _multiplicity(g, symmetric=False)
    best = None
    for s in nodes:
        for t in nodes:
            if s == t or mult[s].get(t):
                continue  # adjacent pairs cannot be vertex-separated
            cap = _split_capacities(mult)
            kappa = _maxflow(cap, (s, 1), (t, 0))
            if best is None or kappa < best:
                best = kappa
                if best == 0:
                    return 0
    return n - 1 if best is None else best


def edge_connectivity(g: StreetGraph) -> int:
    """Minimum edge removals that break strong connectivity."""
    if not is_strongly_connected(g):
        return 0
    nodes = g.node_ids()
    if len(nodes) == 1:
        return 0
    mult = _multiplicity(g, symmetric=False)
    pivot = nodes[0]
    best = None
    for other in nodes[1:]:
        for s, t in ((pivot, other), (other, pivot)):
            cap = {u: dict(nbrs) for u, nbrs in mult.items()}
            lam = _maxflow(cap, s, t)
            if best is None or lam < best:
                best = lam
    return best or 0


def avg_node_connectivity(g: StreetGraph) -> float:
    """Mean local node connectivity over all ordered node pairs."""
    nodes = g.node_ids()
    n = len(nodes)
    if n < 2:
        return 0.0
    mult = _multiplicity(g, symmetric=False)
    total = 0
    for s in nodes:
        for t in nodes:
            if s == t:
                continue
            cap = _split_capacities(mult)
            total += _maxflow(cap, (s, 1), (t, 0))
    return total / (n * (n - 1))


def connectivity_suite(g: StreetGraph) -> dict[str, float]:
    """Global cuts plus average local connectivity, directed and undirected."""
    if not is_weakly_connected(g):
        raise Disconnected("connectivity suite requires a weakly connected graph")
    undirected = g if g.undirected else undirected_projection(g)
    return {
        "node_connectivity": node_connectivity(g),
        "edge_connectivity": edge_connectivity(g),
        "avg_node_connectivity": avg_node_connectivity(g),
        "node_connectivity_undirected": node_connectivity(undirected),
        "avg_node_connectivity_undirected": avg_node_connectivity(undirected),
    }
