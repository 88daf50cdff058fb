"""Node centralities: betweenness, closeness, PageRank, clustering, neighbor degree.

All functions are deterministic and operate on a read-only StreetGraph.
Graphs flagged undirected (single stored edge per street) are traversed
symmetrically; directed graphs follow edge direction.
"""

from __future__ import annotations

import heapq
from itertools import count

from .errors import NonConvergence
from .graph import StreetGraph
from .paths import edge_weight

PAGERANK_DAMPING = 0.85
PAGERANK_TOL = 1e-8


def _adjacency(g: StreetGraph, weight: str) -> dict[int, dict[int, float]]:
    """Neighbor -> min edge weight maps; self-loops dropped (never on a
    shortest path with positive weights)."""
    adj: dict[int, dict[int, float]] = {node_id: {} for node_id in g.node_ids()}
    for u, v, _key, rec in g.edges():
        if u == v:
            continue
        w = edge_weight(rec, weight)
        if v not in adj[u] or w < adj[u][v]:
            adj[u][v] = w
        if g.undirected and (u not in adj[v] or w < adj[v][u]):
            adj[v][u] = w
    return adj


def betweenness(g: StreetGraph, weight: str = "length") -> dict[int, float]:
    """Brandes betweenness over weighted shortest paths, endpoints excluded.

    Shortest paths are node sequences, so parallel edges do not multiply
    path counts. Normalized by (n-1)(n-2); the undirected double count
    cancels against the doubled pair space, so one scale serves both.
    """
    nodes = g.node_ids()
    n = len(nodes)
    bt = dict.fromkeys(nodes, 0.0)
    if n < 3:
        return bt
    adj = _adjacency(g, weight)
    tiebreak = count()
    for s in nodes:
        finalized: list[int] = []
        preds: dict[int, list[int]] = {v: [] for v in nodes}
        sigma = dict.fromkeys(nodes, 0.0)
        sigma[s] = 1.0
        dist: dict[int, float] = {}
        seen = {s: 0.0}
        heap: list[tuple[float, int, int | None, int]] = [(0.0, next(tiebreak), None, s)]
        while heap:
            d, _, pred, v = heapq.heappop(heap)
            if v in dist:
                continue
            if pred is not None:
                sigma[v] += sigma[pred]
            finalized.append(v)
            dist[v] = d
            for w_node, w_len in adj[v].items():
                nd = d + w_len
                if w_node not in dist and (w_node not in seen or nd < seen[w_node]):
                    seen[w_node] = nd
                    sigma[w_node] = 0.0
                    preds[w_node] = [v]
                    heapq.heappush(heap, (nd, next(tiebreak), v, w_node))
                elif nd == seen.get(w_node):
                    sigma[w_node] += sigma[v]
                    preds[w_node].append(v)
        delta = dict.fromkeys(nodes, 0.0)
        while finalized:
            w_node = finalized.pop()
            if sigma[w_node] == 0:
                continue
            coeff = (1.0 + delta[w_node]) / sigma[w_node]
            for v in preds[w_node]:
                delta[v] += sigma[v] * coeff
            if w_node != s:
                bt[w_node] += delta[w_node]
    scale = 1.0 / ((n - 1) * (n - 2))
    return {v: b * scale for v, b in bt.items()}


def closeness(g: StreetGraph, weight: str = "length") -> dict[int, float]:
    """(r-1)/sum(outgoing distances), scaled by the reachable fraction (r-1)/(n-1)."""
    nodes = g.node_ids()
    n = len(nodes)
    adj = _adjacency(g, weight)
    out: dict[int, float] = {}
    for s in nodes:
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
        reachable = len(done)
        total = sum(dist.values())
        if reachable <= 1 or total <= 0:
            out[s] = 0.0
        else:
            value = (reachable - 1) / total
            if n > 1:
                value *= (reachable - 1) / (n - 1)
            out[s] = value
    return out


def pagerank(
    g: StreetGraph,
    damping: float = PAGERANK_DAMPING,
    tol: float = PAGERANK_TOL,
) -> dict[int, float]:
    """Power iteration over link structure until the L1 change drops below tol.

    Parallel edges count with multiplicity; dangling mass redistributes
    uniformly. Iteration cap is 10n + 100.
    """
    nodes = g.node_ids()
    n = len(nodes)
    if n == 0:
        return {}
    # out-link multiplicity per node
    links: dict[int, dict[int, int]] = {v: {} for v in nodes}
    out_total = dict.fromkeys(nodes, 0)
    for u, v, _key, _rec in g.edges():
        links[u][v] = links[u].get(v, 0) + 1
        out_total[u] += 1
        if g.undirected:
            links[v][u] = links[v].get(u, 0) + 1
            out_total[v] += 1
    x = dict.fromkeys(nodes, 1.0 / n)
    dangling = [v for v in nodes if out_total[v] == 0]
    max_iter = 10 * n + 100
    for _ in range(max_iter):
        nxt = dict.fromkeys(nodes, 0.0)
        dangling_mass = sum(x[v] for v in dangling)
        base = (1.0 - damping) / n + damping * dangling_mass / n
        for u in nodes:
            share = x[u]
            total = out_total[u]
            for v, mult in links[u].items():
                nxt[v] += damping * share * mult / total
        for v in nodes:
            nxt[v] += base
        err = sum(abs(nxt[v] - x[v]) for v in nodes)
        x = nxt
        if err < tol:
            return x
    raise NonConvergence(f"pagerank failed to converge in {max_iter} iterations")


def _simple_undirected(g: StreetGraph, weight: str = "length"):
    """Simple-graph view: neighbor sets and min edge weights, both directions
    merged, self-loops and parallel duplicates dropped."""
    nbrs: dict[int, set[int]] = {v: set() for v in g.node_ids()}
    weights: dict[tuple[int, int], float] = {}
    for u, v, _key, rec in g.edges():
        if u == v:
            continue
        nbrs[u].add(v)
        nbrs[v].add(u)
        pair = (u, v) if u < v else (v, u)
        w = edge_weight(rec, weight)
        if pair not in weights or w < weights[pair]:
            weights[pair] = w
    return nbrs, weights


def clustering(g: StreetGraph, weighted: bool = False) -> dict[int, float]:
    """Triangle density around each node on the simple undirected projection.

    The weighted variant is the geometric-mean formulation: each triangle
    contributes the cube root of its three edge weights, each normalized by
    the maximum weight in the graph.
    """
    nbrs, weights = _simple_undirected(g)
    out: dict[int, float] = {}
    max_w = max(weights.values()) if weights else 1.0

    def norm(a: int, b: int) -> float:
        return weights[(a, b) if a < b else (b, a)] / max_w

    for v, neigh in nbrs.items():
        k = len(neigh)
        if k < 2:
            out[v] = 0.0
            continue
        ordered = sorted(neigh)
        total = 0.0
        for i, a in enumerate(ordered):
            for b in ordered[i + 1:]:
                if b in nbrs[a]:
                    if weighted:
                        total += (norm(v, a) * norm(v, b) * norm(a, b)) ** (1.0 / 3.0)
                    else:
                        total += 1.0
        out[v] = 2.0 * total / (k * (k - 1))
    return out


def avg_neighborhood_degree(g: StreetGraph, weighted: bool = False) -> dict[int, float]:
    """Mean degree of each node's neighbors; the weighted variant weights
    each neighbor's degree by total connecting edge length."""
    out: dict[int, float] = {}
    for v in g.node_ids():
        neigh = g.neighbors(v)
        if not neigh:
            out[v] = 0.0
            continue
        if not weighted:
            out[v] = sum(g.degree(u) for u in neigh) / len(neigh)
            continue
        num = 0.0
        den = 0.0
        for u in neigh:
            w = 0.0
            for _a, _b, _key, rec in g.out_edges(v):
                if _b == u:
                    w += rec.length
            for _a, _b, _key, rec in g.in_edges(v):
                if _a == u:
                    w += rec.length
            num += w * g.degree(u)
            den += w
        out[v] = num / den if den > 0 else 0.0
    return out


def degree_centrality(g: StreetGraph) -> dict[int, float]:
    n = g.n
    if n <= 1:
        return dict.fromkeys(g.node_ids(), 0.0)
    return {v: g.degree(v) / (n - 1) for v in g.node_ids()}
