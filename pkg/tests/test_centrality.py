"""Node centralities against hand-worked values and enumeration oracles."""

import pytest

from builders import adjacency_of, edge_triples, line_graph, make_graph, random_graph
from oracles import (
    betweenness_oracle,
    clustering_oracle,
    closeness_oracle,
    pagerank_oracle,
    simple_undirected_oracle,
)
from streetnet.centrality import (
    avg_neighborhood_degree,
    betweenness,
    closeness,
    clustering,
    degree_centrality,
    pagerank,
)
from streetnet.errors import NonConvergence

NODES4 = [(1, 0.0, 0.0), (2, 0.001, 0.0), (3, 0.001, 0.001), (4, 0.0, 0.001)]


def two_way(u, v, length, **attrs):
    attrs["oneway"] = False
    return [(u, v, length, dict(attrs)), (v, u, length, dict(attrs))]


def pagerank_links(g):
    """Link multiplicities exactly as the power iteration counts them:
    self-loops stay, and the undirected flag adds the mirror of every
    stored edge (so an undirected self-loop counts twice)."""
    links = {v: {} for v in g.node_ids()}
    for u, v, _key, _rec in g.edges():
        links[u][v] = links[u].get(v, 0) + 1
        if g.undirected:
            links[v][u] = links[v].get(u, 0) + 1
    return links


# --- betweenness --------------------------------------------------------------------


def test_betweenness_two_way_path():
    g = line_graph([1.0, 1.0], two_way=True)
    bt = betweenness(g)
    # node 2 sits on both ordered pairs (1,3) and (3,1); scale is 1/((n-1)(n-2))
    assert bt == {1: 0.0, 2: pytest.approx(1.0), 3: 0.0}


def test_betweenness_diamond_splits_ties():
    edges = (two_way(1, 2, 1.0) + two_way(1, 3, 1.0)
             + two_way(2, 4, 1.0) + two_way(3, 4, 1.0))
    bt = betweenness(make_graph(NODES4, edges))
    # every node carries half of one tied pair in each direction: raw 1.0,
    # scaled by 1/6
    for v in (1, 2, 3, 4):
        assert bt[v] == pytest.approx(1 / 6)


def test_betweenness_one_way_tie_split():
    g = make_graph(NODES4, [(1, 2, 1.0), (1, 3, 1.0), (2, 4, 1.0), (3, 4, 1.0)])
    bt = betweenness(g)
    # only (1,4) routes through anything, split evenly over the two paths
    assert bt[2] == pytest.approx(1 / 12)
    assert bt[3] == pytest.approx(1 / 12)
    assert bt[1] == bt[4] == 0.0


def test_betweenness_under_three_nodes_is_zero():
    g = line_graph([4.0], two_way=True)
    assert betweenness(g) == {1: 0.0, 2: 0.0}


def test_betweenness_parallel_edges_do_not_multiply_paths():
    g = line_graph([1.0, 1.0])
    g.add_edge(1, 2, g.edge(1, 2, 0).copy())  # equal-length duplicate
    bt = betweenness(g)
    # only the ordered pair (1,3) crosses node 2, and it counts once
    assert bt[2] == pytest.approx(0.5)


def test_betweenness_respects_weight_attribute():
    # grade pushes the direct 1->3 edge out of favor, forcing 1-2-3
    nodes = NODES4[:3]
    edges = [(1, 2, 9.0, {"grade": 1.0}), (2, 3, 9.0, {"grade": 1.0}),
             (1, 3, 1.0, {"grade": 5.0})]
    g = make_graph(nodes, edges)
    assert betweenness(g)[2] == 0.0
    assert betweenness(g, weight="grade")[2] == pytest.approx(0.5)


@pytest.mark.parametrize("undirected", [False, True])
@pytest.mark.parametrize("seed", range(30))
def test_betweenness_matches_enumeration(seed, undirected):
    g = random_graph(seed, undirected=undirected)
    want = betweenness_oracle(g.node_ids(), adjacency_of(g, symmetric=undirected))
    got = betweenness(g)
    assert got == pytest.approx(want, abs=1e-9)


# --- closeness ----------------------------------------------------------------------


def test_closeness_directed_cycle():
    g = make_graph(NODES4[:3], [(1, 2, 1.0), (2, 3, 1.0), (3, 1, 1.0)])
    assert closeness(g) == pytest.approx({1: 2 / 3, 2: 2 / 3, 3: 2 / 3})


def test_closeness_partial_reachability_scales_down():
    g = line_graph([1.0, 1.0])  # one-way chain
    cl = closeness(g)
    assert cl[1] == pytest.approx(2 / 3)       # reaches both, total 3
    assert cl[2] == pytest.approx(0.5)         # (1/1) * (1/2)
    assert cl[3] == 0.0                        # reaches nothing


def test_closeness_uses_edge_lengths():
    g = make_graph(NODES4[:3], [(1, 2, 4.0), (2, 3, 2.0)])
    assert closeness(g)[1] == pytest.approx(2 / 10)


@pytest.mark.parametrize("undirected", [False, True])
@pytest.mark.parametrize("seed", range(30))
def test_closeness_matches_all_pairs(seed, undirected):
    g = random_graph(seed + 100, undirected=undirected)
    want = closeness_oracle(g.node_ids(), adjacency_of(g, symmetric=undirected))
    assert closeness(g) == pytest.approx(want, abs=1e-9)


# --- pagerank -----------------------------------------------------------------------


def test_pagerank_uniform_on_cycle():
    g = make_graph(NODES4[:3], [(1, 2, 1.0), (2, 3, 1.0), (3, 1, 1.0)])
    pr = pagerank(g)
    assert pr == pytest.approx({1: 1 / 3, 2: 1 / 3, 3: 1 / 3}, abs=1e-6)
    assert sum(pr.values()) == pytest.approx(1.0, abs=1e-9)


def test_pagerank_dangling_mass_redistributes():
    g = make_graph(NODES4[:2], [(1, 2, 1.0)])
    pr = pagerank(g)
    # closed form with node 2 dangling: x1 = 20/57, x2 = 37/57
    assert pr[1] == pytest.approx(20 / 57, abs=1e-6)
    assert pr[2] == pytest.approx(37 / 57, abs=1e-6)


def test_pagerank_self_loop_holds_mass():
    g = make_graph(NODES4[:2], [(1, 2, 1.0), (2, 2, 1.0)])
    pr = pagerank(g)
    # node 2's only out-link is itself, so it keeps everything but the
    # teleport share; node 1 receives teleport only
    assert pr[1] == pytest.approx(0.075, abs=1e-6)
    assert pr[2] == pytest.approx(0.925, abs=1e-6)


def test_pagerank_parallel_edges_weight_links():
    edges = [(1, 2, 1.0), (1, 2, 1.0), (1, 3, 1.0)]
    pr = pagerank(make_graph(NODES4[:3], edges))
    # node 1 splits 2:1 between its sinks; both sinks dangle back uniformly
    assert pr[1] == pytest.approx(20 / 77, abs=1e-6)
    assert pr[2] == pytest.approx(94 / 231, abs=1e-6)
    assert pr[3] == pytest.approx(1 / 3, abs=1e-6)


def test_pagerank_undirected_flag_mirrors_links():
    g = make_graph(NODES4[:3], [(1, 2, 1.0), (2, 3, 1.0)], undirected=True)
    pr = pagerank(g)
    assert pr[1] == pr[3] == pytest.approx(19 / 74, abs=1e-6)
    assert pr[2] == pytest.approx(18 / 37, abs=1e-6)


def test_pagerank_periodic_chain_fails_to_converge():
    # with no teleport the 1<->2 core oscillates forever
    g = make_graph(NODES4[:3], [(1, 2, 1.0), (2, 1, 1.0), (3, 1, 1.0)])
    with pytest.raises(NonConvergence):
        pagerank(g, damping=1.0)


@pytest.mark.parametrize("undirected", [False, True])
@pytest.mark.parametrize("seed", range(30))
def test_pagerank_matches_linear_solve(seed, undirected):
    g = random_graph(seed + 200, undirected=undirected)
    want = pagerank_oracle(g.node_ids(), pagerank_links(g))
    got = pagerank(g)
    assert got == pytest.approx(want, abs=1e-6)
    assert sum(got.values()) == pytest.approx(1.0, abs=1e-8)


# --- clustering ---------------------------------------------------------------------


def triangle(lengths=(1.0, 1.0, 1.0), extra=()):
    edges = (two_way(1, 2, lengths[0]) + two_way(1, 3, lengths[1])
             + two_way(2, 3, lengths[2]))
    for e in extra:
        edges += two_way(*e)
    return make_graph(NODES4, edges) if extra else make_graph(NODES4[:3], edges)


def test_clustering_triangle_is_one():
    assert clustering(triangle()) == {1: 1.0, 2: 1.0, 3: 1.0}


def test_clustering_square_is_zero():
    edges = (two_way(1, 2, 1.0) + two_way(2, 3, 1.0)
             + two_way(3, 4, 1.0) + two_way(4, 1, 1.0))
    assert clustering(make_graph(NODES4, edges)) == {v: 0.0 for v in (1, 2, 3, 4)}


def test_clustering_pendant_dilutes():
    g = triangle(extra=[(1, 4, 1.0)])
    cc = clustering(g)
    assert cc[1] == pytest.approx(1 / 3)   # one closed pair of three
    assert cc[2] == cc[3] == 1.0
    assert cc[4] == 0.0                    # degree-one node


def test_clustering_weighted_geometric_mean():
    cc = clustering(triangle((1.0, 2.0, 4.0)), weighted=True)
    # normalized weights 1/4, 1/2, 1; cube root of their product is 1/2
    for v in (1, 2, 3):
        assert cc[v] == pytest.approx(0.5)


def test_clustering_parallel_edges_collapse_to_min():
    g = triangle((1.0, 2.0, 4.0))
    heavier = g.edge(1, 2, 0).copy()
    heavier.length = 10.0
    g.add_edge(1, 2, heavier)
    assert clustering(g, weighted=True)[1] == pytest.approx(0.5)


def test_clustering_ignores_edge_direction():
    one_way = make_graph(NODES4[:3], [(1, 2, 1.0), (2, 3, 1.0), (3, 1, 1.0)])
    assert clustering(one_way) == {1: 1.0, 2: 1.0, 3: 1.0}


@pytest.mark.parametrize("weighted", [False, True])
@pytest.mark.parametrize("seed", range(30))
def test_clustering_matches_triple_enumeration(seed, weighted):
    g = random_graph(seed + 300)
    nbrs, weights = simple_undirected_oracle(edge_triples(g))
    want = clustering_oracle(g.node_ids(), nbrs, weights, weighted=weighted)
    assert clustering(g, weighted=weighted) == pytest.approx(want, abs=1e-9)


# --- neighborhood degree and degree centrality ----------------------------------------


def star_with_chord():
    edges = (two_way(1, 2, 1.0) + two_way(1, 3, 2.0)
             + two_way(1, 4, 5.0) + two_way(2, 3, 3.0))
    return make_graph(NODES4, edges)


def test_avg_neighborhood_degree_plain():
    nd = avg_neighborhood_degree(star_with_chord())
    assert nd[1] == pytest.approx(10 / 3)  # neighbor degrees 4, 4, 2
    assert nd[2] == pytest.approx(5.0)     # (6 + 4) / 2
    assert nd[4] == pytest.approx(6.0)


def test_avg_neighborhood_degree_weighted_by_length():
    nd = avg_neighborhood_degree(star_with_chord(), weighted=True)
    # hub weights per neighbor are both-direction length sums: 2, 4, 10
    assert nd[1] == pytest.approx((2 * 4 + 4 * 4 + 10 * 2) / 16)
    assert nd[4] == pytest.approx(6.0)


def test_avg_neighborhood_degree_isolated_node():
    g = star_with_chord()
    g.add_node(type(g.node(1))(id=9, x=0.002, y=0.002))
    assert avg_neighborhood_degree(g)[9] == 0.0
    assert avg_neighborhood_degree(g, weighted=True)[9] == 0.0


def test_degree_centrality_scales_by_n_minus_one():
    dc = degree_centrality(star_with_chord())
    assert dc == pytest.approx({1: 2.0, 2: 4 / 3, 3: 4 / 3, 4: 2 / 3})


def test_degree_centrality_singleton():
    g = make_graph([(1, 0.0, 0.0)], [])
    assert degree_centrality(g) == {1: 0.0}
