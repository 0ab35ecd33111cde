from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperline import ConvergenceError
from hyperline.idmap import IdMap
from hyperline.linegraph import LineGraph, canonical_edges, slinegraph_hashmap
from hyperline.metrics import (
    algebraic_connectivity,
    algebraic_connectivity_by_component,
    bfs_distances,
    pagerank,
    s_betweenness,
    s_connected_components,
    s_distance,
    score_percentiles,
    top_q_retention,
)

from oracles import betweenness_oracle, normalized_laplacian_lambda2, pagerank_oracle


def graph(nodes, edges, s=1):
    nodes = np.asarray(sorted(nodes), dtype=np.int64)
    edges = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
    size = int(nodes.max()) + 1 if nodes.size else 0
    return LineGraph(s, canonical_edges(edges[:, 0], edges[:, 1]), nodes, IdMap.identity(size))


def complete(k):
    return graph(range(k), combinations(range(k), 2))


def path(k):
    return graph(range(k), [(i, i + 1) for i in range(k - 1)])


def star(leaves):
    return graph(range(leaves + 1), [(0, i) for i in range(1, leaves + 1)])


def cycle(k):
    return graph(range(k), [(i, (i + 1) % k) for i in range(k)])


@st.composite
def small_graphs(draw, max_k=8):
    k = draw(st.integers(1, max_k))
    pairs = list(combinations(range(k), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return graph(range(k), chosen)


@pytest.fixture
def line_graphs(example):
    return {s: slinegraph_hashmap(example, s) for s in (1, 2, 3, 4)}


# -- components -------------------------------------------------------------------


def test_components_on_example(example, line_graphs):
    labels = example.edge_labels
    comp = s_connected_components(line_graphs[2])
    assert [sorted(labels[c].tolist()) for c in comp.components] == [[1, 2, 3], [4]]
    no_single = s_connected_components(line_graphs[2], include_singletons=False)
    assert no_single.count == 1
    assert s_connected_components(line_graphs[1]).count == 1


def test_edgeless_graph_gives_singletons():
    comp = s_connected_components(graph(range(5), []))
    assert comp.count == 5
    assert s_connected_components(graph(range(5), []), include_singletons=False).count == 0


@given(small_graphs(max_k=12), st.randoms(use_true_random=False))
def test_component_methods_agree_and_permute(g, rnd):
    uf = s_connected_components(g)
    lp = s_connected_components(g, method="label-propagation")
    assert np.array_equal(uf.labels, lp.labels)
    perm = list(range(g.num_nodes))
    rnd.shuffle(perm)
    pg = graph([perm[x] for x in g.nodes.tolist()], [(perm[a], perm[b]) for a, b in g.edges.tolist()])
    parts = {frozenset(perm[x] for x in c.tolist()) for c in uf.components}
    assert {frozenset(c.tolist()) for c in s_connected_components(pg).components} == parts


@given(small_graphs(max_k=10))
def test_component_labels_are_min_member(g):
    comp = s_connected_components(g)
    for c in comp.components:
        assert set(comp.labels[np.isin(comp.nodes, c)].tolist()) == {int(c.min())}


# -- distance ---------------------------------------------------------------------


def test_distance_on_example(line_graphs):
    g = line_graphs[2]
    assert s_distance(g, 0, 1) == 1
    assert s_distance(g, 2, 2) == 0
    assert s_distance(g, 0, 3) is None
    with pytest.raises(ValueError):
        s_distance(line_graphs[3], 0, 3)  # edge 4 is not in E_3


def test_bfs_distances_path():
    assert bfs_distances(path(4), 0).tolist() == [0, 1, 2, 3]
    assert bfs_distances(graph(range(3), [(0, 1)]), 0).tolist() == [0, 1, -1]


# -- betweenness ------------------------------------------------------------------


def test_betweenness_examples(line_graphs):
    assert s_betweenness(line_graphs[3]).tolist() == [0.0, 0.0, 1.0]  # 1-3-2 path
    assert s_betweenness(complete(3)).tolist() == [0.0, 0.0, 0.0]
    assert s_betweenness(star(4))[0] == 6.0


def test_betweenness_normalized():
    k = 5
    assert s_betweenness(star(k - 1), normalized=True)[0] == pytest.approx(1.0)
    assert np.all(s_betweenness(graph([0, 1], [(0, 1)]), normalized=True) == 0)


@settings(max_examples=150, deadline=None)
@given(small_graphs(), st.sampled_from([1, 3]))
def test_betweenness_matches_path_enumeration(g, workers):
    exact = betweenness_oracle(g.nodes.tolist(), g.edges.tolist())
    got = s_betweenness(g, workers=workers)
    for pos, node in enumerate(g.nodes.tolist()):
        assert abs(got[pos] - float(exact[node])) <= 1e-12
    assert np.all(got >= 0)


# -- algebraic connectivity -----------------------------------------------------------


@pytest.mark.parametrize("g,expected", [
    (complete(3), 1.5),
    (path(3), 1.0),
    (complete(4), 4 / 3),
    (complete(7), 7 / 6),
])
def test_lambda2_closed_forms(g, expected):
    res = algebraic_connectivity(g)
    assert abs(res.lambda2 - expected) <= 1e-8
    assert res.residual <= 1e-8


@settings(max_examples=80, deadline=None)
@given(small_graphs(max_k=10))
def test_lambda2_bounds_and_connectivity(g):
    if g.num_nodes < 2:
        return
    res = algebraic_connectivity(g)
    assert 0.0 <= res.lambda2 <= 2.0
    connected = s_connected_components(g).count == 1
    assert (res.lambda2 > 1e-10) == connected
    assert abs(res.lambda2 - normalized_laplacian_lambda2(g.num_nodes, g.edges.tolist())) <= 1e-8


def test_lambda2_too_small_component():
    with pytest.raises(ValueError):
        algebraic_connectivity(graph([0], []))


def test_lambda2_iterative_path_cycle_closed_form():
    k = 700
    res = algebraic_connectivity(cycle(k), tol=1e-12)
    assert res.method == "lanczos"
    assert abs(res.lambda2 - (1 - np.cos(2 * np.pi / k))) <= 1e-8


def test_lambda2_iterative_matches_dense_oracle():
    rng = np.random.default_rng(5)
    k = 600
    ring = [(i, (i + 1) % k) for i in range(k)]
    chords = {tuple(sorted(p)) for p in rng.integers(0, k, size=(900, 2)).tolist() if p[0] != p[1]}
    g = graph(range(k), set(ring) | chords)
    res = algebraic_connectivity(g)
    assert res.method == "lanczos"
    assert abs(res.lambda2 - normalized_laplacian_lambda2(k, g.edges.tolist())) <= 1e-8


def test_lambda2_iterative_disconnected_is_zero():
    g = graph(range(600), [(i, i + 1) for i in range(299)] + [(i, i + 1) for i in range(300, 599)])
    assert algebraic_connectivity(g).lambda2 == 0.0


def test_lambda2_non_convergence_reports_residual():
    with pytest.raises(ConvergenceError) as err:
        algebraic_connectivity(cycle(2000), tol=1e-14, max_iter=2)
    assert err.value.iterations == 2


def test_lambda2_by_component(line_graphs):
    per = algebraic_connectivity_by_component(line_graphs[2])
    assert list(per) == [0]
    assert per[0].lambda2 == pytest.approx(1.5)


# -- PageRank ---------------------------------------------------------------------


def test_pagerank_symmetric_cases():
    assert np.allclose(pagerank(complete(3)), 1 / 3, atol=1e-12)
    assert np.allclose(pagerank(graph(range(4), [(0, 1), (2, 3)])), 0.25, atol=1e-12)


def test_pagerank_star_matches_solve():
    pr = pagerank(star(3))
    assert pr.argmax() == 0 and np.sum(pr == pr[0]) == 1
    assert np.allclose(pr, pagerank_oracle(4, star(3).edges.tolist(), 0.85), atol=1e-8)


@settings(max_examples=100, deadline=None)
@given(small_graphs(max_k=16), st.floats(0.5, 0.95))
def test_pagerank_matches_dense_solve(g, damping):
    pr = pagerank(g, damping=damping)
    assert abs(pr.sum() - 1) <= 1e-10
    assert np.all(pr >= 0)
    assert np.allclose(pr, pagerank_oracle(g.num_nodes, g.edges.tolist(), damping), atol=1e-8, rtol=0)


@given(small_graphs(max_k=10), st.randoms(use_true_random=False))
def test_pagerank_permutation_equivariant(g, rnd):
    perm = list(range(g.num_nodes))
    rnd.shuffle(perm)
    pg = graph(range(g.num_nodes), [(perm[a], perm[b]) for a, b in g.edges.tolist()])
    assert np.allclose(pagerank(pg)[perm], pagerank(g), atol=1e-10)


def test_pagerank_isolated_nodes_share_minimum():
    pr = pagerank(graph(range(5), [(0, 1), (1, 2)]))
    assert pr[3] == pytest.approx(pr[4]) and pr[3] == pytest.approx(pr.min())


def test_pagerank_bad_damping():
    with pytest.raises(ValueError):
        pagerank(complete(3), damping=1.0)


# -- ranking stability helpers -----------------------------------------------------


def test_score_percentiles():
    assert score_percentiles([1.0, 3.0, 2.0, 3.0]).tolist() == [25.0, 100.0, 50.0, 100.0]


def test_top_q_retention():
    ids = [10, 11, 12, 13]
    assert top_q_retention(ids, [4, 3, 2, 1], ids, [4, 3, 2, 1], 2) == 1.0
    assert top_q_retention(ids, [4, 3, 2, 1], ids, [1, 2, 3, 4], 2) == 0.0
    assert top_q_retention(ids, [4, 3, 2, 1], [11, 12], [5, 1], 2) == 0.5
