import pytest
from hypothesis import given, settings, strategies as st

from kneser_topo import (
    KSubset,
    ParameterError,
    ResourceError,
    StabilityVector,
    build_graph,
    canonical_coloring,
    chromatic_number_exact,
    corollary10_check,
    graph_report,
    greedy_clique,
    lovasz_bound_report,
    verify_coloring,
)
from kneser_topo.kneser_graph import StableKneserGraph

from oracles import brute_stable, chromatic_by_inclusion_exclusion


def _graph_from_edges(nv, edges):
    # a bare graph on nv abstract vertices, for solver tests that need no stable sets
    nb = [0] * nv
    for u, v in edges:
        nb[u] |= 1 << v
        nb[v] |= 1 << u
    verts = tuple(KSubset((i + 1,), nv) for i in range(nv))
    return StableKneserGraph(nv, 1, StabilityVector((1,)), verts, tuple(nb))


def _cycle(m):
    return _graph_from_edges(m, [(i, (i + 1) % m) for i in range(m)])


def test_small_graphs():
    g = build_graph(4, 2, (2, 1))
    assert g.num_vertices == 3 and g.num_edges == 1
    (i, j), = g.edges
    assert {g.vertices[i].elements, g.vertices[j].elements} == {(1, 3), (2, 4)}

    g = build_graph(5, 2, (2, 2))
    assert (g.num_vertices, g.num_edges) == (5, 5)
    assert all(g.degree(i) == 2 for i in range(5))

    g = build_graph(9, 3, (3, 3, 3))
    assert g.num_vertices == 3 and g.num_edges == 3


@pytest.mark.parametrize("n,k,s", [(6, 2, (2, 1)), (7, 3, (2, 2, 1)), (8, 2, (3, 2)), (9, 3, (2, 2, 2))])
def test_edges_are_disjoint_pairs(n, k, s):
    g = build_graph(n, k, s)
    verts = [set(a) for a in brute_stable(n, k, s)]
    assert [set(v.elements) for v in g.vertices] == verts
    expected = {(i, j) for i in range(len(verts)) for j in range(i + 1, len(verts)) if not verts[i] & verts[j]}
    assert set(g.edges) == expected


def test_canonical_coloring_values():
    assert canonical_coloring(KSubset((2, 5), 5), 5, (2, 2)) == 2
    assert canonical_coloring(KSubset((3, 5), 5), 5, (2, 2)) == 3
    assert canonical_coloring(KSubset((4, 6), 6), 6, (2, 2)) == 4
    with pytest.raises(ParameterError):
        canonical_coloring(KSubset((1, 2), 5), 5, (2, 2))


@pytest.mark.parametrize("n,k,s", [
    (6, 2, (2, 2)), (5, 2, (2, 1)), (7, 3, (2, 2, 1)), (8, 3, (2, 2, 2)), (9, 3, (3, 2, 1)), (10, 2, (4, 2)),
])
def test_canonical_coloring_is_proper(n, k, s):
    g = build_graph(n, k, s)
    colors = [canonical_coloring(v, n, s) for v in g.vertices]
    assert verify_coloring(g, colors)


def test_verify_coloring_on_cycle():
    c5 = _cycle(5)
    assert verify_coloring(c5, [1, 2, 1, 2, 3])
    assert not verify_coloring(c5, [1, 2, 1, 2, 1])
    with pytest.raises(ParameterError):
        verify_coloring(c5, [1, 2])


@pytest.mark.parametrize("n,k,s,chi", [(4, 2, (2, 1), 2), (5, 2, (2, 2), 3), (9, 3, (3, 3, 3), 3)])
def test_chromatic_examples(n, k, s, chi):
    res = chromatic_number_exact(build_graph(n, k, s))
    assert res.chi == chi
    assert res.witness.proper and res.witness.color_count == chi
    assert res.infeasibility_log["exhaustive_failure_at"] == chi - 1


@pytest.mark.parametrize("n,k,s", [
    (5, 2, (2, 1)), (6, 2, (2, 1)), (6, 2, (2, 2)), (7, 2, (3, 2)), (7, 3, (2, 2, 1)), (6, 2, (3, 1)),
    (8, 2, (4, 2)), (8, 2, (5, 1)), (9, 3, (3, 3, 1)),
])
def test_chromatic_matches_inclusion_exclusion(n, k, s):
    g = build_graph(n, k, s)
    if g.num_vertices > 12:
        pytest.skip("oracle limited to 12 vertices")
    assert chromatic_number_exact(g).chi == chromatic_by_inclusion_exclusion(g.num_vertices, g.edges)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 9), st.data())
def test_chromatic_on_random_graphs(nv, data):
    pairs = [(i, j) for i in range(nv) for j in range(i + 1, nv)]
    edges = data.draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    g = _graph_from_edges(nv, edges)
    res = chromatic_number_exact(g)
    assert res.chi == chromatic_by_inclusion_exclusion(nv, edges)
    clique = greedy_clique(g)
    assert all(g.adjacent(a, b) for a in clique for b in clique if a != b)
    assert len(clique) <= res.chi


def test_chromatic_budget_and_empty():
    g = build_graph(8, 2, (2, 1))
    with pytest.raises(ResourceError):
        chromatic_number_exact(g, vertex_budget=5)
    empty = build_graph(3, 2, (2, 2))
    assert empty.num_vertices == 0
    assert chromatic_number_exact(empty).chi == 0


def test_graph_report_shapes():
    g = build_graph(5, 2, (2, 2))
    rep = graph_report(g, chromatic_number_exact(g))
    assert rep["num_vertices"] == 5 and rep["num_edges"] == 5
    assert rep["chi"] == 3 and rep["formula"] == 3 and rep["match"] is True
    outside = graph_report(build_graph(9, 3, (3, 3, 3)))
    assert outside["formula"] is None and outside["chi"] is None


def test_lovasz_bound_report():
    assert lovasz_bound_report(5, 2, (2, 2), 1)["bound"] == 3
    assert lovasz_bound_report(6, 2, (3, 1), 1)["bound"] == 3
    rep = lovasz_bound_report(5, 2, (2, 2), None)
    assert rep["bound"] is None and rep["status"] == "no bound emitted"
    assert "conditional" in lovasz_bound_report(5, 2, (2, 2), 1)["status"]


@pytest.mark.parametrize("n,k,bound,chi_big", [(9, 3, 2, 3), (6, 2, 2, 3)])
def test_corollary10(n, k, bound, chi_big):
    rep = corollary10_check(n, k)
    assert rep["embedding"] and rep["subgraph"]
    assert rep["bound"] == bound and rep["chi_big"] == chi_big
    assert rep["bound_holds"] and rep["ok"]


def test_corollary10_ten_three():
    # the 3-stable graph on [10] has 10 vertices (n/k * C(n-2k-1, k-1)), well inside the budget
    rep = corollary10_check(10, 3)
    assert rep["big"]["num_vertices"] == len(brute_stable(10, 3, (3, 3, 3))) == 10
    assert rep["embedding"] and rep["bound"] == 3
    assert rep["chi_big"] is not None and rep["bound_holds"]


def test_corollary10_budget_keeps_embedding_check():
    rep = corollary10_check(10, 3, budget=2)
    assert rep["cap_hit"] and rep["embedding"] and rep["chi_big"] is None
    with pytest.raises(ParameterError):
        corollary10_check(5, 2)
