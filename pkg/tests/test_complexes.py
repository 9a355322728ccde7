from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from kneser_topo import (
    KSubset,
    PairElement,
    ParameterError,
    Poset,
    ResourceError,
    SimplicialComplex,
    StabilityVector,
    build_graph,
    build_hom_poset,
    build_pair_poset,
    complex_equality,
    neighborhood_complex,
    order_complex,
    reduced_homology,
)
from kneser_topo.complexes import iter_chains
from kneser_topo.kneser_graph import StableKneserGraph

from oracles import brute_pair_poset, closure, count_chains, pair_leq


def _graph_from_edges(nv, edges):
    nb = [0] * nv
    for u, v in edges:
        nb[u] |= 1 << v
        nb[v] |= 1 << u
    verts = tuple(KSubset((i + 1,), nv) for i in range(nv))
    return StableKneserGraph(nv, 1, StabilityVector((1,)), verts, tuple(nb))


def _chain_poset(m):
    return Poset(list(range(m)), leq=lambda a, b: a <= b)


def _antichain(m):
    return Poset(list(range(m)), leq=lambda a, b: a == b)


# -- simplicial complexes ----------------------------------------------------------

def test_closure_and_facets():
    c = SimplicialComplex([(0, 1, 2), (2, 3)])
    assert c.simplices == closure([(0, 1, 2), (2, 3)])
    assert c.facets == ((0, 1, 2), (2, 3))
    assert c.f_vector() == [4, 4, 1]
    assert c.dimension == 2 and c.is_closed()
    assert SimplicialComplex.empty().dimension == -1
    assert len(SimplicialComplex.empty()) == 0


def test_simplex_cap():
    with pytest.raises(ResourceError):
        SimplicialComplex([tuple(range(12))], max_simplices=100)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.sets(st.integers(0, 7), min_size=1, max_size=4), max_size=8))
def test_closure_matches_oracle(facets):
    c = SimplicialComplex([tuple(f) for f in facets])
    assert c.simplices == closure(facets)
    assert c.is_closed()
    # every cell lies in some facet and facets are maximal
    for cell in c.simplices:
        assert any(set(cell) <= set(f) for f in c.facets)


def test_complex_equality():
    x = SimplicialComplex([(0, 1), (1, 2)])
    assert complex_equality(x, SimplicialComplex([(1, 2), (0, 1)]))
    assert not complex_equality(SimplicialComplex([(0,), (1,)]), SimplicialComplex([(0,)]))
    # label-aware comparison ignores vertex numbering
    a = SimplicialComplex([(0, 1)], labels=["p", "q"])
    b = SimplicialComplex([(0, 1)], labels=["q", "p"])
    assert complex_equality(a, b)


# -- neighbourhood complex ---------------------------------------------------------------

def test_neighbourhood_complex_small():
    g = build_graph(4, 2, (2, 1))
    c = neighborhood_complex(g)
    assert c.label_set() == {frozenset({KSubset((1, 3), 4)}), frozenset({KSubset((2, 4), 4)})}

    c5 = neighborhood_complex(build_graph(5, 2, (2, 2)))
    assert c5.f_vector() == [5, 5]
    # each vertex lies on exactly two edges: a single cycle
    assert all(sum(v in e for e in c5.facets) == 2 for v in c5.vertices)

    k2 = neighborhood_complex(_graph_from_edges(2, [(0, 1)]))
    assert k2.f_vector() == [2]
    assert len(neighborhood_complex(_graph_from_edges(3, []))) == 0


@pytest.mark.parametrize("n,k,s", [(6, 2, (2, 1)), (7, 3, (2, 2, 1)), (7, 2, (3, 2))])
def test_neighbourhood_complex_definition(n, k, s):
    g = build_graph(n, k, s)
    c = neighborhood_complex(g)
    # simplices are exactly the vertex sets with a common neighbour
    expected = set()
    for v in range(g.num_vertices):
        nb = g.neighbourhood(v)
        for r in range(1, len(nb) + 1):
            expected.update(combinations(nb, r))
    assert c.simplices == expected


# -- posets ------------------------------------------------------------------------------

def test_poset_axioms_are_checked():
    with pytest.raises(ParameterError):
        Poset([0, 1], leq=lambda a, b: True)          # not antisymmetric
    with pytest.raises(ParameterError):
        Poset([0, 1, 2], leq=lambda a, b: a == b or (a, b) in {(0, 1), (1, 2)})  # not transitive
    with pytest.raises(ParameterError):
        Poset([0], leq=lambda a, b: False)             # not reflexive


def test_poset_basics():
    p = _chain_poset(3)
    assert p.covers == ((0, 1), (1, 2))
    assert p.minimum() == 0 and p.maximum() == 2
    q = _antichain(2)
    assert q.minimum() is None and q.covers == ()
    assert q.minimal() == [0, 1] == q.maximal()


def test_pair_poset_examples():
    p = build_pair_poset(4, 2, (2, 1))
    assert set(p.elements) == {PairElement.of((1, 3), (2, 4)), PairElement.of((2, 4), (1, 3))}
    assert p.covers == ()

    q = build_pair_poset(4, 2, (2, 2))
    mins = {q.elements[i] for i in q.minimal()}
    assert mins == {PairElement.of((1, 3), (2, 4)), PairElement.of((2, 4), (1, 3))}

    assert len(build_pair_poset(3, 2, (2, 1))) == 0


@pytest.mark.parametrize("n,k,s", [(5, 2, (2, 1)), (5, 2, (2, 2)), (6, 2, (3, 1)), (6, 3, (2, 2, 1))])
def test_pair_poset_matches_brute_force(n, k, s):
    p = build_pair_poset(n, k, s)
    brute = brute_pair_poset(n, k, s)
    assert {(e.A, e.B) for e in p.elements} == set(brute)
    for i, x in enumerate(p.elements):
        for j, y in enumerate(p.elements):
            assert p.leq(i, j) == pair_leq((x.A, x.B), (y.A, y.B))


def test_pair_poset_cap():
    with pytest.raises(ResourceError):
        build_pair_poset(7, 2, (2, 1), max_elements=100)


def test_hom_poset_small():
    k2 = build_hom_poset(_graph_from_edges(2, [(0, 1)]))
    assert {(tuple(e.A), tuple(e.B)) for e in k2.elements} == {((0,), (1,)), ((1,), (0,))}
    assert len(build_hom_poset(_graph_from_edges(3, []))) == 0


def test_hom_poset_on_five_cycle():
    g = build_graph(5, 2, (2, 2))
    h = build_hom_poset(g)
    for e in h.elements:
        sizes = sorted((len(e.A), len(e.B)))
        assert sizes in ([1, 1], [1, 2])
        if sizes == [1, 2]:
            (v,), pair = (e.A, e.B) if len(e.A) == 1 else (e.B, e.A)
            assert set(pair) == set(g.neighbourhood(v))
    # every complete bipartite pair appears
    expected = 0
    for a in range(1, 1 << 5):
        for b in range(1, 1 << 5):
            if a & b:
                continue
            A = [i for i in range(5) if a >> i & 1]
            B = [i for i in range(5) if b >> i & 1]
            expected += all(g.adjacent(x, y) for x in A for y in B)
    assert len(h) == expected


# -- order complexes ---------------------------------------------------------------------

def test_order_complex_small():
    edge = order_complex(_chain_poset(2))
    assert edge.simplices == {(0,), (1,), (0, 1)}
    assert order_complex(_antichain(2)).f_vector() == [2]
    h = reduced_homology(order_complex(build_pair_poset(4, 2, (2, 1))))
    assert h.sphere_dim == 0


@pytest.mark.parametrize("n,k,s", [(5, 2, (2, 1)), (5, 2, (2, 2)), (6, 2, (2, 1)), (6, 2, (3, 1))])
def test_chain_count_matches_recursive_oracle(n, k, s):
    p = build_pair_poset(n, k, s)
    c = order_complex(p)
    pairs = [(e.A, e.B) for e in p.elements]
    assert len(c) == count_chains(pairs, pair_leq)
    # every simplex is a chain in the poset order
    for chain in iter_chains(p):
        assert all(p.lt(a, b) for a, b in zip(chain, chain[1:]))


def test_order_complex_cap_is_checked_before_enumeration():
    p = build_pair_poset(6, 2, (2, 1))
    with pytest.raises(ResourceError):
        order_complex(p, max_simplices=500)
