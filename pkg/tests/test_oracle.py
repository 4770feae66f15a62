import itertools

import pytest

from qfdef import (
    BudgetExceededError,
    FALSE,
    Graph,
    Relation,
    Subisomorphism,
    enumerate_subisomorphisms,
    enumerate_subuniverses,
    gen_random_graph,
    graph_oracle_definable,
    graph_star,
    merging_decide,
    oracle_definable,
    oracle_definable_raw,
    splitting_decide,
)
from qfdef.algebra import Algebra
from qfdef.oracle import graph_from_json, graph_to_json


def test_subuniverses_of_diamond(diamond):
    subs = set(enumerate_subuniverses(diamond, 2))
    for expected in [{0, 3}, {1, 3}, {0, 1}, {0, 1, 2, 3}]:
        assert frozenset(expected) in subs
    # ordered by size then elements
    listed = enumerate_subuniverses(diamond, 2)
    assert listed == sorted(listed, key=lambda s: (len(s), sorted(s)))


def test_subuniverses_trivia(diamond):
    one = Algebra(1, [("f", 1, [0])])
    assert enumerate_subuniverses(one, 1) == [frozenset({0})]
    assert frozenset(range(4)) in enumerate_subuniverses(diamond, 4)


def test_enumerated_maps_are_valid_and_closed(diamond):
    maps = list(enumerate_subisomorphisms(diamond, 2))
    assert all(g.is_valid(diamond) for g in maps)
    # the inverse of every map is enumerated too
    assert all(g.inverse() in maps for g in maps)
    # compositions with aligned domains are enumerated too
    for g in maps:
        for h in maps:
            if set(g.image) == h.domain_set:
                comp = Subisomorphism(g.domain, h.map_tuple(g.image))
                assert comp in maps
    # identities on every enumerated subuniverse are present
    for s in enumerate_subuniverses(diamond, 2):
        dom = tuple(sorted(s))
        assert Subisomorphism(dom, dom) in maps


def test_bottom_to_u_map_is_enumerated(diamond):
    maps = list(enumerate_subisomorphisms(diamond, 2))
    assert Subisomorphism((0, 3), (1, 3)) in maps


def test_one_element_algebra_single_map():
    one = Algebra(1, [("f", 1, [0])])
    assert list(enumerate_subisomorphisms(one, 1)) == [Subisomorphism((0,), (0,))]


def test_oracle_on_diamond(diamond, diamond_order, diamond_rprime):
    assert oracle_definable(diamond, diamond_order).is_definable
    neg = oracle_definable(diamond, diamond_rprime)
    assert not neg.is_definable
    assert neg.witness_in in diamond_rprime.tuples
    assert neg.witness_out not in diamond_rprime.tuples
    assert neg.gamma.map_tuple(neg.witness_in) == neg.witness_out
    assert neg.gamma.is_valid(diamond)


def test_oracle_empty_relation(diamond):
    d = oracle_definable(diamond, Relation.of(2, []))
    assert d.is_definable and d.formula == FALSE


def test_oracle_raw_agrees_with_decomposed():
    from conftest import random_instance

    for i in range(20):
        alg, rel = random_instance(i, max_size=4)
        assert (
            oracle_definable(alg, rel).is_definable
            == oracle_definable_raw(alg, rel).is_definable
        ), i


def test_budget_guard(diamond, diamond_order):
    with pytest.raises(BudgetExceededError):
        oracle_definable(diamond, diamond_order, budget=10)


def test_graph_validation():
    with pytest.raises(ValueError, match="loop"):
        Graph.of(3, [(1, 1)])
    g = Graph.of(3, [(2, 0)])
    assert g.has_edge(0, 2) and g.has_edge(2, 0)
    assert not g.has_edge(0, 1)


def test_graph_json_round_trip():
    g = Graph.of(4, [(0, 1), (2, 3)])
    assert graph_from_json(graph_to_json(g)) == g


def test_graph_star_tables():
    g = Graph.of(2, [(0, 1)])
    alg, emb = graph_star(g)
    assert alg.size == 4
    assert (emb.zero, emb.one) == (2, 3)
    f = alg.op("f")
    assert f.value((0, 1)) == emb.one and f.value((1, 0)) == emb.one
    assert f.value((0, 0)) == emb.zero  # vertices are not self-adjacent
    assert f.value((emb.zero, emb.zero)) == emb.one
    assert f.value((emb.one, emb.one)) == emb.one
    assert f.value((emb.zero, emb.one)) == emb.zero


def test_graph_oracle_single_edge():
    g = Graph.of(2, [(0, 1)])
    rel = Relation.of(2, [(0, 1), (1, 0)])
    assert graph_oracle_definable(g, rel)


def test_graph_oracle_empty_graph_symmetric_target():
    g = Graph.of(3, [])
    # closed under all injections: the full repetition-free pair set
    rel = Relation.of(2, [(a, b) for a in range(3) for b in range(3) if a != b])
    assert graph_oracle_definable(g, rel)
    # a single pair is moved around by injections, hence not definable
    assert not graph_oracle_definable(g, Relation.of(2, [(0, 1)]))


def test_graph_reduction_agrees_with_deciders():
    import random

    rng = random.Random(4242)
    for i in range(15):
        m = rng.randint(2, 4)
        g = gen_random_graph(m, edge_prob=0.5, seed=i)
        k = rng.randint(1, 2)
        space = list(itertools.product(range(m), repeat=k))
        rel = Relation.of(k, rng.sample(space, rng.randint(0, len(space))))
        expected = graph_oracle_definable(g, rel)
        star, _ = graph_star(g)
        assert merging_decide(star, rel).is_definable == expected, i
        assert splitting_decide(star, rel).is_definable == expected, i
