import itertools

import pytest

from qfdef import (
    Algebra,
    IsoTypeCache,
    Subisomorphism,
    enumerate_subisomorphisms,
    gen_random_algebra,
    iso_type,
    sg,
    subiso_from_signatures,
)
from qfdef.isotype import iso_type_terms

# frozen canonical partition for the diamond lattice on (u, u', bottom)
WORKED_PARTITION = (
    (0, 3, 12, 14, 18, 21, 24),
    (1, 7, 16, 17, 19, 22, 25),
    (2, 4, 5, 6, 8, 9, 10, 11, 20, 23, 26),
    (13, 15, 27, 28, 29, 30, 31, 32, 33, 34),
)


def test_worked_example_partition(diamond):
    sig = iso_type(diamond, (1, 2, 0))
    assert sig.partition == WORKED_PARTITION
    assert sig.universe == (1, 2, 0, 3)
    assert sig.depth == 2


def test_swapped_tuple_same_partition(diamond):
    sig = iso_type(diamond, (2, 1, 0))
    assert sig.partition == WORKED_PARTITION
    assert sig.universe == (2, 1, 0, 3)


def test_one_element_algebra():
    alg = Algebra(1, [("f", 1, [0])])
    sig = iso_type(alg, (0,))
    assert sig.partition == ((0, 1),)
    assert sig.universe == (0,)


def test_universe_is_generated_subuniverse(diamond):
    for a in itertools.permutations(range(4), 2):
        sig = iso_type(diamond, a)
        assert frozenset(sig.universe) == sg(diamond, a)
        assert len(set(sig.universe)) == len(sig.universe)


def test_initial_blocks_follow_equality_pattern(diamond):
    sig = iso_type(diamond, (1, 1, 0))
    first_two = [tuple(i for i in block if i < 3) for block in sig.partition]
    assert [b for b in first_two if b] == [(0, 1), (2,)]


def test_determinism(diamond):
    a = (1, 2, 0)
    assert iso_type(diamond, a) == iso_type(diamond, a)


def test_empty_tuple_rejected(diamond):
    with pytest.raises(ValueError):
        iso_type(diamond, ())


def test_trace_terms_coordinate_with_values(diamond):
    from qfdef import eval_term, parse_term

    sig, terms = iso_type_terms(diamond, (1, 2, 0))
    assert terms[:3] == ("x0", "x1", "x2")
    assert len(terms) == 35
    # every recorded term evaluates to the value at its index
    values = {}
    for block in sig.partition:
        for i in block:
            values[i] = block[0]
    a = (1, 2, 0)
    for i, text in enumerate(terms):
        assert eval_term(diamond, parse_term(text), a) == eval_term(
            diamond, parse_term(terms[values[i]]), a
        )


def test_cache_returns_identical_signatures(diamond):
    cache = IsoTypeCache(diamond)
    assert cache.get((1, 2)) is cache.get((1, 2))
    assert cache.get((1, 2)) == iso_type(diamond, (1, 2))


def test_subiso_from_worked_example(diamond):
    a, b = (1, 2, 0), (2, 1, 0)
    gamma = subiso_from_signatures(diamond, a, iso_type(diamond, a), b, iso_type(diamond, b))
    assert gamma is not None
    assert gamma.domain == (1, 2, 0, 3) and gamma.image == (2, 1, 0, 3)
    assert gamma.map_tuple(a) == b
    assert gamma.is_valid(diamond)


def test_subiso_identity(diamond):
    a = (1, 2)
    sig = iso_type(diamond, a)
    gamma = subiso_from_signatures(diamond, a, sig, a, sig)
    assert gamma is not None
    assert all(gamma.apply(x) == x for x in gamma.domain)


def test_subiso_absent_when_universes_differ(diamond):
    # sg(u, u') has four elements, sg(u, top) only two
    a, b = (1, 2), (1, 3)
    assert len(sg(diamond, a)) == 4 and len(sg(diamond, b)) == 2
    gamma = subiso_from_signatures(diamond, a, iso_type(diamond, a), b, iso_type(diamond, b))
    assert gamma is None


def test_subisomorphism_validity_scan(diamond):
    assert Subisomorphism((0, 3), (1, 3)).is_valid(diamond)
    # u <-> u' swap extends to the whole diamond
    assert Subisomorphism((0, 1, 2, 3), (0, 2, 1, 3)).is_valid(diamond)
    # bottom -> top alone is not closed/preserving
    assert not Subisomorphism((0, 1), (3, 1)).is_valid(diamond)
    with pytest.raises(ValueError, match="injective"):
        Subisomorphism((0, 1), (2, 2))


def test_inverse_round_trip(diamond):
    gamma = Subisomorphism((0, 3), (1, 3))
    inv = gamma.inverse()
    assert inv.apply(1) == 0 and inv.apply(3) == 3
    assert inv.is_valid(diamond)


def test_signature_equality_matches_oracle_isomorphism():
    # partitions coincide exactly when the exhaustive search finds a
    # subisomorphism carrying one tuple to the other
    for seed in range(6):
        alg = gen_random_algebra(3 + seed % 3, signature=(("f", 2),), seed=seed)
        maps = list(enumerate_subisomorphisms(alg, 3))
        tuples = list(itertools.permutations(range(alg.size), 2))
        sigs = {a: iso_type(alg, a).partition for a in tuples}
        for a in tuples:
            for b in tuples:
                connected = any(
                    all(x in g.domain_set for x in a) and g.map_tuple(a) == b for g in maps
                )
                assert connected == (sigs[a] == sigs[b]), (seed, a, b)
