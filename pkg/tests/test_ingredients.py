from collections import Counter

import pytest

from heptad.errors import NotAdmissible, NotSplittable, UnsatisfiableWithinBudget
from heptad.hosts import HostSpec
from heptad.ingredients import (c7_complete, c7_multipartite, difference_triples, k3k5_even,
                                one_factor_split, pbd35, sts, walecki)
from heptad.search import exact_cover_small
from heptad.verifier import verify_undirected

from conftest import as_pairs, oracle_pairs_ok


@pytest.mark.parametrize("n,count", [(3, 1), (7, 7), (9, 12), (13, 26), (15, 35)])
def test_sts_counts_and_exactness(n, count):
    blocks = sts(n)
    assert len(blocks) == count
    assert oracle_pairs_ok(n, as_pairs(blocks))


@pytest.mark.parametrize("n", [5, 6, 11, 2])
def test_sts_wrong_residue(n):
    with pytest.raises(NotAdmissible):
        sts(n)


def test_pbd35_small_cases():
    assert [(b.kind, b.labels) for b in pbd35(5)] == [("K5", (0, 1, 2, 3, 4))]
    assert Counter(b.kind for b in pbd35(9)) == {"K3": 12}


@pytest.mark.parametrize("n", [11, 17, 23, 29])
def test_pbd35_hole_design(n):
    blocks = pbd35(n)
    triangles = (n * (n - 1) // 2 - 10) // 3
    assert Counter(b.kind for b in blocks) == {"K5": 1, "K3": triangles}
    assert oracle_pairs_ok(n, as_pairs(blocks))


def test_pbd35_11_matches_exact_cover_oracle():
    oracle = exact_cover_small(HostSpec.complete(11), ("K3", "K5"))
    assert Counter(b.kind for b in oracle) == Counter(b.kind for b in pbd35(11))
    assert verify_undirected(oracle, HostSpec.complete(11)).ok


def test_pbd35_even_rejected():
    with pytest.raises(NotAdmissible):
        pbd35(10)


def test_k3k5_even_6():
    blocks, factor = k3k5_even(6)
    assert Counter(b.kind for b in blocks) == {"K3": 4} and len(factor) == 3
    assert factor.covers(range(6))
    assert oracle_pairs_ok(6, as_pairs(blocks), missing=factor.edges)


def test_k3k5_even_10():
    blocks, factor = k3k5_even(10)
    assert Counter(b.kind for b in blocks) == {"K5": 1, "K3": 10} and len(factor) == 5
    assert oracle_pairs_ok(10, as_pairs(blocks), missing=factor.edges)


@pytest.mark.parametrize("n", [4, 7, 2])
def test_k3k5_even_rejected(n):
    with pytest.raises(NotAdmissible):
        k3k5_even(n)


def test_walecki_7():
    cycles = walecki(7)
    assert len(cycles) == 3
    assert oracle_pairs_ok(7, [("C7", c) for c in cycles])


@pytest.mark.parametrize("v,count", [(7, 3), (15, 15), (21, 30), (29, 58), (43, 129)])
def test_c7_complete(v, count):
    cycles = c7_complete(v)
    assert len(cycles) == count
    assert oracle_pairs_ok(v, as_pairs(cycles))


@pytest.mark.parametrize("v", [8, 14, 6, 22])
def test_c7_complete_rejected(v):
    with pytest.raises(NotAdmissible):
        c7_complete(v)


@pytest.mark.parametrize("n,count", [(3, 21), (5, 70), (7, 147), (9, 252)])
def test_c7_multipartite(n, count):
    cycles = c7_multipartite(n)
    assert len(cycles) == count
    assert oracle_pairs_ok(7 * n, as_pairs(cycles), part=lambda x: x // 7)


@pytest.mark.parametrize("n", [2, 4, 1])
def test_c7_multipartite_rejected(n):
    with pytest.raises(NotAdmissible):
        c7_multipartite(n)


def test_difference_triples_examples():
    assert difference_triples({1, 2, 3}, 9) == [(1, 2, 3)]
    assert sorted(difference_triples({1, 3, 4, 2, 5, 7}, 15)) == [(1, 3, 4), (2, 5, 7)]


def test_difference_triples_sums():
    D = set(range(1, 13))
    for a, b, c in difference_triples(D, 25):
        assert a + b == c or a + b + c == 25
    assert sorted(x for t in difference_triples(D, 25) for x in t) == sorted(D)


def test_difference_triples_unsatisfiable():
    with pytest.raises(UnsatisfiableWithinBudget):
        difference_triples({1, 2, 4}, 12)


def test_one_factor_split_half():
    (f,) = one_factor_split(3, 6)
    assert f.edges == ((0, 3), (1, 4), (2, 5))


def test_one_factor_split_alternating():
    f, g = one_factor_split(1, 6)
    assert f.covers(range(6)) and g.covers(range(6))
    assert set(f.edges) | set(g.edges) == {tuple(sorted((x, (x + 1) % 6))) for x in range(6)}
    assert not set(f.edges) & set(g.edges)


def test_one_factor_split_odd_cycles():
    with pytest.raises(NotSplittable):
        one_factor_split(2, 6)
