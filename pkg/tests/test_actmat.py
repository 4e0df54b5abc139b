import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dualbimod.actmat import (
    RANK1_CLASS,
    RANK2_CLASS,
    TABLE,
    canonical,
    enumerate_root_matrices,
    is_root,
    lemma_equalities,
    lemma_zero_transfer,
    naive_roots,
    orbit,
    permute,
    quadruple_search,
    table_quadruples,
    verify_proposition,
)

PRINTED_N2 = [((2, 2), (2, 2)), ((3, 3), (1, 1)), ((3, 1), (3, 1)), ((2, 4), (1, 2)), ((2, 1), (4, 2))]
PRINTED_N3 = [((2, 1, 1), (2, 1, 1), (2, 1, 1)), ((2, 2, 2), (1, 1, 1), (1, 1, 1))]
ONES4 = tuple((1, 1, 1, 1) for _ in range(4))


def test_n1():
    assert enumerate_root_matrices(1) == (((4,),),)


def test_n2_printed_matrices_are_roots():
    assert all(is_root(F) for F in PRINTED_N2)
    assert {canonical(F) for F in PRINTED_N2} == set(enumerate_root_matrices(2))


def test_n2_count():
    assert len(enumerate_root_matrices(2)) == 5


def test_printed_n2_pair_is_conjugate():
    # swapping both rows and columns carries one printed matrix to the other
    assert permute(((2, 4), (1, 2)), (1, 0)) == ((2, 1), (4, 2))


def test_n3_n4():
    assert {canonical(F) for F in PRINTED_N3} == set(enumerate_root_matrices(3))
    assert len(enumerate_root_matrices(3)) == 2
    assert enumerate_root_matrices(4) == (ONES4,)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_naive_oracle(n):
    union = set().union(*(orbit(F) for F in enumerate_root_matrices(n)))
    assert naive_roots(n) == union


@pytest.mark.parametrize("n", [1, 2, 3])
def test_entry_bound_is_not_binding(n):
    assert enumerate_root_matrices(n, 6) == enumerate_root_matrices(n)


def test_bad_n():
    with pytest.raises(ValueError):
        enumerate_root_matrices(5)
    with pytest.raises(ValueError):
        quadruple_search(((1, 0), (0, 1)))


def test_quadruple_examples():
    assert quadruple_search(((4,),)) == [RANK1_CLASS]
    assert quadruple_search(((2, 2), (2, 2))) == [RANK2_CLASS]
    assert quadruple_search(ONES4) == []
    assert quadruple_search(((3, 3), (1, 1))) == []
    for F in enumerate_root_matrices(3):
        assert quadruple_search(F) == []


def test_rank2_class_matches_statement():
    W, S, N, M = RANK2_CLASS
    assert N == W and M == S
    assert {W, S} == {((1, 1), (0, 0)), ((0, 0), (1, 1))}


def _as_dict(c):
    return dict(zip("WSNM", c))


@pytest.mark.parametrize("F", [F for n in range(1, 5) for F in enumerate_root_matrices(n)], ids=str)
def test_candidates_obey_lemmas(F):
    for q in table_quadruples(F):
        assert lemma_equalities(q)
        for (a, b), c in TABLE.items():
            M = [[sum(q[a][i][k] * q[b][k][j] for k in range(len(F))) for j in range(len(F))] for i in range(len(F))]
            assert tuple(map(tuple, M)) == q[c]
    for c in quadruple_search(F):
        assert lemma_zero_transfer(_as_dict(c))


@given(st.sampled_from([F for n in (2, 3) for F in enumerate_root_matrices(n)]), st.data())
def test_search_is_permutation_invariant(F, data):
    p = data.draw(st.permutations(range(len(F))))
    assert quadruple_search(permute(F, p)) == quadruple_search(F)


def test_proposition():
    r = verify_proposition()
    assert r["status"] == "pass" and r["survivor_count"] == 2
    assert r["lemma_equalities_hold"]
