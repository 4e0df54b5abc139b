import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualbimod.bimodule import compose, construct, direct_sum, tensor
from dualbimod.cells import build_catalog
from dualbimod.decomposition import (
    decompose,
    decompose_sequential,
    idempotent_summand_oracle,
    identify,
    is_isomorphic,
    multiplicity,
    peel,
    random_basis_change,
    summand_test,
)
from dualbimod.labels import Band, M, N, ProjInj, Regular, S, W
from dualbimod.linalg import Mat, is_invertible
from dualbimod.pencil import predict_multiplicities

CATALOG3 = list(build_catalog(3))
BANDS = [Band(1, 2), Band(2, 3), Band(1, -2), Band(3, 1), Band(2, "1/2")]
ALL = CATALOG3 + BANDS
labels = st.sampled_from(ALL)


def test_m0_square():
    assert Counter(decompose(tensor(construct(M(0)), construct(M(0)))).labels) == Counter([ProjInj, W(0)])


def test_zero():
    res = decompose(direct_sum())
    assert res.labels == [] and res.residual is None


def test_shuffled_sum():
    X = direct_sum(construct(W(2)), construct(S(1)), construct(ProjInj))
    Y, _ = random_basis_change(X, random.Random(7))
    assert Counter(decompose(Y).labels) == Counter([W(2), S(1), ProjInj])


def test_identify_examples():
    assert identify(construct(Band(2, 3))) == Band(2, 3)
    Y, _ = random_basis_change(construct(M(1)), random.Random(3))
    assert identify(Y) == M(1)
    assert identify(direct_sum(construct(M(0)), construct(M(0)))) is None


def test_isomorphism_examples():
    f = is_isomorphic(construct(M(1)), construct(M(1)))
    assert f is not None and f.is_bimodule_map() and is_invertible(f.matrix)
    assert is_isomorphic(construct(M(1)), construct(N(1))) is None
    assert is_isomorphic(construct(S(1)), construct(N(1))) is None  # same dim, different shape


def test_summand_examples():
    M1, W1 = construct(M(1)), construct(W(1))
    assert summand_test(M1, direct_sum(M1, W1))
    assert summand_test(construct(ProjInj), tensor(construct(M(0)), construct(M(0))))
    assert not summand_test(M1, tensor(W1, W1))
    assert not summand_test(construct(Band(1, 2)), construct(Band(2, 2)))


def test_peel_examples():
    T = tensor(construct(M(0)), construct(M(0)))
    p = peel(construct(W(0)), T)
    assert is_isomorphic(p.complement, construct(ProjInj)) is not None
    A = construct(S(2))
    assert peel(A, A).complement.dim == 0
    p = peel(construct(Regular), direct_sum(construct(Regular), construct(M(1))))
    assert is_isomorphic(p.complement, construct(M(1))) is not None


def test_peel_dimension_drops():
    X = direct_sum(construct(M(1)), construct(M(1)), construct(W(0)))
    p = peel(construct(M(1)), X)
    assert p.complement.dim == X.dim - construct(M(1)).dim * len(p.copies)
    assert len(p.copies) == 2


@given(labels, st.integers(0, 10**6))
def test_round_trip_single(label, seed):
    Y, _ = random_basis_change(construct(label), random.Random(seed))
    res = decompose(Y)
    assert res.residual is None and res.labels == [label]


@given(labels, labels)
def test_additivity(a, b):
    A, B = construct(a), construct(b)
    whole = Counter(decompose(direct_sum(A, B)).labels)
    assert whole == Counter(decompose(A).labels) + Counter(decompose(B).labels)


@given(st.lists(labels, min_size=1, max_size=3), st.integers(0, 10**6))
def test_witnesses(pick, seed):
    X, _ = random_basis_change(direct_sum(*(construct(x) for x in pick)), random.Random(seed))
    res = decompose(X)
    assert res.residual is None
    total = Mat.zeros(X.dim, X.dim)
    for s in res.summands:
        assert s.injection.is_bimodule_map() and s.projection.is_bimodule_map()
        assert compose(s.projection, s.injection).matrix == Mat.identity(s.injection.src.dim)
        total = total + compose(s.injection, s.projection).matrix
    assert is_invertible(total)


@settings(max_examples=8)
@given(st.lists(labels, min_size=1, max_size=2), st.integers(0, 10**6))
def test_sequential_agrees(pick, seed):
    X, _ = random_basis_change(direct_sum(*(construct(x) for x in pick)), random.Random(seed))
    assert Counter(decompose_sequential(X).labels) == Counter(pick)


@given(st.lists(labels, min_size=1, max_size=4), st.integers(0, 10**6))
def test_pencil_prediction(pick, seed):
    X, _ = random_basis_change(direct_sum(*(construct(x) for x in pick)), random.Random(seed))
    assert predict_multiplicities(X) == Counter(pick)


@given(labels, st.lists(labels, max_size=3))
def test_multiplicity_counts_copies(c, rest):
    X = direct_sum(*(construct(x) for x in [c, c] + rest))
    assert multiplicity(construct(c), X) == 2 + rest.count(c)


SMALL = [x for x in CATALOG3 if x.dim <= 4]


@pytest.mark.parametrize("a", SMALL, ids=str)
def test_summand_against_idempotents(a):
    C = construct(a)
    for b in SMALL:
        X = construct(b)
        want = idempotent_summand_oracle(C, X)
        assert summand_test(C, X, "trace") == want
        assert summand_test(C, X, "span") == want


def test_idempotent_oracle_on_sums():
    X = direct_sum(construct(W(0)), construct(S(0)))
    assert idempotent_summand_oracle(construct(W(0)), X)
    assert idempotent_summand_oracle(construct(S(0)), X)
    assert not idempotent_summand_oracle(construct(N(0)), X)
