import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from dualbimod.bimodule import (
    Bimodule,
    BimoduleError,
    Morphism,
    associator,
    compose,
    construct,
    direct_sum,
    dual,
    hom_left_regular,
    hom_space,
    identity,
    quotient_by_span,
    submodule,
    tensor,
    tensor_morphisms,
    tensor_over_D,
    unitor_left,
    unitor_right,
    zero_map,
)
from dualbimod.cells import build_catalog
from dualbimod.decomposition import is_isomorphic, random_basis_change
from dualbimod.labels import Band, LabelError, M, N, ProjInj, Regular, S, W, parse_label
from dualbimod.linalg import ONE, Mat, inverse, is_invertible
from dualbimod.structures import phi

CATALOG3 = list(build_catalog(3))
SMALL = [x for x in CATALOG3 if x.dim <= 5] + [Band(1, 2), Band(2, -1)]
labels = st.sampled_from(SMALL)


def test_regular():
    D = construct(Regular)
    assert D.dim == 2
    assert D.left == Mat.from_rows([[0, 0], [1, 0]]) and D.right == D.left


@pytest.mark.parametrize("k", range(5))
def test_string_dims(k):
    assert construct(M(k)).dim == 2 * k + 3
    assert construct(N(k)).dim == construct(S(k)).dim == 2 * k + 2
    assert construct(W(k)).dim == 2 * k + 1


def test_other_dims():
    assert construct(M(0)).dim == 3
    assert construct(W(1)).dim == 3 and construct(S(2)).dim == 6
    assert construct(ProjInj).dim == 4
    assert construct(Band(3, "2/5")).dim == 6


@given(labels)
def test_constructs_are_valid(label):
    B = construct(label)
    B.check()
    assert B.dim == label.dim


def test_label_grammar():
    assert parse_label("B:2:3/1") == Band(2, 3)
    assert parse_label("DxD") == ProjInj and parse_label("D") == Regular
    for bad in ("X:9", "B:2:0", "M:-1", "B:2:1/0", ""):
        with pytest.raises(LabelError):
            parse_label(bad)


def test_bad_band_eigenvalue():
    with pytest.raises(LabelError):
        Band(2, 0)


def test_invalid_actions_rejected():
    with pytest.raises(BimoduleError):
        Bimodule(Mat.identity(2), Mat.zeros(2, 2)).check()  # L^2 != 0
    L = Mat.from_rows([[0, 0, 0], [1, 0, 0], [0, 0, 0]])
    R = Mat.from_rows([[0, 0, 0], [0, 0, 0], [0, 1, 0]])
    with pytest.raises(BimoduleError):
        Bimodule(L, R).check()  # LR != RL


def test_direct_sum_examples():
    A = construct(M(1))
    assert direct_sum(A, direct_sum()).dim == A.dim
    DD = direct_sum(construct(Regular), construct(Regular))
    assert DD.dim == 4 and DD.left[1, 0] == 1 and DD.left[3, 2] == 1 and DD.left[3, 0] == 0
    assert direct_sum(construct(M(1)), construct(W(1))).dim == 8


def test_quotients_of_m1():
    M1 = construct(M(1))
    Q, _ = quotient_by_span(M1, [{4: ONE}])
    assert is_isomorphic(Q, construct(N(1))) is not None
    Q, p = quotient_by_span(M1, [])
    assert Q.dim == 5 and p.matrix == Mat.identity(5)
    Q, _ = quotient_by_span(M1, [{0: ONE}, {4: ONE}])
    assert is_isomorphic(Q, construct(W(1))) is not None


def test_quotient_rejects_non_submodule():
    with pytest.raises(BimoduleError):
        quotient_by_span(construct(M(1)), [{1: ONE}])  # m_2 generates more


def test_kernel_composition_is_zero():
    M1 = construct(M(1))
    sub, inc = submodule(M1, [{4: ONE}])
    _, proj = quotient_by_span(M1, [{4: ONE}])
    assert compose(proj, inc).is_zero()


def test_tensor_examples():
    assert is_isomorphic(tensor(construct(Regular), construct(M(1))), construct(M(1))) is not None
    assert tensor(construct(M(0)), construct(M(0))).dim == 5


@given(labels, labels)
def test_tensor_dim_matches_relation_rank(a, b):
    A, B = construct(a), construct(b)
    assert tensor(A, B).dim == oracles.tensor_dim(A, B)


def test_tensor_w1_s1_dim():
    assert tensor(construct(W(1)), construct(S(1))).dim == oracles.tensor_dim(construct(W(1)), construct(S(1)))


def test_tensor_morphism_examples():
    M1 = construct(M(1))
    idt = tensor_morphisms(identity(M1), identity(M1))
    assert idt.matrix == Mat.identity(idt.src.dim)
    assert tensor_morphisms(identity(M1), zero_map(M1, M1)).is_zero()
    # phi_1 (x) id followed by the left unitor sends m_2 (x) m_1 to 1.m_1 = m_1
    D = construct(Regular)
    f = compose(unitor_left(M1), tensor_morphisms(phi(1), identity(M1)))
    t = tensor_over_D(M1, M1)
    assert f.matrix.apply_sparse(t.pure_basis(1, 0)) == {0: ONE}
    assert f.dst is M1 and unitor_left(M1).src is tensor(D, M1)


def test_unitor_examples():
    D = construct(Regular)
    assert is_invertible(unitor_left(D).matrix)
    M1 = construct(M(1))
    t = tensor_over_D(M1, D)
    assert unitor_right(M1).matrix.apply_sparse(t.pure_basis(0, 0)) == {0: ONE}
    a = associator(D, D, D)
    assert compose(Morphism(a.dst, a.src, inverse(a.matrix)), a).matrix == Mat.identity(a.src.dim)


@given(labels)
def test_unit_laws(label):
    X = construct(label)
    for u in (unitor_left(X), unitor_right(X)):
        assert u.is_bimodule_map() and is_invertible(u.matrix)


@given(labels, labels, labels)
def test_associator_is_invertible_map(a, b, c):
    assoc = associator(construct(a), construct(b), construct(c))
    assert assoc.is_bimodule_map()
    assert assoc.src.dim == assoc.dst.dim and is_invertible(assoc.matrix)


@given(st.sampled_from([x for x in SMALL if x.dim <= 4]), st.data())
def test_functoriality(label, data):
    X = construct(label)
    homs = hom_space(X, X)
    pick = lambda: data.draw(st.sampled_from(homs))  # noqa: E731
    f, g, f2, g2 = pick(), pick(), pick(), pick()
    lhs = tensor_morphisms(compose(g, f), compose(g2, f2))
    rhs = compose(tensor_morphisms(g, g2), tensor_morphisms(f, f2))
    assert lhs.matrix == rhs.matrix


def test_hom_examples():
    assert len(hom_space(construct(Regular), construct(Regular))) == 2
    assert len(hom_space(construct(ProjInj), construct(ProjInj))) == 4
    assert hom_space(construct(M(1)), direct_sum()) == []


@given(labels, labels)
def test_hom_dim_matches_oracle(a, b):
    A, B = construct(a), construct(b)
    basis = hom_space(A, B)
    assert len(basis) == oracles.hom_dim(A, B)
    assert all(f.is_bimodule_map() for f in basis)


@given(labels, labels, st.integers(0, 10**6))
def test_hom_dim_basis_independent(a, b, seed):
    rng = random.Random(seed)
    A, _ = random_basis_change(construct(a), rng)
    B, _ = random_basis_change(construct(b), rng)
    assert len(hom_space(A, B)) == len(hom_space(construct(a), construct(b)))


def test_dual_examples():
    assert is_isomorphic(dual(construct(Regular)), construct(Regular)) is not None
    assert is_isomorphic(dual(dual(construct(M(1)))), construct(M(1))) is not None
    assert is_isomorphic(dual(construct(S(1))), construct(N(1))) is not None


@given(labels)
def test_dual_involution(label):
    X = construct(label)
    assert is_isomorphic(dual(dual(X)), X) is not None


@pytest.mark.parametrize("k", range(5))
def test_hom_left_regular_of_s(k):
    H = hom_left_regular(construct(S(k)))
    assert H.dim == 2 * (k + 1)
    assert is_isomorphic(H, dual(construct(S(k)))) is not None
    assert is_isomorphic(H, construct(N(k))) is not None


def test_json_round_trip():
    X = construct(Band(2, "3/7"))
    assert Bimodule.from_json(X.to_json()).left == X.left
