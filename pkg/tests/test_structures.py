import pytest

from dualbimod.bimodule import (
    compose,
    construct,
    hom_space,
    identity,
    tensor,
    tensor_morphisms,
    tensor_over_D,
    zero_map,
)
from dualbimod.decomposition import is_isomorphic, multiplicity
from dualbimod.labels import Band, M, N, Regular, S, W
from dualbimod.linalg import ONE, Mat, Subspace, rank
from dualbimod.structures import (
    algebra_Wk,
    band_maps,
    check_cogood,
    check_good,
    coalgebra_Mk,
    cofactors_through,
    cokernel,
    comodule_Nk,
    duflo_summand_basis,
    factors_through,
    good_certificate,
    homs_mod_simple,
    iota,
    kernel,
    module_Sk,
    phi,
    pi,
    psi,
    sample_greatness,
    split,
    structure_report,
    verify_hom_lemma,
    whiskered_counit,
    whiskered_unit,
)

D = construct(Regular)


def col(f, j):
    return f.matrix.sparse_columns()[j]


def test_phi_formula():
    f = phi(1)
    assert col(f, 1) == {0: ONE} and col(f, 3) == {0: ONE}
    assert all(col(f, j) == {1: ONE} for j in (0, 2, 4))
    g = phi(0)
    assert col(g, 1) == {0: ONE} and col(g, 0) == col(g, 2) == {1: ONE}
    assert phi(3).is_bimodule_map()


def test_psi_formula():
    assert col(psi(1), 0) == {0: ONE, 2: ONE} and col(psi(1), 1) == {1: ONE}
    assert len(col(psi(2), 1)) == 2
    assert compose(zero_map(construct(W(1)), D), psi(1)).is_zero()


@pytest.mark.parametrize("k", range(5))
def test_factorization_chain(k):
    for l in range(k + 1):
        assert compose(phi(k), iota(l, k)).matrix == phi(l).matrix
        assert compose(pi(k, l), psi(k)).matrix == psi(l).matrix
    assert iota(k, k).matrix == Mat.identity(construct(M(k)).dim)


def test_bad_ranges():
    with pytest.raises(ValueError):
        iota(2, 1)
    with pytest.raises(ValueError):
        pi(1, 2)
    with pytest.raises(ValueError):
        band_maps(1)


def test_band_maps():
    a2, b2 = band_maps(2)
    assert rank(a2.matrix) == 2 and rank(b2.matrix) == 2
    Q, _ = cokernel(a2)
    assert is_isomorphic(Q, D) is not None
    _, b3 = band_maps(3)
    K, _ = kernel(b3)
    assert is_isomorphic(K, construct(Band(2, 1))) is not None


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("n", [2, 3])
def test_phi_through_beta(k, n):
    _, beta = band_maps(n)
    h = factors_through(phi(k), beta)
    assert h is not None and compose(beta, h).matrix == phi(k).matrix and h.is_bimodule_map()


def test_alpha_through_psi():
    """alpha_n = h o psi_k for some h: W_k -> B_n(1), for k <= 3 and n in {2, 3}."""
    missing = [(k, n) for k in (1, 2, 3) for n in (2, 3) if cofactors_through(band_maps(n)[0], psi(k)) is None]
    assert not missing


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("n", [2, 3])
def test_maps_w_to_band_are_radical(k, n):
    # every h: W_k -> B_n(1) has image inside the radical, so h o psi_k is never injective
    B = construct(Band(n, 1))
    rad = Subspace(B.left.sparse_columns() + B.right.sparse_columns(), B.dim)
    for h in hom_space(construct(W(k)), B):
        assert all(rad.contains(c) for c in h.matrix.sparse_columns())


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("n", [2, 3])
def test_psi_through_alpha(k, n):
    alpha, _ = band_maps(n)
    h = cofactors_through(psi(k), alpha)
    assert h is not None and compose(h, alpha).matrix == psi(k).matrix


def test_factors_through_zero():
    assert factors_through(identity(D), zero_map(D, D)) is None


@pytest.mark.parametrize("k", range(1, 5))
def test_homs_mod_simple(k):
    assert homs_mod_simple(construct(M(k)), D) == 1
    assert homs_mod_simple(D, construct(W(k))) == 1
    for shape in (W, S, N):
        assert homs_mod_simple(construct(shape(k)), D) == 0
    for shape in (M, S, N):
        assert homs_mod_simple(D, construct(shape(k))) == 0


@pytest.mark.parametrize("k", [1, 2, 3])
def test_hom_lemma(k):
    assert verify_hom_lemma(k)["status"] == "pass"


def test_split_examples():
    M1 = construct(M(1))
    cert = split(whiskered_counit(M1, phi(1)), "right")
    assert cert is not None and cert.verify()
    assert split(whiskered_unit(construct(W(1)), psi(1)), "left").verify()
    assert split(zero_map(D, construct(W(0))), "right") is None
    with pytest.raises(ValueError):
        split(identity(D), "up")


def test_certificate_image_k1():
    cert = good_certificate(1)
    t = tensor_over_D(construct(M(1)), construct(M(1)))
    quoted = [t.pure_basis(i - 1, j - 1) for i, j in [(2, 1), (2, 2), (3, 2), (4, 4), (5, 4)]]
    image = Subspace(cert.section_or_retraction.matrix.sparse_columns(), t.dim)
    assert image.dim == 5 and all(image.contains(v) for v in quoted)
    assert Subspace(duflo_summand_basis(1), t.dim).dim == 5


@pytest.mark.parametrize("k", [1, 2, 3])
def test_goodness(k):
    assert check_good(M(k), phi(k), [N(k), M(k)])
    assert check_cogood(W(k), psi(k), [W(k), S(k)])


def test_goodness_negative_controls():
    W1, N1 = construct(W(1)), construct(N(1))
    assert not any(check_good(W(1), f, [N(1), M(1)]) for f in hom_space(W1, D))
    assert not any(check_good(N(1), f, [N(1), M(1)]) for f in hom_space(N1, D))


def test_sample_greatness():
    r = sample_greatness(1, 3)
    assert r["status"] == "pass" and r["sampled"]
    by_name = {}
    for item in r["items"]:
        by_name.setdefault(item["candidate"], []).append(item)
    assert any(i["good"] and i["factors"] for i in by_name["M:2"])
    # the last candidate is the identity of D; multiplication by x is not good
    assert r["items"][-1] == {"candidate": "D", "good": True, "factors": True}
    assert not all(i["good"] for i in by_name["D"])
    assert not any(i["good"] for i in by_name["W:1"])


@pytest.mark.parametrize("k", range(1, 5))
def test_coalgebra(k):
    data = coalgebra_Mk(k)
    assert all(data.checks.values())
    assert data.counit.matrix == phi(k).matrix


def test_coalgebra_formula_k1():
    data = coalgebra_Mk(1)
    t = tensor_over_D(construct(M(1)), construct(M(1)))
    # delta(m_3) = m_3 (x) m_2, the same class as m_4 (x) m_3
    assert col(data.comultiplication, 2) == t.pure_basis(2, 1) == t.pure_basis(3, 2)


@pytest.mark.parametrize("k", range(1, 5))
def test_algebra(k):
    data = algebra_Wk(k)
    assert all(data.checks.values())
    t = tensor_over_D(construct(W(k)), construct(W(k)))
    mu = data.multiplication.matrix
    for j in range(1, k + 1):
        assert mu.apply_sparse(t.pure_basis(2 * j - 1, 2 * j - 2)) == mu.apply_sparse(t.pure_basis(2 * j, 2 * j - 1))


@pytest.mark.parametrize("k", [1, 2])
def test_comodule_and_module(k):
    assert all(comodule_Nk(k).checks.values())
    assert all(module_Sk(k).checks.values())
    assert multiplicity(construct(S(k)), tensor(construct(S(k)), construct(W(k)))) == 1


def test_comodule_well_defined_witness():
    co = coalgebra_Mk(1)
    top = construct(M(1)).dim - 1
    t = tensor_over_D(construct(M(1)), construct(M(1)))
    assert col(co.comultiplication, top) == t.pure_basis(top, top - 1)


def test_reports_are_json():
    import json

    for name in ("coalgebra", "algebra", "comodule", "module"):
        r = structure_report(name, 1)
        assert r["status"] == "pass"
        json.dumps(r)
    assert "note" in structure_report("comodule", 1)
