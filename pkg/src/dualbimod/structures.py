"""The explicit morphisms, splittings and (co)algebra structures on strings.

Basis conventions: m_j is coordinate j-1 of M_k, w_j coordinate j-1 of W_k,
and D has basis (1, x).  Every map built here is checked to intertwine both
actions before it is returned.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .bimodule import (
    Bimodule,
    BimoduleError,
    Morphism,
    associator,
    compose,
    construct,
    hom_space,
    identity,
    quotient_by_span,
    submodule,
    tensor_morphisms,
    tensor_over_D,
    unitor_left,
    unitor_right,
    whisker_left,
    whisker_right,
    zero_map,
)
from .decomposition import decompose, multiplicity
from .labels import Band, Label, M, N, Regular, S, StringLabel, W
from .linalg import ONE, ZERO, Mat, Subspace, _Echelon, inverse, rank, solve


class StructureError(AssertionError):
    """A claimed structure failed its exact verification."""


def _D() -> Bimodule:
    return construct(Regular)


def _checked(f: Morphism, what: str) -> Morphism:
    if not f.is_bimodule_map():
        raise StructureError(f"{what} is not a bimodule map")
    return f


def invert(f: Morphism) -> Morphism:
    return Morphism(f.dst, f.src, inverse(f.matrix))


# ---------------------------------------------------------------------------
# named maps


@functools.lru_cache(maxsize=None)
def phi(k: int) -> Morphism:
    """M_k -> D: m_j |-> 1 for even j, x for odd j."""
    Mk = construct(M(k))
    n = Mk.dim
    cols = [{0: ONE} if (j + 1) % 2 == 0 else {1: ONE} for j in range(n)]
    return _checked(Morphism(Mk, _D(), Mat.from_sparse_columns(cols, 2)), f"phi_{k}")


@functools.lru_cache(maxsize=None)
def psi(k: int) -> Morphism:
    """D -> W_k: 1 |-> w_1 + w_3 + ... + w_{2k+1}, x |-> w_2 + ... + w_{2k}."""
    Wk = construct(W(k))
    n = Wk.dim
    one = {j: ONE for j in range(0, n, 2)}
    x = {j: ONE for j in range(1, n, 2)}
    return _checked(Morphism(_D(), Wk, Mat.from_sparse_columns([one, x], n)), f"psi_{k}")


@functools.lru_cache(maxsize=None)
def iota(l: int, k: int) -> Morphism:
    """M_l -> M_k on the first 2l+3 basis vectors."""
    if not 0 <= l <= k:
        raise ValueError("iota needs 0 <= l <= k")
    src, dst = construct(M(l)), construct(M(k))
    cols = [{j: ONE} for j in range(src.dim)]
    return _checked(Morphism(src, dst, Mat.from_sparse_columns(cols, dst.dim)), f"iota_{l},{k}")


@functools.lru_cache(maxsize=None)
def pi(k: int, l: int) -> Morphism:
    """W_k -> W_l killing w_j for j >= 2l+2."""
    if not 0 <= l <= k:
        raise ValueError("pi needs 0 <= l <= k")
    src, dst = construct(W(k)), construct(W(l))
    cols = [{j: ONE} if j < dst.dim else {} for j in range(src.dim)]
    return _checked(Morphism(src, dst, Mat.from_sparse_columns(cols, dst.dim)), f"pi_{k},{l}")


def _integer_combinations(b: int, radius: int = 2):
    import itertools

    values = [0]
    for r in range(1, radius + 1):
        values.extend([r, -r])
        for vec in itertools.product(values, repeat=b):
            if max(abs(v) for v in vec) == r:
                yield vec


def _first_with_rank(basis: Sequence[Morphism], target_rank: int) -> Morphism | None:
    for f in basis:
        if rank(f.matrix) == target_rank:
            return f
    for coeffs in _integer_combinations(len(basis)):
        T = None
        for c, f in zip(coeffs, basis):
            if c:
                T = f.matrix.scale(c) if T is None else T + f.matrix.scale(c)
        if T is not None and rank(T) == target_rank:
            return Morphism(basis[0].src, basis[0].dst, T)
    return None


@functools.lru_cache(maxsize=None)
def band_maps(n: int) -> tuple[Morphism, Morphism]:
    """(alpha_n: D -> B_n(1) injective, beta_n: B_n(1) -> D surjective)."""
    if n < 2:
        raise ValueError("band_maps needs n >= 2")
    B = construct(Band(n, 1))
    alpha = _first_with_rank(hom_space(_D(), B), 2)
    beta = _first_with_rank(hom_space(B, _D()), 2)
    if alpha is None or beta is None:
        raise StructureError(f"no injective/surjective map between D and B_{n}(1)")
    return alpha, beta


def cokernel(f: Morphism) -> tuple[Bimodule, Morphism]:
    return quotient_by_span(f.dst, f.matrix.sparse_columns())


def kernel(f: Morphism) -> tuple[Bimodule, Morphism]:
    from .linalg import nullspace_sparse

    return submodule(f.src, nullspace_sparse(f.matrix.rows, f.src.dim))


# ---------------------------------------------------------------------------
# factorisation and splitting


def _flat(T: Mat) -> dict:
    n = T.ncols
    return {i * n + j: v for i, r in enumerate(T.rows) for j, v in r.items()}


def solve_combination(mats: Sequence[Mat], target: Mat) -> list | None:
    """Coefficients c with sum c_i mats[i] = target (free ones zero), or None."""
    size = target.nrows * target.ncols
    if not mats:
        return [] if target.is_zero() else None
    cols = [_flat(A) for A in mats]
    A = Mat.from_sparse_columns(cols, size)
    t = _flat(target)
    return solve(A, [t.get(i, ZERO) for i in range(size)])


def _combine(coeffs, basis: Sequence[Morphism], src: Bimodule, dst: Bimodule) -> Morphism:
    T = Mat.zeros(dst.dim, src.dim)
    for c, h in zip(coeffs, basis):
        if c:
            T = T + h.matrix.scale(c)
    return Morphism(src, dst, T)


def factors_through(f: Morphism, g: Morphism) -> Morphism | None:
    """h: X -> Y with g o h = f, for f: X -> Z and g: Y -> Z."""
    basis = hom_space(f.src, g.src)
    coeffs = solve_combination([g.matrix @ h.matrix for h in basis], f.matrix)
    if coeffs is None:
        return None
    return _combine(coeffs, basis, f.src, g.src)


def cofactors_through(f: Morphism, g: Morphism) -> Morphism | None:
    """h: Y -> Z with h o g = f, for f: X -> Z and g: X -> Y."""
    basis = hom_space(g.dst, f.dst)
    coeffs = solve_combination([h.matrix @ g.matrix for h in basis], f.matrix)
    if coeffs is None:
        return None
    return _combine(coeffs, basis, g.dst, f.dst)


def through_simple(M_: Bimodule, N_: Bimodule) -> list[Mat]:
    """A basis of the maps M_ -> N_ that factor through the simple bimodule W_0."""
    S0 = construct(W(0))
    ech = _Echelon()
    out = []
    for b in hom_space(M_, S0):
        for a in hom_space(S0, N_):
            T = a.matrix @ b.matrix
            if ech.add(_flat(T)) is not None:
                out.append(T)
    return out


def homs_mod_simple(M_: Bimodule, N_: Bimodule) -> int:
    """dim Hom(M_, N_) modulo the maps factoring through the simple bimodule."""
    return len(hom_space(M_, N_)) - len(through_simple(M_, N_))


def verify_hom_lemma(k: int) -> dict:
    """Only M_k maps to D, and only W_k receives a map from D, outside the simple maps."""
    if k < 1:
        raise ValueError("the lemma is about k >= 1")
    D = _D()
    rows = []
    ok = True
    for shape in "WSNM":
        U = construct(StringLabel(shape, k))
        to_d = homs_mod_simple(U, D)
        from_d = homs_mod_simple(D, U)
        want_to, want_from = int(shape == "M"), int(shape == "W")
        good = to_d == want_to and from_d == want_from
        ok &= good
        entry = {"label": f"{shape}:{k}", "to_D": to_d, "from_D": from_d, "status": "pass" if good else "fail"}
        if not good:
            entry["witness"] = _hom_lemma_witness(U, D) if to_d != want_to else _hom_lemma_witness(D, U)
        rows.append(entry)
    return {"check": "hom_lemma", "k": k, "status": "pass" if ok else "fail", "items": rows}


def _hom_lemma_witness(A: Bimodule, B: Bimodule) -> list | None:
    """A map A -> B outside the span of maps through the simple bimodule."""
    simple = through_simple(A, B)
    ech = _Echelon()
    for T in simple:
        ech.add(_flat(T))
    for h in hom_space(A, B):
        if ech.reduce(_flat(h.matrix)):
            return [[str(v) for v in row] for row in h.matrix.to_rows()]
    return None


@dataclass
class SplitCertificate:
    map: Morphism
    section_or_retraction: Morphism
    side: str  # "right": map o section = id; "left": retraction o map = id

    def verify(self) -> bool:
        f, s = self.map, self.section_or_retraction
        if not s.is_bimodule_map():
            return False
        if self.side == "right":
            return (f.matrix @ s.matrix) == Mat.identity(f.dst.dim)
        return (s.matrix @ f.matrix) == Mat.identity(f.src.dim)


def split(f: Morphism, side: str, within: Sequence[dict] | None = None) -> SplitCertificate | None:
    """A section (side="right") or retraction (side="left") of f, if any.

    ``within`` restricts a section to take values in the subbimodule spanned
    by the given vectors of f.src.
    """
    if side == "right":
        if within is not None:
            sub, inc = submodule(f.src, list(within))
            cert = split(compose(f, inc), "right")
            if cert is None:
                return None
            return SplitCertificate(f, compose(inc, cert.section_or_retraction), "right")
        basis = hom_space(f.dst, f.src)
        target = Mat.identity(f.dst.dim)
        coeffs = solve_combination([f.matrix @ h.matrix for h in basis], target)
        if coeffs is None:
            return None
        return SplitCertificate(f, _combine(coeffs, basis, f.dst, f.src), "right")
    if side == "left":
        basis = hom_space(f.dst, f.src)
        target = Mat.identity(f.src.dim)
        coeffs = solve_combination([h.matrix @ f.matrix for h in basis], target)
        if coeffs is None:
            return None
        return SplitCertificate(f, _combine(coeffs, basis, f.dst, f.src), "left")
    raise ValueError(f"side must be 'right' or 'left', not {side!r}")


def whiskered_counit(F: Bimodule, phi_: Morphism) -> Morphism:
    """F phi: F G -> F, that is id_F (x) phi followed by the right unitor."""
    return compose(unitor_right(F, phi_.dst), whisker_left(F, phi_))


def whiskered_unit(F: Bimodule, psi_: Morphism) -> Morphism:
    """F psi: F -> F H, the inverse right unitor followed by id_F (x) psi."""
    return compose(whisker_left(F, psi_), invert(unitor_right(F, psi_.src)))


def _as_module(x) -> Bimodule:
    return construct(x) if not isinstance(x, Bimodule) else x


def check_good(G, phi_: Morphism, left_cell: Iterable) -> bool:
    """Is F phi right split for every F in the left cell?"""
    if phi_.src is not _as_module(G):
        raise ValueError("phi must start at G")
    return all(split(whiskered_counit(_as_module(F), phi_), "right") is not None for F in left_cell)


def check_cogood(H, psi_: Morphism, left_cell: Iterable) -> bool:
    """Is F psi left split for every F in the left cell?"""
    if psi_.dst is not _as_module(H):
        raise ValueError("psi must end at H")
    return all(split(whiskered_unit(_as_module(F), psi_), "left") is not None for F in left_cell)


def duflo_summand_basis(k: int) -> list[dict]:
    """Pure tensors m_2(x)m_1, m_j(x)m_j, m_{j+1}(x)m_j (j even) in M_k (x) M_k."""
    Mk = construct(M(k))
    t = tensor_over_D(Mk, Mk)
    vecs = [t.pure_basis(1, 0)]
    for j in range(2, 2 * k + 3, 2):
        vecs.append(t.pure_basis(j - 1, j - 1))
        vecs.append(t.pure_basis(j, j - 1))
    return vecs


def codulfo_summand_basis(k: int) -> list[dict]:
    """w_1(x)w_1, then w_{2j}(x)w_{2j-1} and w_{2j+1}(x)w_{2j+1} in W_k (x) W_k."""
    Wk = construct(W(k))
    t = tensor_over_D(Wk, Wk)
    vecs = [t.pure_basis(0, 0)]
    for j in range(1, k + 1):
        vecs.append(t.pure_basis(2 * j - 1, 2 * j - 2))
        vecs.append(t.pure_basis(2 * j, 2 * j))
    return vecs


def good_certificate(k: int) -> SplitCertificate:
    """Section of M_k phi_k with image the summand spanned by the quoted pure tensors."""
    Mk = construct(M(k))
    cert = split(whiskered_counit(Mk, phi(k)), "right", within=duflo_summand_basis(k))
    if cert is None or not cert.verify():
        raise StructureError(f"M_{k} phi_{k} has no section onto the quoted summand")
    return cert


def sample_greatness(k: int, m: int, candidates=None) -> dict:
    """Check the universal property of (M_k, phi_k) on a finite set of good candidates."""
    if not 1 <= k <= m:
        raise ValueError("need 1 <= k <= m")
    cell = [N(k), M(k)]
    if candidates is None:
        candidates = default_greatness_candidates(k, m)
    items = []
    ok = True
    for label, f in candidates:
        good = check_good(label, f, cell)
        entry = {"candidate": str(label), "good": good}
        if good:
            h = factors_through(phi(k), f)
            entry["factors"] = h is not None
            ok &= h is not None
        items.append(entry)
    return {"check": "greatness_sampled", "k": k, "level": m, "status": "pass" if ok else "fail",
            "sampled": True, "items": items}


def default_greatness_candidates(k: int, m: int) -> list[tuple]:
    from .cells import build_catalog

    out = []
    for label in build_catalog(m):
        for f in hom_space(construct(label), _D()):
            out.append((label, f))
    out.extend((M(l), phi(l)) for l in range(k, m + 1))
    out.append((Regular, identity(_D())))
    return out


# ---------------------------------------------------------------------------
# coalgebra on M_k, algebra on W_k


@dataclass
class CoalgebraData:
    carrier: Bimodule
    comultiplication: Morphism
    counit: Morphism
    checks: dict = field(default_factory=dict)


@dataclass
class AlgebraData:
    carrier: Bimodule
    multiplication: Morphism
    unit: Morphism
    checks: dict = field(default_factory=dict)


def _delta_matrix(k: int) -> Morphism:
    Mk = construct(M(k))
    t = tensor_over_D(Mk, Mk)
    n = Mk.dim
    cols = []
    for j in range(1, n + 1):  # m_j, 1-based
        if j == 1:
            col = t.pure_basis(1, 0)  # m_2 (x) m_1
        elif j % 2 == 0:
            col = t.pure_basis(j - 1, j - 1)  # m_j (x) m_j
        else:
            col = t.pure_basis(j - 1, j - 2)  # m_j (x) m_{j-1}
        cols.append(col)
    return Morphism(Mk, t.module, Mat.from_sparse_columns(cols, t.dim))


def coalgebra_axioms(C: Bimodule, delta: Morphism, eps: Morphism) -> dict:
    """Coassociativity and both counit laws, compared through the coherence maps."""
    idC = identity(C)
    lhs = compose(associator(C, C, C), compose(tensor_morphisms(delta, idC), delta))
    rhs = compose(tensor_morphisms(idC, delta), delta)
    right_counit = compose(unitor_right(C), compose(tensor_morphisms(idC, eps), delta))
    left_counit = compose(unitor_left(C), compose(tensor_morphisms(eps, idC), delta))
    I = Mat.identity(C.dim)
    return {
        "bimodule_map": delta.is_bimodule_map() and eps.is_bimodule_map(),
        "coassociative": lhs.matrix == rhs.matrix,
        "right_counit": right_counit.matrix == I,
        "left_counit": left_counit.matrix == I,
    }


def algebra_axioms(A: Bimodule, mu: Morphism, eta: Morphism) -> dict:
    idA = identity(A)
    lhs = compose(mu, tensor_morphisms(mu, idA))
    rhs = compose(mu, compose(tensor_morphisms(idA, mu), associator(A, A, A)))
    right_unit = compose(mu, compose(tensor_morphisms(idA, eta), invert(unitor_right(A))))
    left_unit = compose(mu, compose(tensor_morphisms(eta, idA), invert(unitor_left(A))))
    I = Mat.identity(A.dim)
    return {
        "bimodule_map": mu.is_bimodule_map() and eta.is_bimodule_map(),
        "associative": lhs.matrix == rhs.matrix,
        "right_unit": right_unit.matrix == I,
        "left_unit": left_unit.matrix == I,
    }


def _require(checks: dict, what: str) -> None:
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        raise StructureError(f"{what}: failed {', '.join(failed)}")


@functools.lru_cache(maxsize=None)
def coalgebra_Mk(k: int) -> CoalgebraData:
    """(M_k, delta, phi_k) with delta entered from its basis formulas."""
    if k < 1:
        raise ValueError("k must be positive")
    Mk = construct(M(k))
    delta = _delta_matrix(k)
    checks = coalgebra_axioms(Mk, delta, phi(k))
    # cross-check: the image of delta is the quoted summand, and delta splits M_k phi_k
    quoted = Subspace(duflo_summand_basis(k), delta.dst.dim)
    image = Subspace(delta.matrix.sparse_columns(), delta.dst.dim)
    checks["image_is_quoted_summand"] = image.dim == quoted.dim == Mk.dim and all(
        quoted.contains(v) for v in image.basis
    )
    checks["splits_counit_whisker"] = SplitCertificate(whiskered_counit(Mk, phi(k)), delta, "right").verify()
    _require(checks, f"coalgebra on M_{k}")
    return CoalgebraData(Mk, delta, phi(k), checks)


def _projection_onto(T: Bimodule, vecs: Sequence[dict], complement: Sequence[dict]) -> Mat:
    """Coordinates in ``vecs`` of the projection of T onto span(vecs) along span(complement)."""
    n = T.dim
    basis = list(vecs) + list(complement)
    B = Mat.from_sparse_columns(basis, n)
    Binv = inverse(B)  # raises unless the two spans are complementary
    return Mat(len(vecs), n, [dict(Binv.rows[i]) for i in range(len(vecs))])


def _other_summands(T: Bimodule, label: Label) -> list[dict]:
    """Images of every summand of T except one copy of ``label``."""
    res = decompose(T)
    if res.residual is not None:
        raise StructureError("tensor square did not decompose")
    skipped = False
    vecs: list[dict] = []
    for s in res.summands:
        if s.label == label and not skipped:
            skipped = True
            continue
        vecs.extend(s.injection.matrix.sparse_columns())
    if not skipped:
        raise StructureError(f"no summand {label} found")
    return vecs


@functools.lru_cache(maxsize=None)
def algebra_Wk(k: int) -> AlgebraData:
    """(W_k, mu, psi_k), mu the projection onto the quoted summand of W_k (x) W_k.

    On the quoted basis mu sends w_{2j+1}(x)w_{2j+1} to w_{2j+1} and
    w_{2j}(x)w_{2j-1} to w_{2j}; the complement is the sum of the other
    summands of a decomposition of the tensor square.
    """
    if k < 1:
        raise ValueError("k must be positive")
    Wk = construct(W(k))
    t = tensor_over_D(Wk, Wk)
    T = t.module
    quoted = codulfo_summand_basis(k)  # ordered like w_1, w_2, ..., w_{2k+1}
    complement = _other_summands(T, W(k))
    P = _projection_onto(T, quoted, complement)
    mu = Morphism(T, Wk, P)
    checks = algebra_axioms(Wk, mu, psi(k))
    # the projection must send the quoted basis to w_1, w_2, ..., w_{2k+1}
    checks["basis_formula"] = all(
        P.apply_sparse(v) == {j: ONE} for j, v in enumerate(quoted)
    )
    checks["unique_summand"] = multiplicity(Wk, T) == 1
    sub, _ = submodule(T, quoted)
    checks["quoted_span_is_summand"] = sub.dim == Wk.dim
    _require(checks, f"algebra on W_{k}")
    return AlgebraData(Wk, mu, psi(k), checks)


# ---------------------------------------------------------------------------
# (co)modules


@dataclass
class ComoduleData:
    carrier: Bimodule
    coaction: Morphism
    checks: dict


@dataclass
class ModuleData:
    carrier: Bimodule
    action: Morphism
    checks: dict


def _canonical_projection(shape: str, k: int) -> Morphism:
    """The quotient map M_k -> N_k, S_k or W_k as a morphism between catalog objects."""
    Mk = construct(M(k))
    n = Mk.dim
    kill = {"N": [{n - 1: ONE}], "S": [{0: ONE}], "W": [{0: ONE}, {n - 1: ONE}]}[shape]
    Q, proj = quotient_by_span(Mk, kill)
    target = construct(StringLabel(shape, k))
    if Q.left != target.left or Q.right != target.right:
        raise StructureError("quotient does not reproduce the catalog basis")
    return Morphism(Mk, target, proj.matrix)


def _descend(f: Morphism, p: Morphism) -> Morphism:
    """g with g o p = f for a surjection p, after checking f kills ker p."""
    h = cofactors_through(f, p)
    if h is None:
        raise StructureError("map does not descend to the quotient")
    return h


@functools.lru_cache(maxsize=None)
def comodule_Nk(k: int) -> ComoduleData:
    """rho: N_k -> N_k (x) M_k induced by delta through pi: M_k -> N_k."""
    co = coalgebra_Mk(k)
    Mk, delta = co.carrier, co.comultiplication
    p = _canonical_projection("N", k)
    Nk = p.dst
    pushed = compose(tensor_morphisms(p, identity(Mk)), delta)  # M_k -> N_k (x) M_k
    top = Mk.dim - 1
    checks = {"well_defined": not any(pushed.matrix.rows[i].get(top) for i in range(pushed.matrix.nrows))}
    rho = _descend(pushed, p)
    idM, idN = identity(Mk), identity(Nk)
    lhs = compose(associator(Nk, Mk, Mk), compose(tensor_morphisms(rho, idM), rho))
    rhs = compose(tensor_morphisms(idN, delta), rho)
    counit = compose(unitor_right(Nk), compose(tensor_morphisms(idN, co.counit), rho))
    checks.update({
        "bimodule_map": rho.is_bimodule_map(),
        "coassociative": lhs.matrix == rhs.matrix,
        "counit": counit.matrix == Mat.identity(Nk.dim),
    })
    _require(checks, f"comodule N_{k}")
    return ComoduleData(Nk, rho, checks)


def _square_solution(theta: Morphism, zeta: Morphism, delta: Morphism) -> tuple[Morphism, Morphism] | None:
    """(act, pi) with act o (theta (x) zeta) = theta o pi and pi o delta = id.

    Both unknowns range over their hom spaces, so this is one linear system
    whose first solution (free coefficients zero) is returned.
    """
    Mk, Sk, Wk = theta.src, theta.dst, zeta.dst
    tz = tensor_morphisms(theta, zeta)
    acts = hom_space(tz.dst, Sk)
    pis = hom_space(delta.dst, Mk)
    na, npi = len(acts), len(pis)
    sq_cols = [_flat(a.matrix @ tz.matrix) for a in acts] + [
        {i: -v for i, v in _flat(theta.matrix @ p.matrix).items()} for p in pis
    ]
    size_sq = Sk.dim * tz.src.dim
    size_ret = Mk.dim * Mk.dim
    cols = []
    for c, col in enumerate(sq_cols):
        full = dict(col)
        if c >= na:
            for i, v in _flat(pis[c - na].matrix @ delta.matrix).items():
                full[size_sq + i] = v
        cols.append(full)
    A = Mat.from_sparse_columns(cols, size_sq + size_ret)
    target = [ZERO] * size_sq + [ONE if i % (Mk.dim + 1) == 0 else ZERO for i in range(size_ret)]
    sol = solve(A, target)
    if sol is None:
        return None
    act = _combine(sol[:na], acts, tz.dst, Sk)
    pi_M = _combine(sol[na:], pis, delta.dst, Mk)
    return act, pi_M


@functools.lru_cache(maxsize=None)
def module_Sk(k: int) -> ModuleData:
    """S_k (x) W_k -> S_k from the square with theta (x) zeta and a retraction of delta.

    The retraction pi of delta is solved for together with the action, since
    not every projection M_k (x) M_k -> M_k is compatible with theta (x) zeta.
    """
    alg = algebra_Wk(k)
    co = coalgebra_Mk(k)
    Wk, mu = alg.carrier, alg.multiplication
    theta = _canonical_projection("S", k)
    zeta = _canonical_projection("W", k)
    Sk = theta.dst
    found = _square_solution(theta, zeta, co.comultiplication)
    if found is None:
        raise StructureError(f"no action on S_{k} fits the square")
    act, pi_M = found
    tz = tensor_morphisms(theta, zeta)
    idS, idW = identity(Sk), identity(Wk)
    lhs = compose(act, tensor_morphisms(act, idW))
    rhs = compose(act, compose(tensor_morphisms(idS, mu), associator(Sk, Wk, Wk)))
    unit = compose(act, compose(tensor_morphisms(idS, alg.unit), invert(unitor_right(Sk))))
    checks = {
        "bimodule_map": act.is_bimodule_map() and pi_M.is_bimodule_map(),
        "square_commutes": compose(act, tz).matrix == compose(theta, pi_M).matrix,
        "retracts_delta": compose(pi_M, co.comultiplication).matrix == Mat.identity(theta.src.dim),
        "associative": lhs.matrix == rhs.matrix,
        "unit": unit.matrix == Mat.identity(Sk.dim),
        "unique_summand": multiplicity(Sk, tz.dst) == 1,
        "split_projection": split(act, "right") is not None,
    }
    _require(checks, f"module S_{k}")
    return ModuleData(Sk, act, checks)


# ---------------------------------------------------------------------------
# reports

COMODULE_NOTE = (
    "the coaction on N_k is induced from delta through M_k -> N_k; "
    "a multiplication on M_k is never used, since M_k carries a comultiplication"
)


def _report(check: str, k: int, checks: dict, note: str | None = None) -> dict:
    out = {"check": check, "k": k, "status": "pass" if all(checks.values()) else "fail",
           "items": {name: bool(v) for name, v in checks.items()}}
    if note:
        out["note"] = note
    return out


def structure_report(name: str, k: int) -> dict:
    """Run one named structure check and return its JSON report."""
    builders = {
        "coalgebra": coalgebra_Mk,
        "algebra": algebra_Wk,
        "comodule": comodule_Nk,
        "module": module_Sk,
    }
    try:
        data = builders[name](k)
    except StructureError as exc:
        return {"check": name, "k": k, "status": "fail", "witness": str(exc)}
    note = COMODULE_NOTE if name == "comodule" else None
    return _report(name, k, data.checks, note)


def matrix_json(T: Mat) -> list[list[str]]:
    return [[str(v) for v in row] for row in T.to_rows()]


def factorization_report(k_max: int) -> dict:
    """phi_l = phi_k o iota_{l,k}, psi_l = pi_{k,l} o psi_k and the band factorisations."""
    checks = {}
    for k in range(k_max + 1):
        for l in range(k + 1):
            checks[f"phi_{l}=phi_{k}.iota_{l},{k}"] = compose(phi(k), iota(l, k)).matrix == phi(l).matrix
            checks[f"psi_{l}=pi_{k},{l}.psi_{k}"] = compose(pi(k, l), psi(k)).matrix == psi(l).matrix
    for n in (2, 3):
        alpha, beta = band_maps(n)
        for k in range(1, k_max + 1):
            checks[f"phi_{k} through beta_{n}"] = factors_through(phi(k), beta) is not None
            checks[f"alpha_{n} through psi_{k}"] = cofactors_through(alpha, psi(k)) is not None
            checks[f"psi_{k} through alpha_{n}"] = cofactors_through(psi(k), alpha) is not None
    out = _report("factorizations", k_max, checks)
    out["note"] = BAND_NOTE
    return out


BAND_NOTE = (
    "every map W_k -> B_n(1) lands in the radical, so no h has h o psi_k = alpha_n "
    "with alpha_n injective; the mirror statement psi_k = h o alpha_n is checked alongside"
)


def goodness_report(k: int) -> dict:
    cert = good_certificate(k)
    image = Subspace(cert.section_or_retraction.matrix.sparse_columns(), cert.map.src.dim)
    quoted = Subspace(duflo_summand_basis(k), cert.map.src.dim)
    checks = {
        "good": check_good(M(k), phi(k), [N(k), M(k)]),
        "cogood": check_cogood(W(k), psi(k), [W(k), S(k)]),
        "certificate_verifies": cert.verify(),
        "certificate_image_is_quoted_span": image.dim == quoted.dim and all(quoted.contains(v) for v in image.basis),
        "negative_control_N": not any(
            check_good(N(k), f, [N(k), M(k)]) for f in hom_space(construct(N(k)), _D())
        ),
    }
    out = _report("goodness", k, checks)
    out["section"] = matrix_json(cert.section_or_retraction.matrix)
    return out


__all__ = [
    "BAND_NOTE",
    "COMODULE_NOTE",
    "factorization_report",
    "goodness_report",
    "structure_report",
    "AlgebraData",
    "CoalgebraData",
    "ComoduleData",
    "ModuleData",
    "SplitCertificate",
    "StructureError",
    "algebra_Wk",
    "algebra_axioms",
    "band_maps",
    "check_cogood",
    "check_good",
    "coalgebra_Mk",
    "coalgebra_axioms",
    "cofactors_through",
    "cokernel",
    "comodule_Nk",
    "factors_through",
    "good_certificate",
    "homs_mod_simple",
    "iota",
    "kernel",
    "module_Sk",
    "phi",
    "pi",
    "psi",
    "sample_greatness",
    "split",
    "verify_hom_lemma",
    "whiskered_counit",
    "whiskered_unit",
]
