"""Isomorphism tests, direct-summand tests and Krull-Schmidt decomposition.

Every indecomposable bimodule C produced by :func:`construct` has a local
endomorphism ring with residue field Q, so an endomorphism e of C is
invertible exactly when ``trace(e) != 0`` (e = c.id + nilpotent).  Hence C is
a summand of M iff some product g o f with f: C -> M, g: M -> C has nonzero
trace, and the rank of the pairing ``(g, f) -> trace(g o f)`` on the two
hom bases is the multiplicity of C in M.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from gmpy2 import mpq

from .bimodule import (
    Bimodule,
    BimoduleError,
    Morphism,
    ZERO_BIMODULE,
    compose,
    construct,
    direct_sum,
    hom_space,
    identity,
    submodule,
    valley_count,
)
from .labels import (
    SHAPES,
    BandLabel,
    Label,
    ProjInj,
    Regular,
    StringLabel,
    candidate_order,
)
from .pencil import predict_multiplicities
from .polynomial import interpolate_det, rational_roots
from .linalg import (
    ONE,
    ZERO,
    Mat,
    Subspace,
    _Echelon,
    inverse,
    is_invertible,
    nullspace_sparse,
    rank,
    rref_sparse,
)

ISO_SEED = 0xD0A1
SPIRAL_BUDGET = 4096
RANDOM_TRIES = 32


class DecompositionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# invariants


@dataclass(frozen=True)
class Invariants:
    """Additive isomorphism invariants; a summand never exceeds its parent."""

    dim: int
    rank_left: int
    rank_right: int
    rank_both: int  # rank of L R
    valleys: int
    socle: int

    def fits_in(self, other: "Invariants") -> bool:
        return all(a <= b for a, b in zip(self.astuple(), other.astuple()))

    def astuple(self) -> tuple:
        return (self.dim, self.rank_left, self.rank_right, self.rank_both, self.valleys, self.socle)


def invariants(M: Bimodule) -> Invariants:
    if M.dim == 0:
        return Invariants(0, 0, 0, 0, 0, 0)
    socle = len(nullspace_sparse(list(M.left.rows) + list(M.right.rows), M.dim))
    return Invariants(
        M.dim,
        rank(M.left),
        rank(M.right),
        rank(M.left @ M.right),
        valley_count(M),
        socle,
    )


_label_inv_cache: dict = {}


def label_invariants(label: Label) -> Invariants:
    inv = _label_inv_cache.get(label)
    if inv is None:
        inv = _label_inv_cache[label] = invariants(construct(label))
    return inv


# ---------------------------------------------------------------------------
# isomorphism


def _combination(basis: Sequence[Morphism], coeffs: Sequence[int]) -> Mat:
    acc = None
    for c, f in zip(coeffs, basis):
        if c:
            term = f.matrix.scale(c)
            acc = term if acc is None else acc + term
    return acc


def _spiral(b: int, radius: int = 4):
    """Integer vectors in [-radius, radius]^b by growing sup-norm, lexicographic within."""
    values = [0]
    for r in range(1, radius + 1):
        values.extend([r, -r])
        for vec in itertools.product(values, repeat=b):
            if max(abs(v) for v in vec) == r:
                yield vec


def is_isomorphic(M: Bimodule, N: Bimodule) -> Morphism | None:
    """An isomorphism M -> N, or None.

    Tries hom basis elements, then small integer combinations in a fixed
    spiral (hom spaces of dimension at most 6), then fixed-seed random
    combinations.  A None answer carries the best rank seen in
    ``is_isomorphic.last_rank``.
    """
    is_isomorphic.last_rank = 0
    if M.dim != N.dim:
        return None
    n = M.dim
    if n == 0:
        return Morphism(M, N, Mat.zeros(0, 0))
    if invariants(M) != invariants(N):
        return None
    basis = hom_space(M, N)
    if not basis:
        return None
    best = 0
    for f in basis:
        r = rank(f.matrix)
        best = max(best, r)
        if r == n:
            return f
    b = len(basis)
    if b <= 6:
        for count, coeffs in enumerate(_spiral(b)):
            if count >= SPIRAL_BUDGET:
                break
            if sum(1 for c in coeffs if c) < 2:
                continue
            T = _combination(basis, coeffs)
            r = rank(T)
            best = max(best, r)
            if r == n:
                return Morphism(M, N, T)
    rng = random.Random(ISO_SEED)
    for _ in range(RANDOM_TRIES):
        coeffs = [rng.randint(-10**6, 10**6) for _ in range(b)]
        T = _combination(basis, coeffs)
        if T is None:
            continue
        r = rank(T)
        best = max(best, r)
        if r == n:
            return Morphism(M, N, T)
    is_isomorphic.last_rank = best
    return None


is_isomorphic.last_rank = 0


# ---------------------------------------------------------------------------
# summand test


def _flat(T: Mat) -> dict:
    n = T.ncols
    return {i * n + j: v for i, r in enumerate(T.rows) for j, v in r.items()}


def _trace_of_product(G: Mat, F: Mat) -> mpq:
    """trace(G @ F) without forming the product."""
    s = ZERO
    frows = F.rows
    for i, r in enumerate(G.rows):
        for j, v in r.items():
            w = frows[j].get(i)
            if w:
                s += v * w
    return s


def pairing_matrix(C: Bimodule, M: Bimodule, homs=None) -> tuple[list[Morphism], list[Morphism], list[dict]]:
    """Hom bases f_s: C -> M, g_t: M -> C and the rows {s: trace(g_t f_s)}."""
    fs, gs = homs if homs is not None else (hom_space(C, M), hom_space(M, C))
    rows = []
    for g in gs:
        row = {}
        for s, f in enumerate(fs):
            v = _trace_of_product(g.matrix, f.matrix)
            if v:
                row[s] = v
        rows.append(row)
    return fs, gs, rows


def multiplicity(C: Bimodule, M: Bimodule) -> int:
    """Number of copies of the indecomposable C in M."""
    if C.dim == 0 or C.dim > M.dim:
        return 0
    _, _, rows = pairing_matrix(C, M)
    return len(rref_sparse(rows)[0])


def summand_test(C: Bimodule, M: Bimodule, method: str = "trace") -> bool:
    """Is the indecomposable C isomorphic to a direct summand of M?

    ``method="span"`` checks literally whether id_C lies in the span of all
    products g o f; ``"trace"`` uses the equivalent residue criterion.
    """
    if C.dim == 0 or C.dim > M.dim:
        return False
    if method == "trace":
        return multiplicity(C, M) > 0
    if method != "span":
        raise ValueError(f"unknown method {method!r}")
    fs, gs = hom_space(C, M), hom_space(M, C)
    ech = _Echelon()
    ident = _flat(Mat.identity(C.dim))
    for g in gs:
        for f in fs:
            ech.add(_flat(g.matrix @ f.matrix))
            if not ech.reduce(ident):
                return True
    return False


def idempotent_summand_oracle(C: Bimodule, M: Bimodule) -> bool:
    """Brute force for tiny M: C is a summand iff some idempotent of End(M) has image C.

    The idempotents are found by solving e^2 = e symbolically in the
    coordinates of the End(M) basis; free parameters of a solution family are
    sampled at 0 and 1.
    """
    if C.dim > M.dim or C.dim == 0:
        return False
    for e in endomorphism_idempotents(M):
        if rank(e) != C.dim:
            continue
        image = [c for c in e.sparse_columns() if c]
        sub, _ = submodule(M, Subspace(image, M.dim).basis)
        if is_isomorphic(sub, C) is not None:
            return True
    return False


def endomorphism_idempotents(M: Bimodule) -> list[Mat]:
    import sympy

    basis = hom_space(M, M)
    b, n = len(basis), M.dim
    xs = sympy.symbols(f"c0:{b}")
    E = sympy.zeros(n, n)
    for c, f in zip(xs, basis):
        E += c * sympy.Matrix([[sympy.Rational(int(v.numerator), int(v.denominator)) for v in row]
                               for row in f.matrix.to_rows()])
    eqs = [q for q in (E * E - E) if q != 0]
    sols = sympy.solve(eqs, xs, dict=True) if eqs else [{}]
    out = []
    for sol in sols:
        free = sorted({s for v in sol.values() for s in v.free_symbols} | (set(xs) - set(sol)), key=str)
        for sample in itertools.product((0, 1), repeat=len(free)):
            sub = dict(zip(free, sample))
            coeffs = [sympy.nsimplify(sympy.sympify(sol.get(x, x)).subs(sub)) for x in xs]
            T = Mat.zeros(n, n)
            for c, f in zip(coeffs, basis):
                if c != 0:
                    T = T + f.matrix.scale(mpq(int(c.p), int(c.q)))
            if T @ T == T:
                out.append(T)
    return out


# ---------------------------------------------------------------------------
# peeling and decomposition


@dataclass(eq=False)
class Summand:
    label: Label
    injection: Morphism
    projection: Morphism


@dataclass(eq=False)
class Peel:
    """Result of splitting r copies of C off M."""

    copies: list[tuple[Morphism, Morphism]]  # (C -> M, M -> C) per copy
    complement: Bimodule
    comp_inclusion: Morphism  # complement -> M
    comp_projection: Morphism  # M -> complement


def _independent_pairs(rows: list[dict]) -> tuple[list[int], list[int]]:
    """Row and column indices of a maximal invertible square block."""
    cols, _ = rref_sparse(rows)
    colset = set(cols)
    ech = _Echelon()
    picked_rows = []
    for t, r in enumerate(rows):
        sub = {s: v for s, v in r.items() if s in colset}
        if sub and ech.add(sub) is not None:
            picked_rows.append(t)
        if len(picked_rows) == len(cols):
            break
    return picked_rows, cols


def peel(C: Bimodule, M: Bimodule, copies: int | None = None) -> Peel:
    """Split copies of the indecomposable C off M (all of them by default).

    With f_1..f_r: C -> M and g_1..g_r: M -> C whose trace pairing block is
    invertible, the block map G F on C^r is invertible, e = F (G F)^-1 G is an
    idempotent with image C^r, and the complement is ker e.
    """
    fs, gs, rows = pairing_matrix(C, M)
    trows, scols = _independent_pairs(rows)
    r = len(scols)
    if r == 0:
        raise DecompositionError("not a direct summand")
    if copies is not None:
        if copies > r:
            raise DecompositionError(f"only {r} copies present")
        trows, scols = trows[:copies], scols[:copies]
        # a leading principal block of an invertible residue block may be singular
        block = Mat(len(trows), len(scols), [
            {k: rows[t].get(s, ZERO) for k, s in enumerate(scols) if rows[t].get(s)}
            for t in trows
        ])
        if not is_invertible(block):
            trows, scols = _first_invertible_pairs(rows, copies)
        r = copies
    c, m = C.dim, M.dim
    # F: C^r -> M, G: M -> C^r
    fcols = []
    for s in scols:
        fcols.extend(fs[s].matrix.sparse_columns())
    F = Mat.from_sparse_columns(fcols, m)
    G = Mat(r * c, m, [dict(row) for t in trows for row in gs[t].matrix.rows])
    GF = G @ F
    P = inverse(GF) @ G  # M -> C^r, P F = id
    out = []
    for i in range(r):
        inj = Mat(m, c, [
            {j - i * c: v for j, v in row.items() if i * c <= j < (i + 1) * c} for row in F.rows
        ])
        proj = Mat(c, m, [dict(P.rows[i * c + a]) for a in range(c)])
        out.append((Morphism(C, M, inj), Morphism(M, C, proj)))
    kernel = nullspace_sparse(P.rows, m)
    if kernel:
        comp, incl = submodule(M, kernel)
    else:
        comp = ZERO_BIMODULE
        incl = Morphism(comp, M, Mat.zeros(m, 0))
    # projection onto the complement: coordinates of (id - F P) v in the kernel basis
    space = Subspace(kernel, m)
    Ecols = (F @ P).sparse_columns()
    qcols = []
    for j in range(m):
        v = {j: ONE}
        for i, x in Ecols[j].items():
            w = v.get(i, ZERO) - x
            if w:
                v[i] = w
            else:
                v.pop(i, None)
        qcols.append(space.coords(v) if kernel else [])
    q = Mat.from_columns(qcols, len(kernel)) if kernel else Mat.zeros(0, m)
    return Peel(out, comp, incl, Morphism(M, comp, q))


def _first_invertible_pairs(rows: list[dict], r: int) -> tuple[list[int], list[int]]:
    for ts in itertools.combinations(range(len(rows)), r):
        cols = sorted({s for t in ts for s in rows[t]})
        for ss in itertools.combinations(cols, r):
            block = Mat(r, r, [{k: rows[t][s] for k, s in enumerate(ss) if s in rows[t]} for t in ts])
            if is_invertible(block):
                return list(ts), list(ss)
    raise DecompositionError("no invertible block")


@dataclass(eq=False)
class DecompositionResult:
    source: Bimodule
    summands: list[Summand] = field(default_factory=list)
    residual: Bimodule | None = None
    residual_inclusion: Morphism | None = None
    residual_projection: Morphism | None = None

    @property
    def labels(self) -> list[Label]:
        return sorted((s.label for s in self.summands), key=candidate_order)

    @property
    def counter(self) -> Counter:
        return Counter(s.label for s in self.summands)

    @property
    def complete(self) -> bool:
        return self.residual is None

    def check(self) -> None:
        """Raise DecompositionError unless the witnesses form a splitting."""
        n = self.source.dim
        total = Mat.zeros(n, n)
        for s in self.summands:
            c = s.injection.src.dim
            if compose(s.projection, s.injection).matrix != Mat.identity(c):
                raise DecompositionError(f"projection o injection != id for {s.label}")
            if not s.injection.is_bimodule_map() or not s.projection.is_bimodule_map():
                raise DecompositionError(f"witness for {s.label} is not a bimodule map")
            total = total + s.injection.matrix @ s.projection.matrix
        if self.residual is not None:
            total = total + self.residual_inclusion.matrix @ self.residual_projection.matrix
        if total != Mat.identity(n):
            raise DecompositionError("witness idempotents do not sum to the identity")


def band_eigenvalue_candidates(M: Bimodule) -> dict[mpq, int]:
    """Rational eigenvalues of the pencil R - tL with an upper bound on multiplicity.

    Finite eigenvalues are the roots of the gcd of the maximal nonvanishing
    minors; one such minor, found at a generic point, is interpolated exactly
    and its rational roots (with multiplicities) are returned.
    """
    n = M.dim
    if n == 0:
        return {}
    L, R = M.left, M.right

    def pencil(t) -> Mat:
        return R - L.scale(t)

    probes = [mpq(1009, 7), mpq(-2003, 11), mpq(3001, 13)]
    best_r, best_t = -1, None
    for t in probes:
        r = rank(pencil(t))
        if r > best_r:
            best_r, best_t = r, t
    r = best_r
    if r == 0:
        return {}
    P = pencil(best_t)
    rows_sel, _ = rref_sparse(P.T.rows)  # pivots of the transpose: independent rows
    cols_sel, _ = rref_sparse(P.rows)
    poly = interpolate_det(lambda t: pencil(t).submatrix(rows_sel, cols_sel), r)
    return rational_roots(poly)


def candidate_labels(M: Bimodule) -> list[Label]:
    """Labels that could be summands of M, dimension descending then label order."""
    inv = invariants(M)
    n = M.dim
    out: list[Label] = []
    for shape in SHAPES:
        k = 0
        while StringLabel(shape, k).dim <= n:
            out.append(StringLabel(shape, k))
            k += 1
    eig = band_eigenvalue_candidates(M)
    if ONE not in eig:
        eig[ONE] = 0
    for lam, mult in eig.items():
        if lam == 0:
            continue
        for length in range(1, min(mult, n // 2) + 1):
            if length == 1 and lam == ONE:
                continue  # B_1(1) is the regular bimodule
            out.append(BandLabel(length, lam))
    out.append(ProjInj)
    out.append(Regular)
    out = [lab for lab in out if label_invariants(lab).fits_in(inv)]
    out.sort(key=candidate_order)
    return out


def decompose(M: Bimodule, candidates: Iterable[Label] | None = None) -> DecompositionResult:
    """Krull-Schmidt decomposition of M into labelled indecomposables.

    The multiplicities predicted by the pencil invariants are split off all
    at once and certified: the combined injection must be invertible.  If
    the prediction is incomplete or fails to certify, and always when an
    explicit candidate list is given, the sequential peel is used instead.
    """
    if candidates is None:
        predicted = predict_multiplicities(M)
        if predicted is not None:
            res = _split_all(M, predicted)
            if res is not None:
                return res
    return decompose_sequential(M, candidates)


def _pairing_block(C: Bimodule, M: Bimodule, r: int):
    """r maps C -> M and r maps M -> C whose trace pairing block is invertible."""
    fs, gs = hom_space(C, M), hom_space(M, C)
    if len(fs) < r or len(gs) < r:
        return None
    ech = _Echelon()
    rows, picked = [], []
    for t, g in enumerate(gs):
        row = {}
        for s_, f in enumerate(fs):
            v = _trace_of_product(g.matrix, f.matrix)
            if v:
                row[s_] = v
        if row and ech.add(row) is not None:
            rows.append(row)
            picked.append(g)
            if len(picked) == r:
                break
    if len(picked) < r:
        return None
    trows, scols = _independent_pairs(rows)
    return [fs[s_] for s_ in scols], [picked[t] for t in trows]


def _split_all(M: Bimodule, predicted: Counter) -> DecompositionResult | None:
    n = M.dim
    labels = sorted(predicted, key=candidate_order)
    blocks = []
    for label in labels:
        C = construct(label)
        pair = _pairing_block(C, M, predicted[label])
        if pair is None:
            return None
        blocks.append((label, C, pair[0]))
    cols = []
    for _, _, fs in blocks:
        for f in fs:
            cols.extend(f.matrix.sparse_columns())
    if len(cols) != n:
        return None
    Phi = Mat.from_sparse_columns(cols, n)
    try:
        Psi = inverse(Phi)
    except ValueError:
        return None
    result = DecompositionResult(M)
    offset = 0
    for label, C, fs in blocks:
        c = C.dim
        for f in fs:
            proj = Mat(c, n, [dict(Psi.rows[offset + a]) for a in range(c)])
            result.summands.append(Summand(label, f, Morphism(M, C, proj)))
            offset += c
    return result


def decompose_sequential(M: Bimodule, candidates: Iterable[Label] | None = None) -> DecompositionResult:
    """Decompose by trying candidates in dimension-descending order and peeling.

    Each candidate that occurs is split off with all its copies before
    moving on.  Whatever is left when the candidates run out is returned as
    the residual.
    """
    result = DecompositionResult(M)
    if candidates is None:
        candidates = candidate_labels(M)
    cur = M
    inc = identity(M)  # current remainder -> M
    prj = identity(M)  # M -> current remainder
    cur_inv = invariants(M)
    for label in candidates:
        if cur.dim == 0:
            break
        C = construct(label)
        if C.dim > cur.dim or not label_invariants(label).fits_in(cur_inv):
            continue
        try:
            pl = peel(C, cur)
        except DecompositionError:
            continue
        for f, g in pl.copies:
            result.summands.append(Summand(label, compose(inc, f), compose(g, prj)))
        inc = compose(inc, pl.comp_inclusion)
        prj = compose(pl.comp_projection, prj)
        cur = pl.complement
        cur_inv = invariants(cur)
    if cur.dim:
        result.residual = cur
        result.residual_inclusion = inc
        result.residual_projection = prj
    return result


def identify(M: Bimodule) -> Label | None:
    """The label of M when M is a catalogued indecomposable, else None."""
    if M.dim == 0:
        return None
    inv = invariants(M)
    for label in candidate_labels(M):
        if label.dim != M.dim or label_invariants(label) != inv:
            continue
        if is_isomorphic(construct(label), M) is not None:
            return label
    return None


def random_basis_change(M: Bimodule, rng: random.Random, spread: int = 2) -> tuple[Bimodule, Mat]:
    """Conjugate M by a random unimodular integer matrix.

    The matrix is a product of 3n random elementary row operations with
    coefficients in +-1..+-spread, followed by a row permutation, so both it
    and its inverse stay integral and the conjugate stays readable.
    """
    n = M.dim
    if n == 0:
        return M, Mat.zeros(0, 0)
    rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    if n > 1:
        coeffs = [c for c in range(-spread, spread + 1) if c]
        for _ in range(3 * n):
            i, j = rng.sample(range(n), 2)
            c = rng.choice(coeffs)
            rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
    perm = list(range(n))
    rng.shuffle(perm)
    g = Mat.from_rows([rows[p] for p in perm])
    return M.conjugate(g), g


def decompose_labels(M: Bimodule) -> list[Label]:
    res = decompose(M)
    if res.residual is not None:
        raise DecompositionError(f"unrecognised residual of dimension {res.residual.dim}")
    return res.labels


__all__ = [
    "DecompositionError",
    "DecompositionResult",
    "Invariants",
    "Peel",
    "Summand",
    "band_eigenvalue_candidates",
    "candidate_labels",
    "decompose",
    "decompose_labels",
    "decompose_sequential",
    "identify",
    "endomorphism_idempotents",
    "idempotent_summand_oracle",
    "invariants",
    "is_isomorphic",
    "multiplicity",
    "pairing_matrix",
    "peel",
    "random_basis_change",
    "summand_test",
]
