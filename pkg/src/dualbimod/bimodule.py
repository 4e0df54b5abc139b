"""Bimodules over the dual numbers D = k[x]/(x^2).

A bimodule is a vector space with two commuting square-zero operators:
``left`` is the left action of x and ``right`` the right action.  Morphisms
are matrices intertwining both actions.  Everything is exact over Q.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq

from .labels import (
    BandLabel,
    Label,
    ProjInjLabel,
    RegularLabel,
    StringLabel,
)
from .linalg import (
    ONE,
    ZERO,
    Mat,
    Subspace,
    _Echelon,
    block_diag,
    format_scalar,
    inverse,
    nullspace_sparse,
    rref_sparse,
    scalar,
    rank as _rank,
    sparse,
)


class BimoduleError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Bimodule:
    left: Mat
    right: Mat
    basis_names: tuple[str, ...] | None = None

    def __post_init__(self):
        n = self.left.nrows
        if self.left.shape != (n, n) or self.right.shape != (n, n):
            raise BimoduleError("actions must be square matrices of equal size")
        if self.basis_names is not None and len(self.basis_names) != n:
            raise BimoduleError("basis_names length does not match dimension")

    @property
    def dim(self) -> int:
        return self.left.nrows

    def check(self) -> None:
        """Raise BimoduleError unless L^2 = R^2 = 0 and LR = RL."""
        L, R = self.left, self.right
        if not (L @ L).is_zero():
            raise BimoduleError("left action of x does not square to zero")
        if not (R @ R).is_zero():
            raise BimoduleError("right action of x does not square to zero")
        if L @ R != R @ L:
            raise BimoduleError("left and right actions do not commute")

    def is_valid(self) -> bool:
        try:
            self.check()
        except BimoduleError:
            return False
        return True

    def name(self, i: int) -> str:
        if self.basis_names is None:
            return f"e_{i + 1}"
        return self.basis_names[i]

    def conjugate(self, g: Mat) -> "Bimodule":
        """The same bimodule in new coordinates ``v' = g v``."""
        gi = inverse(g)
        return Bimodule(g @ self.left @ gi, g @ self.right @ gi)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "left": [[format_scalar(v) for v in row] for row in self.left.to_rows()],
            "right": [[format_scalar(v) for v in row] for row in self.right.to_rows()],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "Bimodule":
        if isinstance(data, str):
            data = json.loads(data)
        n = int(data["dim"])
        left = Mat.from_rows(data["left"], ncols=n) if n else Mat.zeros(0, 0)
        right = Mat.from_rows(data["right"], ncols=n) if n else Mat.zeros(0, 0)
        if left.nrows != n or right.nrows != n:
            raise BimoduleError("dimension does not match action matrices")
        bm = cls(left, right)
        bm.check()
        return bm

    def __repr__(self) -> str:
        return f"Bimodule(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class Morphism:
    src: Bimodule
    dst: Bimodule
    matrix: Mat

    def __post_init__(self):
        if self.matrix.shape != (self.dst.dim, self.src.dim):
            raise BimoduleError(
                f"matrix shape {self.matrix.shape} does not fit "
                f"{self.src.dim} -> {self.dst.dim}"
            )

    def is_bimodule_map(self) -> bool:
        T = self.matrix
        return (
            T @ self.src.left == self.dst.left @ T
            and T @ self.src.right == self.dst.right @ T
        )

    def check(self) -> "Morphism":
        if not self.is_bimodule_map():
            raise BimoduleError("matrix does not intertwine the actions")
        return self

    def __call__(self, vec: Sequence) -> list[mpq]:
        return self.matrix.apply([scalar(v) for v in vec])

    def __matmul__(self, other: "Morphism") -> "Morphism":
        return compose(self, other)

    def __add__(self, other: "Morphism") -> "Morphism":
        _same_ends(self, other)
        return Morphism(self.src, self.dst, self.matrix + other.matrix)

    def __sub__(self, other: "Morphism") -> "Morphism":
        _same_ends(self, other)
        return Morphism(self.src, self.dst, self.matrix - other.matrix)

    def scale(self, c) -> "Morphism":
        return Morphism(self.src, self.dst, self.matrix.scale(c))

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def __repr__(self) -> str:
        return f"Morphism({self.src.dim} -> {self.dst.dim})"


def _same_ends(f: Morphism, g: Morphism) -> None:
    if f.src is not g.src or f.dst is not g.dst:
        if f.matrix.shape != g.matrix.shape:
            raise BimoduleError("morphisms have different shapes")


def compose(g: Morphism, f: Morphism) -> Morphism:
    """``g after f``."""
    if f.dst.dim != g.src.dim:
        raise BimoduleError("cannot compose: f.dst does not match g.src")
    return Morphism(f.src, g.dst, g.matrix @ f.matrix)


def identity(M: Bimodule) -> Morphism:
    return Morphism(M, M, Mat.identity(M.dim))


def zero_map(A: Bimodule, B: Bimodule) -> Morphism:
    return Morphism(A, B, Mat.zeros(B.dim, A.dim))


ZERO_BIMODULE = Bimodule(Mat.zeros(0, 0), Mat.zeros(0, 0), ())


# ---------------------------------------------------------------------------
# Constructors


def _nilpotent_2() -> Mat:
    return Mat.from_rows([[0, 0], [1, 0]])


def regular() -> Bimodule:
    """D itself, basis (1, x)."""
    x = _nilpotent_2()
    return Bimodule(x, x, ("1", "x"))


def proj_inj() -> Bimodule:
    """D (x)_k D, basis 1(x)1, 1(x)x, x(x)1, x(x)x."""
    x = _nilpotent_2()
    e = Mat.identity(2)
    return Bimodule(x.kron(e), e.kron(x), ("1⊗1", "1⊗x", "x⊗1", "x⊗x"))


def string_m(k: int) -> Bimodule:
    """M_k on m_1..m_{2k+3}: x.m_{2j} = m_{2j+1}, m_{2j}.x = m_{2j-1}."""
    n = 2 * k + 3
    L = [dict() for _ in range(n)]
    R = [dict() for _ in range(n)]
    for j in range(1, k + 2):
        src = 2 * j - 1  # 0-based index of m_{2j}
        L[src + 1][src] = ONE
        R[src - 1][src] = ONE
    names = tuple(f"m_{i}" for i in range(1, n + 1))
    return Bimodule(Mat(n, n, L), Mat(n, n, R), names)


def band(length: int, eigenvalue) -> Bimodule:
    """B_k(lambda): top block t_1..t_k, bottom block b_1..b_k.

    Left x maps t_i to b_i; right x maps the top block to the bottom block by
    the Jordan cell with ``eigenvalue`` on the diagonal and ones above it.
    """
    lam = scalar(eigenvalue)
    if lam == 0:
        raise BimoduleError("band eigenvalue must be nonzero")
    k = length
    n = 2 * k
    L = [dict() for _ in range(n)]
    R = [dict() for _ in range(n)]
    for i in range(k):
        L[k + i][i] = ONE
        R[k + i][i] = lam
        if i + 1 < k:
            R[k + i][i + 1] = ONE
    names = tuple(f"t_{i}" for i in range(1, k + 1)) + tuple(f"b_{i}" for i in range(1, k + 1))
    return Bimodule(Mat(n, n, L), Mat(n, n, R), names)


@functools.lru_cache(maxsize=None)
def construct(label: Label) -> Bimodule:
    """The indecomposable bimodule named by ``label``.

    N_k, S_k and W_k are quotients of M_k by span{m_{2k+3}}, span{m_1} and
    span{m_1, m_{2k+3}}; the basis of W_k is renamed w_1..w_{2k+1}.
    """
    if isinstance(label, RegularLabel):
        return regular()
    if isinstance(label, ProjInjLabel):
        return proj_inj()
    if isinstance(label, BandLabel):
        return band(label.length, label.eigenvalue)
    if not isinstance(label, StringLabel):
        raise TypeError(f"not a label: {label!r}")
    k = label.k
    m = string_m(k)
    if label.shape == "M":
        return m
    n = m.dim
    first = [ONE] + [ZERO] * (n - 1)
    last = [ZERO] * (n - 1) + [ONE]
    kill = {"N": [last], "S": [first], "W": [first, last]}[label.shape]
    q, _ = quotient_by_span(m, kill)
    if label.shape == "W":
        q = Bimodule(q.left, q.right, tuple(f"w_{i}" for i in range(1, q.dim + 1)))
    return q


def direct_sum(*mods: Bimodule) -> Bimodule:
    if not mods:
        return ZERO_BIMODULE
    names = None
    if all(m.basis_names is not None for m in mods):
        names = tuple(n for m in mods for n in m.basis_names)
    return Bimodule(
        block_diag(*(m.left for m in mods)),
        block_diag(*(m.right for m in mods)),
        names,
    )


def quotient_by_span(M: Bimodule, vectors: Sequence[Sequence]) -> tuple[Bimodule, Morphism]:
    """Quotient of M by the span of ``vectors`` and the projection onto it.

    The quotient basis is the set of coordinates that are not pivots of the
    reduced echelon form of the span, in increasing order.
    """
    n = M.dim
    vecs = [v if isinstance(v, dict) else sparse(v) for v in vectors]
    proj, section, keep = _quotient_maps(vecs, n)
    sub = Subspace(vecs, n)
    for v in sub.basis:
        if not sub.contains(M.left.apply_sparse(v)) or not sub.contains(M.right.apply_sparse(v)):
            raise BimoduleError("not a subbimodule")
    names = None
    if M.basis_names is not None:
        names = tuple(M.basis_names[c] for c in keep)
    Q = Bimodule(proj @ M.left @ section, proj @ M.right @ section, names)
    return Q, Morphism(M, Q, proj)


def _quotient_maps(vecs: Sequence[dict], n: int) -> tuple[Mat, Mat, list[int]]:
    pivots, prows = rref_sparse(vecs)
    pivset = set(pivots)
    keep = [c for c in range(n) if c not in pivset]
    pos = {c: i for i, c in enumerate(keep)}
    cols: list[dict] = []
    prow_of = dict(zip(pivots, prows))
    for c in range(n):
        if c in pos:
            cols.append({pos[c]: ONE})
        else:
            cols.append({pos[j]: -v for j, v in prow_of[c].items() if j != c})
    proj = Mat.from_sparse_columns(cols, len(keep))
    section = Mat.from_sparse_columns([{c: ONE} for c in keep], n)
    return proj, section, keep


def submodule(M: Bimodule, vectors: Sequence[dict]) -> tuple[Bimodule, Morphism]:
    """The subbimodule spanned by independent, action-stable ``vectors``.

    Returns the subbimodule in the given basis and its inclusion into M.
    """
    sub = Subspace(vectors, M.dim)
    if sub.dim != len(vectors):
        raise BimoduleError("spanning vectors are not independent")
    Lcols, Rcols = [], []
    for v in sub.basis:
        try:
            Lcols.append(sub.coords(M.left.apply_sparse(v)))
            Rcols.append(sub.coords(M.right.apply_sparse(v)))
        except ValueError:
            raise BimoduleError("not a subbimodule") from None
    d = sub.dim
    S = Bimodule(Mat.from_columns(Lcols, d), Mat.from_columns(Rcols, d))
    incl = Mat.from_sparse_columns(sub.basis, M.dim)
    return S, Morphism(S, M, incl)


# ---------------------------------------------------------------------------
# Tensor product over D


@dataclass(frozen=True, eq=False)
class TensorProduct:
    """``left (x)_D right`` with the maps to and from the k-tensor product.

    Ambient coordinates are pairs (i, j) flattened as ``i * right.dim + j``.
    ``proj`` sends an ambient vector to its class, ``section`` embeds the
    quotient basis (the non-pivot pairs ``pairs``) back into the ambient space.
    """

    left: Bimodule
    right: Bimodule
    module: Bimodule
    proj_cols: tuple[dict, ...]
    pairs: tuple[tuple[int, int], ...]
    _proj: Mat = field(repr=False)

    @property
    def dim(self) -> int:
        return self.module.dim

    @property
    def proj(self) -> Mat:
        return self._proj

    def class_of(self, ambient: dict) -> dict:
        out: dict = {}
        cols = self.proj_cols
        for a, c in ambient.items():
            for q, v in cols[a].items():
                w = out.get(q, ZERO) + c * v
                if w:
                    out[q] = w
                else:
                    out.pop(q, None)
        return out

    def pure_sparse(self, u: dict, v: dict) -> dict:
        n = self.right.dim
        amb = {}
        for i, a in u.items():
            for j, b in v.items():
                amb[i * n + j] = a * b
        return self.class_of(amb)

    def pure(self, u: Sequence, v: Sequence) -> list[mpq]:
        """Coordinates of the class of ``u (x) v``."""
        d = self.pure_sparse(sparse(u), sparse(v))
        return [d.get(i, ZERO) for i in range(self.dim)]

    def pure_basis(self, i: int, j: int) -> dict:
        return self.class_of({i * self.right.dim + j: ONE})


def _build_tensor(M: Bimodule, N: Bimodule) -> TensorProduct:
    m, n = M.dim, N.dim
    Rcols = M.right.sparse_columns()
    Lcols = N.left.sparse_columns()
    relations = []
    for i in range(m):
        for j in range(n):
            rel: dict = {}
            for a, v in Rcols[i].items():
                rel[a * n + j] = rel.get(a * n + j, ZERO) + v
            for b, v in Lcols[j].items():
                idx = i * n + b
                w = rel.get(idx, ZERO) - v
                if w:
                    rel[idx] = w
                else:
                    rel.pop(idx, None)
            if rel:
                relations.append(rel)
    proj, _section, keep = _quotient_maps(relations, m * n)
    proj_cols = tuple(proj.sparse_columns())
    pairs = tuple(divmod(a, n) for a in keep)
    q = len(keep)
    Lm = M.left.sparse_columns()
    Rn = N.right.sparse_columns()

    def classify(amb: dict) -> dict:
        out: dict = {}
        for a, c in amb.items():
            for t, v in proj_cols[a].items():
                out[t] = out.get(t, ZERO) + c * v
        return {t: v for t, v in out.items() if v}

    Lq, Rq = [], []
    for i, j in pairs:
        Lq.append(classify({a * n + j: v for a, v in Lm[i].items()}))
        Rq.append(classify({i * n + b: v for b, v in Rn[j].items()}))
    names = None
    if M.basis_names is not None and N.basis_names is not None:
        names = tuple(f"{M.basis_names[i]}⊗{N.basis_names[j]}" for i, j in pairs)
    module = Bimodule(Mat.from_sparse_columns(Lq, q), Mat.from_sparse_columns(Rq, q), names)
    return TensorProduct(M, N, module, proj_cols, pairs, proj)


_tensor_cache: dict = {}


def tensor_over_D(M: Bimodule, N: Bimodule) -> TensorProduct:
    """``M (x)_D N``, cached per pair of bimodule objects."""
    key = (id(M), id(N))
    hit = _tensor_cache.get(key)
    if hit is not None and hit.left is M and hit.right is N:
        return hit
    t = _build_tensor(M, N)
    if len(_tensor_cache) > 4096:
        _tensor_cache.clear()
    _tensor_cache[key] = t
    return t


def tensor(M: Bimodule, N: Bimodule) -> Bimodule:
    return tensor_over_D(M, N).module


def tensor_morphisms(f: Morphism, g: Morphism) -> Morphism:
    """The map ``f (x)_D g`` between the tensor quotients."""
    t1 = tensor_over_D(f.src, g.src)
    t2 = tensor_over_D(f.dst, g.dst)
    fc = f.matrix.sparse_columns()
    gc = g.matrix.sparse_columns()
    cols = [t2.pure_sparse(fc[i], gc[j]) for i, j in t1.pairs]
    return Morphism(t1.module, t2.module, Mat.from_sparse_columns(cols, t2.dim))


def whisker_left(F: Bimodule, f: Morphism) -> Morphism:
    """``id_F (x) f``."""
    return tensor_morphisms(identity(F), f)


def whisker_right(f: Morphism, F: Bimodule) -> Morphism:
    """``f (x) id_F``."""
    return tensor_morphisms(f, identity(F))


def unitor_left(M: Bimodule, D: Bimodule | None = None) -> Morphism:
    """``D (x)_D M -> M``, d (x) m |-> d m."""
    D = D if D is not None else construct(RegularLabel())
    t = tensor_over_D(D, M)
    Lc = M.left.sparse_columns()
    cols = [({j: ONE} if a == 0 else dict(Lc[j])) for a, j in t.pairs]
    return Morphism(t.module, M, Mat.from_sparse_columns(cols, M.dim))


def unitor_right(M: Bimodule, D: Bimodule | None = None) -> Morphism:
    """``M (x)_D D -> M``, m (x) d |-> m d."""
    D = D if D is not None else construct(RegularLabel())
    t = tensor_over_D(M, D)
    Rc = M.right.sparse_columns()
    cols = [({i: ONE} if b == 0 else dict(Rc[i])) for i, b in t.pairs]
    return Morphism(t.module, M, Mat.from_sparse_columns(cols, M.dim))


def associator(A: Bimodule, B: Bimodule, C: Bimodule) -> Morphism:
    """``(A (x) B) (x) C -> A (x) (B (x) C)`` on representatives a (x) b (x) c."""
    tab = tensor_over_D(A, B)
    tl = tensor_over_D(tab.module, C)
    tbc = tensor_over_D(B, C)
    tr = tensor_over_D(A, tbc.module)
    cols = []
    for q, l in tl.pairs:
        i, j = tab.pairs[q]
        cols.append(tr.pure_sparse({i: ONE}, tbc.pure_basis(j, l)))
    return Morphism(tl.module, tr.module, Mat.from_sparse_columns(cols, tr.dim))


# ---------------------------------------------------------------------------
# Hom spaces


def _generators(M: Bimodule) -> list[int]:
    """Coordinates whose unit vectors span a complement of rad M = xM + Mx."""
    rad = M.left.sparse_columns() + M.right.sparse_columns()
    pivots, _ = rref_sparse(rad)
    pivset = set(pivots)
    return [c for c in range(M.dim) if c not in pivset]


class _Presentation:
    """Generators of M and the linear relations among g, xg, gx, xgx."""

    def __init__(self, M: Bimodule):
        self.M = M
        gens = _generators(M)
        L, R = M.left, M.right
        spanning = []
        for g in gens:
            e = {g: ONE}
            le = L.apply_sparse(e)
            re_ = R.apply_sparse(e)
            lre = L.apply_sparse(re_)
            spanning.extend([e, le, re_, lre])
        self.gens = gens
        # relations: kernel of the map Q^{4t} -> M given by the spanning columns
        rows = [dict() for _ in range(M.dim)]
        for k, v in enumerate(spanning):
            for i, c in v.items():
                rows[i][k] = c
        self.relations = nullspace_sparse(rows, len(spanning))
        # a basis of M chosen among the spanning vectors, with its inverse
        chosen = []
        ech_rows = []
        ech = _Echelon()
        for k, v in enumerate(spanning):
            if ech.add(v) is not None:
                chosen.append(k)
                ech_rows.append(v)
        self.chosen = chosen
        basis_mat = Mat.from_sparse_columns(ech_rows, M.dim)
        self.basis_inv = inverse(basis_mat) if M.dim else Mat.zeros(0, 0)


@functools.lru_cache(maxsize=512)
def _presentation(M: Bimodule) -> _Presentation:
    return _Presentation(M)


def _hom_matrices(A: Bimodule, B: Bimodule) -> list[Mat]:
    """Basis matrices of Hom(A, B) via generators and relations of A."""
    if A.dim == 0 or B.dim == 0:
        return []
    pres = _presentation(A)
    t = len(pres.gens)
    nb = B.dim
    LB, RB = B.left.sparse_columns(), B.right.sparse_columns()
    LRB = (B.left @ B.right).sparse_columns()
    ops = [None, LB, RB, LRB]
    # unknown index: generator s, coordinate b -> s * nb + b
    eqs = []
    for rel in pres.relations:
        rows: dict[int, dict] = {}
        for k, c in rel.items():
            s, op = divmod(k, 4)
            base = s * nb
            if op == 0:
                for b in range(nb):
                    r = rows.setdefault(b, {})
                    r[base + b] = r.get(base + b, ZERO) + c
            else:
                cols = ops[op]
                for b in range(nb):
                    for i, v in cols[b].items():
                        r = rows.setdefault(i, {})
                        r[base + b] = r.get(base + b, ZERO) + c * v
        for r in rows.values():
            r = {j: v for j, v in r.items() if v}
            if r:
                eqs.append(r)
    sols = nullspace_sparse(eqs, t * nb)
    mats = []
    for sol in sols:
        images = []
        for s in range(t):
            v = {b: sol[s * nb + b] for b in range(nb) if sol.get(s * nb + b)}
            lv = B.left.apply_sparse(v)
            rv = B.right.apply_sparse(v)
            images.extend([v, lv, rv, B.left.apply_sparse(rv)])
        V = Mat.from_sparse_columns([images[k] for k in pres.chosen], nb)
        mats.append(V @ pres.basis_inv)
    return mats


def dual(M: Bimodule) -> Bimodule:
    """M* with x.f = f(- x) and f.x = f(x -): left = R^T, right = L^T."""
    names = None
    if M.basis_names is not None:
        names = tuple(f"{n}*" for n in M.basis_names)
    return Bimodule(M.right.T, M.left.T, names)


def hom_space_presented(A: Bimodule, B: Bimodule) -> list[Morphism]:
    """Hom(A, B) from generators and relations of A, or of B* when cheaper.

    Independent of :func:`hom_space`; the two bases span the same space but
    are not equal element by element.  Uses Hom(A, B) = Hom(B*, A*) by transpose.
    """
    if A.dim == 0 or B.dim == 0:
        return []
    ga = len(_generators(A))
    # generators of B* correspond to the socle of B
    gb = len(_generators(dual(B)))
    if ga * B.dim <= gb * A.dim:
        mats = _hom_matrices(A, B)
    else:
        mats = [T.T for T in _hom_matrices(_dual_cached(B), _dual_cached(A))]
    return [Morphism(A, B, T) for T in mats]


@functools.lru_cache(maxsize=512)
def _dual_cached(M: Bimodule) -> Bimodule:
    return dual(M)


def hom_space(A: Bimodule, B: Bimodule) -> list[Morphism]:
    """Basis of Hom_{D-D}(A, B).

    Solves T L_A = L_B T and T R_A = R_B T for the flattened matrix T; the
    basis is the kernel basis with free entries taken in increasing index
    order, each set to one.
    """
    if A.dim == 0 or B.dim == 0:
        return []
    na, nb = A.dim, B.dim
    eqs = []
    for XA, XB in ((A.left, B.left), (A.right, B.right)):
        XAc = XA.sparse_columns()
        for i in range(nb):
            for j in range(na):
                # (T XA)_{ij} - (XB T)_{ij}
                r: dict = {}
                for k, v in XAc[j].items():
                    r[i * na + k] = r.get(i * na + k, ZERO) + v
                for k, v in XB.rows[i].items():
                    r[k * na + j] = r.get(k * na + j, ZERO) - v
                r = {a: v for a, v in r.items() if v}
                if r:
                    eqs.append(r)
    sols = nullspace_sparse(eqs, na * nb)
    out = []
    for sol in sols:
        rows = [dict() for _ in range(nb)]
        for a, v in sol.items():
            i, j = divmod(a, na)
            rows[i][j] = v
        out.append(Morphism(A, B, Mat(nb, na, rows)))
    return out


def hom_left_regular(M: Bimodule) -> Bimodule:
    """Hom_{D-}(M, D) with (x.f)(m) = f(m x) and (f.x)(m) = f(m) x."""
    D = regular()
    n = M.dim
    # left-module maps T: M -> D (2 x n) with T L_M = L_D T
    eqs = []
    LMc = M.left.sparse_columns()
    for i in range(2):
        for j in range(n):
            r: dict = {}
            for k, v in LMc[j].items():
                r[i * n + k] = r.get(i * n + k, ZERO) + v
            for k, v in D.left.rows[i].items():
                r[k * n + j] = r.get(k * n + j, ZERO) - v
            r = {a: v for a, v in r.items() if v}
            if r:
                eqs.append(r)
    sols = nullspace_sparse(eqs, 2 * n)
    space = Subspace(sols, 2 * n)

    def as_mat(vec: dict) -> Mat:
        rows = [dict(), dict()]
        for a, v in vec.items():
            i, j = divmod(a, n)
            rows[i][j] = v
        return Mat(2, n, rows)

    def flat(T: Mat) -> dict:
        return {i * n + j: v for i, r in enumerate(T.rows) for j, v in r.items()}

    Lcols, Rcols = [], []
    for s in space.basis:
        T = as_mat(s)
        Lcols.append(space.coords(flat(T @ M.right)))
        Rcols.append(space.coords(flat(D.right @ T)))
    d = space.dim
    return Bimodule(Mat.from_columns(Lcols, d), Mat.from_columns(Rcols, d))


# ---------------------------------------------------------------------------
# small invariants


def radical(M: Bimodule) -> Subspace:
    return Subspace(M.left.sparse_columns() + M.right.sparse_columns(), M.dim)


def socle_dim(M: Bimodule) -> int:
    rows = list(M.left.rows) + list(M.right.rows)
    return len(nullspace_sparse(rows, M.dim))


def valley_count(M: Bimodule) -> int:
    """dim(xM ∩ Mx); equals k for every string and band with k valleys."""
    L, R = M.left, M.right
    rl = _rank(L)
    rr = _rank(R)
    both = len(rref_sparse(L.sparse_columns() + R.sparse_columns())[0])
    return rl + rr - both
