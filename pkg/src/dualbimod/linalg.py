"""Exact dense-interface / sparse-storage linear algebra over the rationals.

Matrices keep each row as a ``{column: value}`` dict holding only nonzero
entries, with values of type :class:`gmpy2.mpq`.  Every routine is exact;
reduced row echelon forms are unique, so all bases derived from them are
reproducible run to run.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq

Scalar = mpq

ZERO = mpq(0)
ONE = mpq(1)


def scalar(value) -> mpq:
    """Coerce ints, Fractions, mpq or ``"p/q"`` strings to an exact scalar."""
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, float):
        raise TypeError("floating point values are not exact scalars")
    return mpq(value)


def format_scalar(value) -> str:
    """``"p/q"``, or ``"p"`` when the denominator is one."""
    return str(mpq(value))


class Mat:
    """Immutable exact matrix.

    ``rows`` is a tuple of dicts mapping column index to a nonzero entry.
    Construct from nested lists with :meth:`from_rows`.
    """

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Sequence[dict] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            rows = tuple({} for _ in range(nrows))
        elif len(rows) != nrows:
            raise ValueError(f"expected {nrows} rows, got {len(rows)}")
        self.rows = tuple(rows)

    # -- constructors -------------------------------------------------

    @classmethod
    def from_rows(cls, data: Sequence[Sequence], ncols: int | None = None) -> "Mat":
        data = [list(r) for r in data]
        if ncols is None:
            ncols = len(data[0]) if data else 0
        rows = []
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
            d = {}
            for j, v in enumerate(r):
                v = scalar(v)
                if v:
                    d[j] = v
            rows.append(d)
        return cls(len(rows), ncols, rows)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int) -> "Mat":
        rows = [dict() for _ in range(nrows)]
        for j, c in enumerate(cols):
            if len(c) != nrows:
                raise ValueError("column length mismatch")
            for i, v in enumerate(c):
                if v:
                    rows[i][j] = scalar(v)
        return cls(nrows, len(cols), rows)

    @classmethod
    def from_sparse_columns(cls, cols: Sequence[dict], nrows: int) -> "Mat":
        rows = [dict() for _ in range(nrows)]
        for j, c in enumerate(cols):
            for i, v in c.items():
                if v:
                    rows[i][j] = v
        return cls(nrows, len(cols), rows)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Mat":
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls(n, n, [{i: ONE} for i in range(n)])

    # -- access -------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij) -> mpq:
        i, j = ij
        return self.rows[i].get(j, ZERO)

    def to_rows(self) -> list[list[mpq]]:
        return [[r.get(j, ZERO) for j in range(self.ncols)] for r in self.rows]

    def row(self, i: int) -> list[mpq]:
        r = self.rows[i]
        return [r.get(j, ZERO) for j in range(self.ncols)]

    def col(self, j: int) -> list[mpq]:
        return [r.get(j, ZERO) for r in self.rows]

    def sparse_columns(self) -> list[dict]:
        cols = [dict() for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                cols[j][i] = v
        return cols

    def columns(self) -> list[list[mpq]]:
        return [self.col(j) for j in range(self.ncols)]

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    # -- algebra ------------------------------------------------------

    @property
    def T(self) -> "Mat":
        rows = [dict() for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                rows[j][i] = v
        return Mat(self.ncols, self.nrows, rows)

    def __matmul__(self, other: "Mat") -> "Mat":
        if not isinstance(other, Mat):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        orows = other.rows
        out = []
        for r in self.rows:
            acc: dict = {}
            for k, a in r.items():
                for j, b in orows[k].items():
                    acc[j] = acc.get(j, ZERO) + a * b
            out.append({j: v for j, v in acc.items() if v})
        return Mat(self.nrows, other.ncols, out)

    def apply(self, vec: Sequence) -> list[mpq]:
        """Matrix times a dense column vector."""
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return [sum((v * vec[j] for j, v in r.items()), ZERO) for r in self.rows]

    def apply_sparse(self, vec: dict) -> dict:
        out = {}
        for i, r in enumerate(self.rows):
            s = ZERO
            for j, v in r.items():
                x = vec.get(j)
                if x:
                    s += v * x
            if s:
                out[i] = s
        return out

    def _combine(self, other: "Mat", sign: int) -> "Mat":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        out = []
        for a, b in zip(self.rows, other.rows):
            d = dict(a)
            for j, v in b.items():
                w = d.get(j, ZERO) + sign * v
                if w:
                    d[j] = w
                else:
                    d.pop(j, None)
            out.append(d)
        return Mat(self.nrows, self.ncols, out)

    def __add__(self, other: "Mat") -> "Mat":
        return self._combine(other, 1)

    def __sub__(self, other: "Mat") -> "Mat":
        return self._combine(other, -1)

    def __neg__(self) -> "Mat":
        return self.scale(-1)

    def scale(self, c) -> "Mat":
        c = scalar(c)
        if not c:
            return Mat.zeros(self.nrows, self.ncols)
        return Mat(self.nrows, self.ncols, [{j: c * v for j, v in r.items()} for r in self.rows])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return not any(self.rows)

    def trace(self) -> mpq:
        return sum((r.get(i, ZERO) for i, r in enumerate(self.rows)), ZERO)

    def kron(self, other: "Mat") -> "Mat":
        p, q = other.shape
        out = []
        for r in self.rows:
            for orow in other.rows:
                d = {}
                for j, a in r.items():
                    for l, b in orow.items():
                        d[j * q + l] = a * b
                out.append(d)
        return Mat(self.nrows * p, self.ncols * q, out)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Mat":
        cpos = {c: k for k, c in enumerate(cols)}
        out = []
        for i in rows:
            out.append({cpos[j]: v for j, v in self.rows[i].items() if j in cpos})
        return Mat(len(rows), len(cols), out)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_scalar(x) for x in row) for row in self.to_rows())
        return f"Mat({self.nrows}x{self.ncols}: [{body}])"


def block_diag(*mats: Mat) -> Mat:
    nrows = sum(m.nrows for m in mats)
    ncols = sum(m.ncols for m in mats)
    out = []
    off = 0
    for m in mats:
        for r in m.rows:
            out.append({j + off: v for j, v in r.items()})
        off += m.ncols
    return Mat(nrows, ncols, out)


def hstack(*mats: Mat) -> Mat:
    if not mats:
        raise ValueError("nothing to stack")
    n = mats[0].nrows
    out = [dict() for _ in range(n)]
    off = 0
    for m in mats:
        if m.nrows != n:
            raise ValueError("row count mismatch")
        for i, r in enumerate(m.rows):
            for j, v in r.items():
                out[i][j + off] = v
        off += m.ncols
    return Mat(n, off, out)


def vstack(*mats: Mat) -> Mat:
    if not mats:
        raise ValueError("nothing to stack")
    n = mats[0].ncols
    rows = []
    for m in mats:
        if m.ncols != n:
            raise ValueError("column count mismatch")
        rows.extend(dict(r) for r in m.rows)
    return Mat(len(rows), n, rows)


# ---------------------------------------------------------------------------
# Row reduction on sparse rows


class _Echelon:
    """Incrementally maintained reduced row echelon basis of a row space."""

    __slots__ = ("pivots", "occurs")

    def __init__(self):
        self.pivots: dict[int, dict] = {}
        self.occurs: defaultdict[int, set] = defaultdict(set)

    def reduce(self, vec: dict) -> dict:
        """Remainder of ``vec`` modulo the current row space (no pivot entries)."""
        r = dict(vec)
        pivots = self.pivots
        for c in [c for c in r if c in pivots]:
            f = r.get(c)
            if not f:
                continue
            for j, v in pivots[c].items():
                w = r.get(j, ZERO) - f * v
                if w:
                    r[j] = w
                else:
                    del r[j]
        return r

    def add(self, vec: dict) -> int | None:
        """Insert a vector; return its new pivot column, or None if dependent."""
        r = self.reduce(vec)
        if not r:
            return None
        pc = min(r)
        inv = 1 / r[pc]
        if inv != 1:
            r = {j: v * inv for j, v in r.items()}
        pivots, occurs = self.pivots, self.occurs
        for q in list(occurs.get(pc, ())):
            prow = pivots[q]
            f = prow[pc]
            for j, v in r.items():
                w = prow.get(j, ZERO) - f * v
                if w:
                    prow[j] = w
                    occurs[j].add(q)
                else:
                    prow.pop(j, None)
                    occurs[j].discard(q)
        pivots[pc] = r
        for j in r:
            occurs[j].add(pc)
        return pc

    def sorted_rows(self) -> tuple[list[int], list[dict]]:
        cols = sorted(self.pivots)
        return cols, [self.pivots[c] for c in cols]


def rref_sparse(rows: Iterable[dict]) -> tuple[list[int], list[dict]]:
    """Pivot columns and nonzero rows of the reduced row echelon form."""
    ech = _Echelon()
    for r in rows:
        if r:
            ech.add(r)
    return ech.sorted_rows()


def rref(A: Mat) -> tuple[Mat, list[int]]:
    """Unique reduced row echelon form of ``A`` and its pivot columns."""
    pivots, rows = rref_sparse(A.rows)
    rows = [dict(r) for r in rows] + [{} for _ in range(A.nrows - len(rows))]
    return Mat(A.nrows, A.ncols, rows), pivots


def rank_sparse(rows: Iterable[dict]) -> int:
    """Rank by forward elimination only (no back substitution)."""
    pivots: dict[int, dict] = {}
    for r in rows:
        if not r:
            continue
        r = dict(r)
        while r:
            pc = min(r)
            prow = pivots.get(pc)
            if prow is None:
                pivots[pc] = r
                break
            f = r[pc] / prow[pc]
            for j, v in prow.items():
                w = r.get(j, ZERO) - f * v
                if w:
                    r[j] = w
                else:
                    r.pop(j, None)
    return len(pivots)


def rank(A: Mat) -> int:
    return rank_sparse(A.rows)


def nullspace_sparse(rows: Iterable[dict], ncols: int) -> list[dict]:
    """Kernel basis as sparse vectors: one per free column, in increasing order."""
    pivots, prows = rref_sparse(rows)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    fpos = {c: k for k, c in enumerate(free)}
    basis: list[dict] = [{c: ONE} for c in free]
    for p, r in zip(pivots, prows):
        for j, v in r.items():
            if j != p:
                basis[fpos[j]][p] = -v
    return basis


def kernel_basis(A: Mat) -> Mat:
    """Columns form a basis of the null space of ``A``."""
    vecs = nullspace_sparse(A.rows, A.ncols)
    return Mat.from_sparse_columns(vecs, A.ncols)


def solve(A: Mat, b: Sequence) -> list[mpq] | None:
    """Particular solution of ``A x = b`` with free variables zero, or None."""
    if len(b) != A.nrows:
        raise ValueError(f"rhs length {len(b)} does not match {A.nrows} rows")
    n = A.ncols
    aug = []
    for r, bi in zip(A.rows, b):
        d = dict(r)
        bi = scalar(bi)
        if bi:
            d[n] = bi
        aug.append(d)
    pivots, prows = rref_sparse(aug)
    if pivots and pivots[-1] == n:
        return None
    x = [ZERO] * n
    for p, r in zip(pivots, prows):
        x[p] = r.get(n, ZERO)
    return x


def inverse(A: Mat) -> Mat:
    """Inverse of a square matrix; raises ValueError when singular."""
    n = A.nrows
    if A.ncols != n:
        raise ValueError("inverse of a non-square matrix")
    if n == 0:
        return Mat.zeros(0, 0)
    aug = [dict(r) for r in A.rows]
    for i in range(n):
        aug[i][n + i] = ONE
    pivots, prows = rref_sparse(aug)
    if len(pivots) < n or pivots[n - 1] >= n:
        raise ValueError("matrix is singular")
    out = [{j - n: v for j, v in r.items() if j >= n} for r in prows]
    return Mat(n, n, out)


def det(A: Mat) -> mpq:
    """Determinant by fraction-exact Gaussian elimination."""
    n = A.nrows
    if A.ncols != n:
        raise ValueError("determinant of a non-square matrix")
    rows = [dict(r) for r in A.rows]
    result = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i].get(c)), None)
        if piv is None:
            return ZERO
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            result = -result
        prow = rows[c]
        p = prow[c]
        result *= p
        for i in range(c + 1, n):
            f = rows[i].get(c)
            if not f:
                continue
            f = f / p
            r = rows[i]
            for j, v in prow.items():
                w = r.get(j, ZERO) - f * v
                if w:
                    r[j] = w
                else:
                    r.pop(j, None)
    return result


def is_invertible(A: Mat) -> bool:
    return A.nrows == A.ncols and rank(A) == A.nrows


class Subspace:
    """A subspace of ``Q^n`` given by a spanning set, with exact coordinates.

    The spanning vectors are reduced to an independent list (``basis``) in the
    order given; :meth:`coords` expresses a vector in that basis.
    """

    def __init__(self, vectors: Iterable[dict], n: int):
        self.n = n
        ech = _Echelon()
        # track combinations: extra coordinates n+k record which basis vector was used
        basis = []
        for v in vectors:
            if ech.reduce(v):
                basis.append(dict(v))
                ech.add(v)
        self.basis: list[dict] = basis
        track = _Echelon()
        for k, v in enumerate(basis):
            d = dict(v)
            d[n + k] = ONE
            track.add(d)
        self._pivots, self._rows = track.sorted_rows()
        self._ech = ech

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, vec: dict) -> bool:
        return not self._ech.reduce(vec)

    def coords(self, vec: dict) -> list[mpq]:
        """Coefficients c with sum c_k basis_k = vec; raises if vec is outside."""
        if not self.contains(vec):
            raise ValueError("vector is not in the subspace")
        n, d = self.n, self.dim
        # rows of the tracked echelon form are [R | E] with R = E @ basis
        c = [ZERO] * d
        for p, r in zip(self._pivots, self._rows):
            if p >= n:
                break
            coeff = vec.get(p)
            if not coeff:
                continue
            for j, v in r.items():
                if j >= n:
                    c[j - n] += coeff * v
        return c


def dense(vec: dict, n: int) -> list[mpq]:
    return [vec.get(i, ZERO) for i in range(n)]


def sparse(vec: Sequence) -> dict:
    out = {}
    for i, v in enumerate(vec):
        if v:
            out[i] = scalar(v)
    return out
