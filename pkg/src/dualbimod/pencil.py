"""Predicting Krull-Schmidt multiplicities from ranks of the pencil R - tL.

Dividing out the image of L R turns every copy of D (x) D into a copy of
M_0 and leaves the other indecomposables alone.  What remains has radical
square zero, so it is the same thing as the matrix pencil b - t a from a
complement T of the radical U = im L + im R into U.  Its Kronecker canonical
form is read off from ranks of block Toeplitz matrices:

* column minimal index e      <->  W_e
* row minimal index e >= 1    <->  M_{e-1}
* Jordan block at 0, size s   <->  S_{s-1}
* Jordan block at oo, size s  <->  N_{s-1}
* Jordan block at l, size s   <->  B_s(l)   (B_1(1) is D)

The prediction is only a guide: :func:`decompose` certifies every
multiplicity with the trace pairing before trusting it.
"""

from __future__ import annotations

from collections import Counter

from gmpy2 import mpq

from .bimodule import Bimodule, quotient_by_span
from .labels import BandLabel, Label, ProjInj, Regular, StringLabel
from .linalg import ONE, Mat, rank, rank_sparse, rref_sparse
from .polynomial import interpolate_det, rational_roots

_PROBES = (mpq(1009, 7), mpq(-2003, 11), mpq(3001, 13))


def _block_toeplitz(diag: Mat, sub: Mat, nrow_blocks: int, ncol_blocks: int) -> list[dict]:
    """Rows of the block matrix with ``diag`` at (i, i) and ``-sub`` at (i+1, i)."""
    p, q = diag.shape
    rows: list[dict] = []
    for bi in range(nrow_blocks):
        for r in range(p):
            row = {}
            if bi < ncol_blocks:
                for j, v in diag.rows[r].items():
                    row[bi * q + j] = v
            if 0 <= bi - 1 < ncol_blocks:
                for j, v in sub.rows[r].items():
                    row[(bi - 1) * q + j] = -v
            rows.append(row)
    return rows


def _nullity(rows: list[dict], ncols: int) -> int:
    return ncols - rank_sparse(rows)


def _generic_rank(a: Mat, b: Mat) -> int:
    return max(rank(b - a.scale(t)) for t in _PROBES)


def minimal_indices(a: Mat, b: Mat) -> Counter:
    """Column minimal indices of b - t a, as a Counter {index: count}."""
    q = a.ncols
    c = q - _generic_rank(a, b)
    out: Counter = Counter()
    found, prev, d = 0, 0, 0
    while found < c:
        nd = _nullity(_block_toeplitz(b, a, d + 2, d + 1), (d + 1) * q)
        upto = nd - prev  # number of indices <= d
        if upto > found:
            out[d] = upto - found
            found = upto
        prev = nd
        d += 1
        if d > q + 1:
            raise ArithmeticError("minimal index search did not terminate")
    return out


def jordan_sizes(a: Mat, b: Mat, lam, columns: int) -> Counter:
    """Sizes of the Jordan blocks of b - t a at t = lam ({size: count}).

    ``columns`` is the number of column minimal indices, each of which
    contributes j to the kernel of the j-th truncation.
    """
    q = a.ncols
    shifted = b - a.scale(lam)
    ge = [0]  # ge[j] = sum over blocks of min(j, size)
    j = 1
    while True:
        kern = _nullity(_block_toeplitz(shifted, a, j, j), j * q) - j * columns
        ge.append(kern)
        if ge[j] - ge[j - 1] == 0:
            break
        j += 1
    out: Counter = Counter()
    for s in range(1, j):
        at_least = ge[s] - ge[s - 1]
        at_least_next = ge[s + 1] - ge[s] if s + 1 < len(ge) else 0
        if at_least - at_least_next:
            out[s] = at_least - at_least_next
    return out


def radical_pencil(M: Bimodule) -> tuple[Mat, Mat]:
    """(a, b): the maps L, R from a coordinate complement of the radical into it."""
    rad_pivots, _ = rref_sparse(list(M.left.T.rows) + list(M.right.T.rows))
    top = [j for j in range(M.dim) if j not in set(rad_pivots)]
    return M.left.submatrix(rad_pivots, top), M.right.submatrix(rad_pivots, top)


def pencil_roots(a: Mat, b: Mat) -> dict:
    """Rational roots, with multiplicity, of a maximal minor of b - t a.

    Every finite eigenvalue of the pencil is a root of every maximal
    nonvanishing minor, so this is a superset of the rational spectrum.
    """
    r, t0 = max((rank(b - a.scale(t)), t) for t in _PROBES)
    if r == 0:
        return {}
    P = b - a.scale(t0)
    rows_sel, _ = rref_sparse(P.T.rows)
    cols_sel, _ = rref_sparse(P.rows)
    poly = interpolate_det(lambda t: (b - a.scale(t)).submatrix(rows_sel, cols_sel), r)
    return rational_roots(poly)


def predict_multiplicities(M: Bimodule) -> Counter | None:
    """Multiset of labels predicted for M, or None when they do not account for all of M."""
    out: Counter = Counter()
    if M.dim == 0:
        return out
    LR = M.left @ M.right
    proj = rank(LR)
    V = M
    if proj:
        V, _ = quotient_by_span(M, LR.T.rows)
        out[ProjInj] = proj
    if V.dim:
        a, b = radical_pencil(V)
        cols = minimal_indices(a, b)
        rows = minimal_indices(a.T, b.T)
        ncols = sum(cols.values())
        for e, cnt in cols.items():
            out[StringLabel("W", e)] += cnt
        for e, cnt in rows.items():
            if e == 0:
                return None  # only possible when the radical was chosen badly
            out[StringLabel("M", e - 1)] += cnt
        for s, cnt in jordan_sizes(a, b, 0, ncols).items():
            out[StringLabel("S", s - 1)] += cnt
        for s, cnt in jordan_sizes(b, a, 0, ncols).items():
            out[StringLabel("N", s - 1)] += cnt
        for lam in sorted(pencil_roots(a, b)):
            if lam == 0:
                continue
            for s, cnt in jordan_sizes(a, b, lam, ncols).items():
                label: Label = Regular if (s == 1 and lam == ONE) else BandLabel(s, lam)
                out[label] += cnt
    if proj:
        out[StringLabel("M", 0)] -= proj
        if out[StringLabel("M", 0)] < 0:
            return None
        if out[StringLabel("M", 0)] == 0:
            del out[StringLabel("M", 0)]
    if sum(lab.dim * c for lab, c in out.items()) != M.dim:
        return None
    return +out
