"""Independent reference computations in sympy.

None of these call into the package's linear algebra; they rebuild each
quantity from the raw action matrices.
"""

from __future__ import annotations

import sympy as sp


def to_sympy(M) -> sp.Matrix:
    return sp.Matrix(M.nrows, M.ncols, lambda i, j: sp.Rational(str(M[i, j])))


def actions(B):
    return to_sympy(B.left), to_sympy(B.right)


def hom_dim(A, B) -> int:
    """dim of {T : T L_A = L_B T, T R_A = R_B T}, by vectorising T."""
    La, Ra = actions(A)
    Lb, Rb = actions(B)
    n, m = A.dim, B.dim
    if n == 0 or m == 0:
        return 0
    Ia, Ib = sp.eye(n), sp.eye(m)
    # vec(T X) = (X^T kron I) vec T, vec(Y T) = (I kron Y) vec T
    eqs = sp.Matrix.vstack(
        sp.kronecker_product(La.T, Ib) - sp.kronecker_product(Ia, Lb),
        sp.kronecker_product(Ra.T, Ib) - sp.kronecker_product(Ia, Rb),
    )
    return n * m - eqs.rank()


def tensor_dim(A, B) -> int:
    """dim A (x)_k B minus the rank of the relations a x (x) b - a (x) x b."""
    Ra = to_sympy(A.right)
    Lb = to_sympy(B.left)
    rel = sp.kronecker_product(Ra, sp.eye(B.dim)) - sp.kronecker_product(sp.eye(A.dim), Lb)
    return A.dim * B.dim - rel.rank()


def rank(M) -> int:
    return to_sympy(M).rank()


def rref(M):
    R, piv = to_sympy(M).rref()
    return R, list(piv)
