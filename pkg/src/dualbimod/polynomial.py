"""Exact univariate polynomials: determinant interpolation and rational roots."""

from __future__ import annotations

from typing import Callable

from gmpy2 import mpq

from .linalg import Mat, det


def interpolate_det(matrix_at: Callable[[mpq], Mat], degree: int) -> list[mpq]:
    """Coefficients (constant term first) of t -> det(matrix_at(t)).

    The determinant has degree at most ``degree``; it is sampled at
    t = 0..degree and recovered by Newton interpolation.
    """
    xs = [mpq(i) for i in range(degree + 1)]
    ys = [det(matrix_at(x)) for x in xs]
    # divided differences
    coef = list(ys)
    for j in range(1, len(xs)):
        for i in range(len(xs) - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    # expand the Newton form into monomial coefficients
    poly = [mpq(0)]
    for i in range(len(xs) - 1, -1, -1):
        # poly = poly * (t - xs[i]) + coef[i]
        shifted = [mpq(0)] + poly
        for k in range(len(poly)):
            shifted[k] -= xs[i] * poly[k]
        shifted[0] += coef[i]
        poly = shifted
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return poly


def rational_roots(coeffs: list[mpq]) -> dict[mpq, int]:
    """Rational roots with multiplicity; the zero polynomial has none reported."""
    if all(c == 0 for c in coeffs) or len(coeffs) <= 1:
        return {}
    import math

    import sympy

    den = math.lcm(*(int(c.denominator) for c in coeffs))
    ints = [int(c * den) for c in reversed(coeffs)]
    poly = sympy.Poly.from_list(ints, sympy.Symbol("t"), domain=sympy.ZZ)
    return {mpq(int(r.p), int(r.q)): int(m) for r, m in poly.ground_roots().items()}
