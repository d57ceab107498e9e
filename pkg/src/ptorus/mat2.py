"""Exact 2x2 matrices as nested tuples ``((a, b), (c, d))``."""

from __future__ import annotations

Mat = tuple[tuple[int, int], tuple[int, int]]

IDENTITY: Mat = ((1, 0), (0, 1))
R_MAT: Mat = ((1, 1), (0, 1))
L_MAT: Mat = ((1, 0), (1, 1))


def mul(m: Mat, n: Mat) -> Mat:
    (a, b), (c, d) = m
    (e, f), (g, h) = n
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def det(m: Mat):
    (a, b), (c, d) = m
    return a * d - b * c


def trace(m: Mat):
    return m[0][0] + m[1][1]


def inv(m: Mat) -> Mat:
    """Inverse of a determinant-one matrix."""
    (a, b), (c, d) = m
    return ((d, -b), (-c, a))


def neg(m: Mat) -> Mat:
    (a, b), (c, d) = m
    return ((-a, -b), (-c, -d))


def power(m: Mat, n: int) -> Mat:
    if n < 0:
        m, n = inv(m), -n
    out = IDENTITY
    while n:
        if n & 1:
            out = mul(out, m)
        m = mul(m, m)
        n >>= 1
    return out


def apply(m: Mat, v):
    (a, b), (c, d) = m
    x, y = v
    return (a * x + b * y, c * x + d * y)


def product(mats) -> Mat:
    out = IDENTITY
    for m in mats:
        out = mul(out, m)
    return out


def as_mat(rows) -> Mat:
    (a, b), (c, d) = rows
    return ((a, b), (c, d))
