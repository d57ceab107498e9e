"""Bloch-Wigner dilogarithm ``D(z) = Im Li2(z) + arg(1 - z) log|z|``."""

from __future__ import annotations

import cmath
import math

__all__ = ["bloch_wigner"]

# B_{2k} / (2k+1)!  for the series  Li2(z) = sum_n B_n u^{n+1}/(n+1)!,  u = -log(1-z)
_BERNOULLI = (
    1.0, -0.5, 1 / 6, 0.0, -1 / 30, 0.0, 1 / 42, 0.0, -1 / 30, 0.0, 5 / 66, 0.0,
    -691 / 2730, 0.0, 7 / 6, 0.0, -3617 / 510, 0.0, 43867 / 798, 0.0, -174611 / 330,
    0.0, 854513 / 138, 0.0, -236364091 / 2730, 0.0, 8553103 / 6,
)


def _li2_small(z: complex) -> complex:
    """Li2 for ``|z| <= 1`` and ``Re z <= 1/2``, where ``|log(1-z)| <= pi/3``."""
    u = -cmath.log(1 - z)
    total = 0j
    term = u
    for n, b in enumerate(_BERNOULLI):
        # term = u^{n+1}/(n+1)!
        total += b * term
        term *= u / (n + 2)
    return total


def _d_core(z: complex) -> float:
    return _li2_small(z).imag + cmath.phase(1 - z) * math.log(abs(z))


def bloch_wigner(z: complex) -> float:
    """Bloch-Wigner dilogarithm; real-analytic off 0 and 1, zero on the real line."""
    z = complex(z)
    if z.imag == 0.0:
        return 0.0
    # six-fold symmetry: bring z into |w| <= 1 and Re w <= 1/2
    sgn = 1.0
    if abs(z) > 1:
        z, sgn = 1 / z, -sgn
    if z.real > 0.5:
        z, sgn = z / (z - 1), -sgn
        if abs(z) > 1:
            z, sgn = 1 / z, -sgn
    return sgn * _d_core(z)
