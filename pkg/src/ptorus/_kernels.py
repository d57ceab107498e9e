"""Hot loops with a numba implementation and a pure-numpy fallback.

Set ``PTORUS_NO_NUMBA=1`` to force the numpy versions (also used when numba
is not importable).  Both engines return identical arrays in identical order.
"""

from __future__ import annotations

import math
import os

import numpy as np

# generator order A, B, a, b; INVERSE[i] is the index of the inverse letter
INVERSE = np.array([2, 3, 0, 1], dtype=np.int8)

_DISABLED = os.environ.get("PTORUS_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit
except ImportError:  # pragma: no cover - exercised with PTORUS_NO_NUMBA=1
    njit = None

ENGINE = "numba" if njit is not None else "numpy"


# --- frontier extension ---------------------------------------------------------

def extend_frontier_numpy(mats, last, gens):
    """Children ``m @ g`` of every reduced word, skipping the inverse of the last letter.

    Children are ordered by parent, then by generator index.
    """
    n = mats.shape[0]
    allowed = np.ones((n, 4), dtype=bool)
    has_last = last >= 0
    allowed[np.nonzero(has_last)[0], INVERSE[last[has_last]]] = False
    prod = np.einsum("nij,gjk->ngik", mats, gens)
    idx = np.nonzero(allowed)
    return prod[idx], idx[1].astype(np.int8)


def _extend_frontier_loops(mats, last, gens, inverse):
    n = mats.shape[0]
    count = 0
    for i in range(n):
        count += 4 if last[i] < 0 else 3
    out = np.empty((count, 2, 2), dtype=mats.dtype)
    out_last = np.empty(count, dtype=np.int8)
    k = 0
    for i in range(n):
        for g in range(4):
            if last[i] >= 0 and inverse[last[i]] == g:
                continue
            for r in range(2):
                for c in range(2):
                    out[k, r, c] = mats[i, r, 0] * gens[g, 0, c] + mats[i, r, 1] * gens[g, 1, c]
            out_last[k] = g
            k += 1
    return out, out_last


# --- equal-area sphere binning ----------------------------------------------------

def sphere_points(num, den):
    """Unit-sphere points of the homogeneous complex coordinates ``num/den``.

    Inverse stereographic projection from the north pole; ``den = 0`` is the pole.
    """
    w = num * np.conj(den)
    nn = np.abs(num) ** 2
    dd = np.abs(den) ** 2
    s = nn + dd
    return np.stack([2 * w.real / s, 2 * w.imag / s, (nn - dd) / s], axis=-1)


def bin_sphere_numpy(pts, grid_n):
    """Cell index in a ``grid_n`` x ``grid_n`` equal-area longitude / height grid."""
    lon = np.arctan2(pts[:, 1], pts[:, 0])
    i = np.floor((lon + math.pi) / (2 * math.pi) * grid_n).astype(np.int64)
    j = np.floor((pts[:, 2] + 1) / 2 * grid_n).astype(np.int64)
    np.clip(i, 0, grid_n - 1, out=i)
    np.clip(j, 0, grid_n - 1, out=j)
    return j * grid_n + i


def _bin_sphere_loops(pts, grid_n):
    n = pts.shape[0]
    out = np.empty(n, dtype=np.int64)
    for k in range(n):
        lon = math.atan2(pts[k, 1], pts[k, 0])
        i = int(math.floor((lon + math.pi) / (2 * math.pi) * grid_n))
        j = int(math.floor((pts[k, 2] + 1) / 2 * grid_n))
        i = min(max(i, 0), grid_n - 1)
        j = min(max(j, 0), grid_n - 1)
        out[k] = j * grid_n + i
    return out


# --- flat-torus crossing counts ------------------------------------------------------

# generic offset between the two straight representatives
_OFFSET = (0.3183098861837907, 0.1414213562373095)


def crossing_count_numpy(u, v):
    """Crossings of straight closed curves of directions ``u``, ``v`` on R^2/Z^2.

    Counts ``(s, t)`` in ``[0,1)^2`` with ``s*u - t*v + offset`` integral by
    scanning every lattice point the segment differences can reach.
    """
    a, b = u
    c, d = v
    det = a * d - b * c
    if det == 0:
        return 0
    ox, oy = _OFFSET
    span_x = abs(a) + abs(c) + 1
    span_y = abs(b) + abs(d) + 1
    mx, my = np.meshgrid(np.arange(-span_x, span_x + 1), np.arange(-span_y, span_y + 1),
                         indexing="ij")
    rx = mx - ox
    ry = my - oy
    # solve s*u - t*v = (rx, ry)
    s = (rx * d - ry * c) / det
    t = (rx * b - ry * a) / det
    inside = (s >= 0) & (s < 1) & (t >= 0) & (t < 1)
    return int(inside.sum())


def _crossing_count_loops(a, b, c, d, ox, oy):
    det = a * d - b * c
    if det == 0:
        return 0
    span_x = abs(a) + abs(c) + 1
    span_y = abs(b) + abs(d) + 1
    count = 0
    for mx in range(-span_x, span_x + 1):
        for my in range(-span_y, span_y + 1):
            rx = mx - ox
            ry = my - oy
            s = (rx * d - ry * c) / det
            t = (rx * b - ry * a) / det
            if 0 <= s < 1 and 0 <= t < 1:
                count += 1
    return count


if njit is not None:
    _extend_jit = njit(cache=True, nogil=True)(_extend_frontier_loops)
    _bin_jit = njit(cache=True, nogil=True)(_bin_sphere_loops)
    _cross_jit = njit(cache=True, nogil=True)(_crossing_count_loops)

    def extend_frontier(mats, last, gens):
        return _extend_jit(mats, last, gens, INVERSE)

    def bin_sphere(pts, grid_n):
        return _bin_jit(np.ascontiguousarray(pts, dtype=np.float64), int(grid_n))

    def crossing_count(u, v):
        return int(_cross_jit(int(u[0]), int(u[1]), int(v[0]), int(v[1]), *_OFFSET))

else:
    extend_frontier = extend_frontier_numpy
    bin_sphere = bin_sphere_numpy
    crossing_count = crossing_count_numpy
