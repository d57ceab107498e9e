"""Finite-depth approximations of the Cannon-Thurston curve of a fiber group.

Cusps of the fiber group are indexed by cosets ``w<K>`` of the peripheral
element ``K = [A, B]``.  In a reference Fuchsian group the cusp ``w(fix K)``
is an exact rational, and these anchors are in circular order along the
boundary circle.  Pairing each anchor with ``rho(w)(fix rho(K))`` for the
degenerate representation and joining the images in anchor order gives the
polyline approximation of the sphere-filling curve.
"""

from __future__ import annotations

import csv
import hashlib
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import DomainError, PtorusError

__all__ = [
    "CTPolyline",
    "FUCHSIAN_A",
    "FUCHSIAN_B",
    "Projection",
    "RepInvalidError",
    "circle_residual",
    "coverage",
    "cusp_projection",
    "ct_polyline",
    "cusp_anchor",
    "parabolic_fixed_point",
    "raster_hash",
    "render_svg",
    "to_csv",
]

MAX_DEPTH = 20
PARABOLIC_TOL = 1e-6

FUCHSIAN_A = np.array([[1, 1], [1, 2]], dtype=np.int64)
FUCHSIAN_B = np.array([[1, -1], [-1, 2]], dtype=np.int64)


class RepInvalidError(PtorusError, ValueError):
    """Representation does not send the commutator to a parabolic."""


class ProjectionError(DomainError):
    pass


def _gens(A, B, dtype):
    A = np.asarray(A, dtype=dtype)
    B = np.asarray(B, dtype=dtype)
    Ai = np.array([[A[1, 1], -A[0, 1]], [-A[1, 0], A[0, 0]]], dtype=dtype)
    Bi = np.array([[B[1, 1], -B[0, 1]], [-B[1, 0], B[0, 0]]], dtype=dtype)
    return np.stack([A, B, Ai, Bi])


def _word_matrix(word: str, gens):
    m = np.eye(2, dtype=gens.dtype)
    for ch in word:
        m = m @ gens["ABab".index(ch)]
    return m


def parabolic_fixed_point(m):
    """Homogeneous fixed point ``(num, den)`` of a parabolic 2x2 matrix."""
    (a, b), (c, d) = m
    if c != 0:
        return a - d, 2 * c
    if b != 0 or a == d:
        return 1, 0
    raise RepInvalidError("matrix is not parabolic")


def _fix_k_exact():
    g = _gens(FUCHSIAN_A, FUCHSIAN_B, np.int64)
    K = _word_matrix("ABab", g)
    num, den = parabolic_fixed_point(K.tolist())
    f = Fraction(int(num), int(den))
    return f.numerator, f.denominator


def _normalize_anchor(p, q):
    neg = (q < 0) | ((q == 0) & (p < 0))
    p = np.where(neg, -p, p)
    q = np.where(neg, -q, q)
    return p, q


def cusp_anchor(word: str):
    """Exact fixed point of ``w K w^-1`` in the reference Fuchsian group.

    Returns a ``Fraction``, or ``math.inf`` for the point at infinity.
    """
    from .holonomy import reduce_word

    w = reduce_word(word)
    g = _gens(FUCHSIAN_A, FUCHSIAN_B, np.int64)
    m = _word_matrix(w, g)
    u, v = _fix_k_exact()
    p = int(m[0, 0]) * u + int(m[0, 1]) * v
    q = int(m[1, 0]) * u + int(m[1, 1]) * v
    return math.inf if q == 0 else Fraction(p, q)


@dataclass(frozen=True)
class CTPolyline:
    depth: int
    # anchors as exact integer pairs p/q (q = 0 is infinity), circular order
    anchor_num: np.ndarray
    anchor_den: np.ndarray
    # images as homogeneous complex pairs num/den on the Riemann sphere
    image_num: np.ndarray
    image_den: np.ndarray

    def __len__(self):
        return int(self.anchor_num.shape[0])

    @property
    def anchors(self) -> list:
        return [math.inf if q == 0 else Fraction(int(p), int(q))
                for p, q in zip(self.anchor_num, self.anchor_den)]

    @property
    def images(self) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            z = self.image_num / self.image_den
        z[self.image_den == 0] = complex(math.inf, 0)
        return z

    @property
    def points(self) -> list:
        return list(zip(self.anchors, self.images.tolist()))

    def sphere(self) -> np.ndarray:
        return _kernels.sphere_points(self.image_num, self.image_den)


def _enumerate_subtree(first, gens_f, gens_r, depth, fix_f, fix_r):
    """Anchors and images for all reduced words starting with letter ``first``."""
    mf = gens_f[first][None].copy()
    mr = gens_r[first][None].copy()
    last = np.array([first], dtype=np.int8)
    out_p, out_q, out_n, out_d, out_lvl = [], [], [], [], []
    for level in range(1, depth + 1):
        if level > 1:
            mf, lf = _kernels.extend_frontier(mf, last, gens_f)
            mr, _ = _kernels.extend_frontier(mr, last, gens_r)
            last = lf
        p = mf[:, 0, 0] * fix_f[0] + mf[:, 0, 1] * fix_f[1]
        q = mf[:, 1, 0] * fix_f[0] + mf[:, 1, 1] * fix_f[1]
        out_p.append(p)
        out_q.append(q)
        out_n.append(mr[:, 0, 0] * fix_r[0] + mr[:, 0, 1] * fix_r[1])
        out_d.append(mr[:, 1, 0] * fix_r[0] + mr[:, 1, 1] * fix_r[1])
        out_lvl.append(np.full(p.shape, level, dtype=np.int16))
    return (np.concatenate(out_p), np.concatenate(out_q), np.concatenate(out_n),
            np.concatenate(out_d), np.concatenate(out_lvl))


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("MONODROMY_THREADS", "1")))
    except ValueError:
        return 1


def ct_polyline(rep, depth: int, threads: int | None = None) -> CTPolyline:
    """Cusp anchors paired with their images under ``rep``, up to word length ``depth``.

    ``rep`` is anything with 2x2 ``A`` and ``B`` attributes, or an ``(A, B)`` pair.
    """
    if depth < 1:
        raise DomainError("depth must be at least 1")
    if depth > MAX_DEPTH:
        raise DomainError(f"depth {depth} exceeds the cap {MAX_DEPTH}")
    A, B = (rep.A, rep.B) if hasattr(rep, "A") else rep
    gens_r = _gens(A, B, np.complex128)
    gens_f = _gens(FUCHSIAN_A, FUCHSIAN_B, np.int64)
    K = _word_matrix("ABab", gens_r)
    tr = complex(np.trace(K))
    if abs(abs(tr) - 2) > PARABOLIC_TOL or abs(tr.imag) > PARABOLIC_TOL:
        raise RepInvalidError(f"commutator trace {tr:.6g} is not parabolic")
    fix_r = tuple(complex(x) for x in parabolic_fixed_point(K))
    fix_f = _fix_k_exact()

    n_threads = threads if threads is not None else _threads()
    jobs = [(g, gens_f, gens_r, depth, fix_f, fix_r) for g in range(4)]
    if n_threads > 1:
        with ThreadPoolExecutor(max_workers=min(n_threads, 4)) as pool:
            parts = list(pool.map(lambda a: _enumerate_subtree(*a), jobs))
    else:
        parts = [_enumerate_subtree(*a) for a in jobs]

    # the empty word comes first so that it represents its coset
    p = np.concatenate([[fix_f[0]]] + [x[0] for x in parts]).astype(np.int64)
    q = np.concatenate([[fix_f[1]]] + [x[1] for x in parts]).astype(np.int64)
    num = np.concatenate([[fix_r[0]]] + [x[2] for x in parts])
    den = np.concatenate([[fix_r[1]]] + [x[3] for x in parts])
    lvl = np.concatenate([[0]] + [x[4] for x in parts])
    p, q = _normalize_anchor(p, q)

    # dedupe by exact anchor: keep the shortest word, first in enumeration order
    order = np.lexsort((np.arange(p.size), lvl))
    key = np.stack([p[order], q[order]], axis=1)
    _, first = np.unique(key, axis=0, return_index=True)
    keep = order[np.sort(first)]
    p, q, num, den = p[keep], q[keep], num[keep], den[keep]

    # circular order: finite anchors ascending, infinity last
    finite = q != 0
    approx = np.where(finite, p / np.where(finite, q, 1), np.inf)
    order = np.argsort(approx, kind="stable")
    order = _exact_sort_fix(order, p, q)
    return CTPolyline(depth, p[order], q[order], num[order], den[order])


def _exact_sort_fix(order, p, q):
    """Repair adjacent pairs whose float keys tie or invert, with integer cross products."""
    order = order.copy()
    changed = True
    while changed:
        changed = False
        a, b = order[:-1], order[1:]
        qa, qb = q[a], q[b]
        both = (qa != 0) & (qb != 0)
        lhs = p[a].astype(object) * qb.astype(object)
        rhs = p[b].astype(object) * qa.astype(object)
        bad = np.nonzero(both & (lhs > rhs))[0] if both.any() else []
        for i in bad:
            order[i], order[i + 1] = order[i + 1], order[i]
            changed = True
    return order


def coverage(poly: CTPolyline, grid_n: int) -> float:
    """Fraction of cells of the ``grid_n`` x ``grid_n`` equal-area sphere grid hit by a point."""
    if grid_n < 2:
        raise DomainError("grid_n must be at least 2")
    cells = _kernels.bin_sphere(poly.sphere(), grid_n)
    return np.unique(cells).size / (grid_n * grid_n)


def circle_residual(poly: CTPolyline) -> float:
    """Largest distance from the sphere points to their best-fit plane.

    Points of the Riemann sphere lie on a round circle exactly when their
    images on the unit sphere are coplanar, whatever Moebius normalization.
    """
    pts = poly.sphere()
    centre = pts.mean(axis=0)
    _, _, vh = np.linalg.svd(pts - centre, full_matrices=False)
    return float(np.abs((pts - centre) @ vh[-1]).max())


# --- rendering ----------------------------------------------------------------------

@dataclass(frozen=True)
class Projection:
    """Moebius normalization ``z -> (a z + b)/(c z + d)`` followed by a clip radius."""

    mobius: tuple = (1, 0, 0, 1)
    clip: float = 50.0

    def apply(self, num, den):
        a, b, c, d = (complex(x) for x in self.mobius)
        n2 = a * num + b * den
        d2 = c * num + d * den
        ok = np.abs(d2) > 0
        z = np.full(num.shape, complex(np.inf), dtype=complex)
        z[ok] = n2[ok] / d2[ok]
        keep = np.isfinite(z) & (np.abs(z) <= self.clip)
        return z[keep]


def cusp_projection(rep, clip: float = 30.0) -> Projection:
    """Projection sending the fixed point of ``rho(K)`` to infinity."""
    A, B = (rep.A, rep.B) if hasattr(rep, "A") else rep
    K = _word_matrix("ABab", _gens(A, B, np.complex128))
    num, den = parabolic_fixed_point(K)
    if den == 0:
        return Projection(clip=clip)
    f = complex(num) / complex(den)
    return Projection((0, 1, 1, -f), clip=clip)


def _planar(poly: CTPolyline, projection: Projection):
    z = projection.apply(poly.image_num, poly.image_den)
    if z.size == 0:
        raise ProjectionError("every point lies at the projection pole")
    return z


def render_svg(poly: CTPolyline, projection: Projection | None = None,
               stroke_width: float = 0.002, stroke: str = "#1f3b73",
               size: int = 800) -> bytes:
    """Deterministic SVG with a single polyline; y axis points up."""
    if len(poly) == 0:
        raise DomainError("empty polyline")
    z = _planar(poly, projection or Projection())
    xs, ys = z.real, -z.imag
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    w = max(x1 - x0, 1e-9)
    h = max(y1 - y0, 1e-9)
    pad = 0.02 * max(w, h)
    coords = " ".join(f"{x:.6f},{y:.6f}" for x, y in zip(xs, ys))
    view = f"{x0 - pad:.6f} {y0 - pad:.6f} {w + 2 * pad:.6f} {h + 2 * pad:.6f}"
    height = max(1, round(size * (h + 2 * pad) / (w + 2 * pad)))
    doc = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{height}" viewBox="{view}">\n'
        f'<polyline fill="none" stroke="{stroke}" stroke-width="{stroke_width:g}" '
        f'stroke-linejoin="round" points="{coords}"/>\n'
        "</svg>\n"
    )
    return doc.encode("ascii")


def rasterize(poly: CTPolyline, projection: Projection | None = None,
              size: int = 256) -> np.ndarray:
    """Boolean raster of the projected polyline, sampled densely along each segment."""
    z = _planar(poly, projection or Projection())
    lo = complex(z.real.min(), z.imag.min())
    span = max(z.real.max() - lo.real, z.imag.max() - lo.imag, 1e-12)
    u = (z - lo) / span * (size - 1)
    img = np.zeros((size, size), dtype=bool)
    if u.size == 1:
        img[int(round(u[0].imag)), int(round(u[0].real))] = True
        return img
    seg = np.abs(np.diff(u))
    steps = np.maximum(np.ceil(seg).astype(np.int64), 1)
    for a, b, k in zip(u[:-1], u[1:], steps):
        t = np.linspace(0.0, 1.0, k + 1)
        pts = a + (b - a) * t
        img[np.rint(pts.imag).astype(int), np.rint(pts.real).astype(int)] = True
    return img


def raster_hash(poly: CTPolyline, projection: Projection | None = None, size: int = 256) -> str:
    img = rasterize(poly, projection, size)
    return hashlib.sha256(np.packbits(img).tobytes()).hexdigest()


def to_csv(poly: CTPolyline) -> str:
    """CSV with columns ``anchor, re, im``; infinity is written ``inf``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["anchor", "re", "im"])
    for a, z in poly.points:
        anchor = "inf" if a == math.inf else str(a)
        w.writerow([anchor, f"{z.real:.15g}", f"{z.imag:.15g}"])
    return buf.getvalue()
