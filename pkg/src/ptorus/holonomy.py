"""Fiber-group holonomy of a layered bundle and the trace-move fixed points.

Two independent routes to the same representation of the fiber group
``<A, B>``: developing the pleated fiber from the tetrahedron shapes, and
solving ``trace-moves(phi)(t) = t`` on the complexified Fricke surface.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .bundle import TriangulatedBundle
from .errors import ClassificationError, DomainError, SolverError, ToleranceError
from .geometry import ShapeSolution, _logs
from .mapping_class import MappingClass, PseudoAnosov, classify
from .teich import pull_back_traces

__all__ = [
    "HolonomyRep",
    "TraceTriple",
    "apply_automorphism",
    "fiber_shears",
    "fixed_trace_triple",
    "holonomy",
    "reduce_word",
    "translation_length",
]

_H, _V, _D = (1, 0), (0, 1), (1, 1)
# counterclockwise order of the fiber edges around either ideal triangle,
# as seen in the developed picture
_CCW = (_H, _D, _V)
# loops in the dual graph: A crosses d then v, B crosses d then h
_LOOPS = {"A": (_D, _V), "B": (_D, _H)}
_ROT = np.array([[-1, -1], [1, 0]], dtype=complex)
_DEGENERATE = 1e-8


# --- words in the fiber group ---------------------------------------------------

def reduce_word(word: str) -> str:
    """Free reduction of a word in ``A, B, a, b`` (lower case is the inverse)."""
    out: list[str] = []
    for ch in word:
        if ch not in "ABab":
            raise DomainError(f"bad letter {ch!r} in group word")
        if out and out[-1] == ch.swapcase():
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def _invert(word: str) -> str:
    return word[::-1].swapcase()


# induced automorphisms of the fiber group; their trace moves are r_move and l_move
_SUBST = {
    ("R", 1): {"A": "A", "B": "AB"},
    ("R", -1): {"A": "A", "B": "aB"},
    ("L", 1): {"A": "AB", "B": "B"},
    ("L", -1): {"A": "Ab", "B": "B"},
}


def _substitute(word: str, table) -> str:
    parts = []
    for ch in word:
        img = table[ch.upper()]
        parts.append(img if ch.isupper() else _invert(img))
    return reduce_word("".join(parts))


def apply_automorphism(phi: MappingClass, word: str) -> str:
    """Image of a fiber-group word; traces agree with ``pull_back_traces``."""
    word = reduce_word(word)
    for letter, e in phi.word:
        table = _SUBST[(letter, 1 if e > 0 else -1)]
        for _ in range(abs(e)):
            word = _substitute(word, table)
    return word


# --- developing the fiber --------------------------------------------------------

def fiber_shears(sol: ShapeSolution, tb: TriangulatedBundle) -> dict:
    """Complex shears of the reference fiber edges, keyed by slope."""
    logs = _logs(np.asarray(sol.shapes))
    return {e: complex(np.dot(row, logs)) - 1j * math.pi for e, row in tb.fiber_upper.items()}


def _cross(s: complex) -> np.ndarray:
    h = cmath.exp(s / 2)
    return np.array([[0, -h], [1 / h, 0]], dtype=complex)


def _develop_loop(path, shears) -> np.ndarray:
    """Deck transformation of a closed path in the dual graph of the fiber."""
    g = np.eye(2, dtype=complex)
    marked = path[0]

    def rotate_to(target):
        nonlocal g, marked
        while marked != target:
            g = g @ _ROT
            marked = _CCW[(_CCW.index(marked) + 1) % 3]

    for e in path:
        rotate_to(e)
        g = g @ _cross(shears[e])
        # the three ideal vertices of the new triangle must stay apart
        verts = [_mobius(g, v) for v in (0.0, math.inf, -1.0)]
        if _min_chordal(verts) < _DEGENERATE:
            raise SolverError("degenerate developing placement", trace=[_min_chordal(verts)])
    rotate_to(path[0])
    return g


def _mobius(m, z):
    (a, b), (c, d) = m
    if z == math.inf:
        return a / c if c != 0 else math.inf
    den = c * z + d
    return (a * z + b) / den if den != 0 else math.inf


def _chordal(u, v):
    if u == math.inf and v == math.inf:
        return 0.0
    if u == math.inf:
        u, v = v, u
    if v == math.inf:
        return 2 / math.sqrt(1 + abs(u) ** 2)
    return 2 * abs(u - v) / math.sqrt((1 + abs(u) ** 2) * (1 + abs(v) ** 2))


def _min_chordal(pts):
    return min(_chordal(pts[i], pts[j]) for i in range(3) for j in range(i + 1, 3))


@dataclass(frozen=True)
class HolonomyRep:
    A: np.ndarray
    B: np.ndarray
    Phi: np.ndarray
    phi: MappingClass

    def rho(self, word: str) -> np.ndarray:
        word = reduce_word(word)
        gens = {"A": self.A, "B": self.B, "a": _sl2_inv(self.A), "b": _sl2_inv(self.B)}
        m = np.eye(2, dtype=complex)
        for ch in word:
            m = m @ gens[ch]
        return m

    def traces(self) -> tuple[complex, complex, complex]:
        return (complex(np.trace(self.A)), complex(np.trace(self.B)),
                complex(np.trace(self.A @ self.B)))

    def commutator_trace(self) -> complex:
        return complex(np.trace(self.rho("ABab")))

    def equivariance_error(self, word: str) -> float:
        """``min_sign |Phi rho(w) Phi^-1 - sign*rho(phi(w))|``."""
        lhs = self.Phi @ self.rho(word) @ _sl2_inv(self.Phi)
        rhs = self.rho(apply_automorphism(self.phi, word))
        return float(min(np.abs(lhs - rhs).max(), np.abs(lhs + rhs).max()))


def _sl2_inv(m):
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=complex)


def _conjugator(A, B, A2, B2):
    """det-1 ``P`` with ``P A P^-1 = +-A2`` and ``P B P^-1 = +-B2``."""
    best = None
    for sa in (1, -1):
        for sb in (1, -1):
            rows = []
            for X, Y in ((A, sa * A2), (B, sb * B2)):
                # P X - Y P = 0, unknowns P row-major
                M = np.zeros((4, 4), dtype=complex)
                for i in range(2):
                    for j in range(2):
                        r = 2 * i + j
                        for k in range(2):
                            M[r, 2 * i + k] += X[k, j]
                            M[r, 2 * k + j] -= Y[i, k]
                rows.append(M)
            M = np.vstack(rows)
            _, s, vh = np.linalg.svd(M)
            if best is None or s[-1] < best[0]:
                best = (s[-1], vh[-1].conj())
    p = best[1].reshape(2, 2)
    d = np.linalg.det(p)
    if abs(d) < 1e-300:
        raise SolverError("monodromy conjugator is singular", trace=[best[0]])
    return p / cmath.sqrt(d)


def holonomy(sol: ShapeSolution, tb: TriangulatedBundle) -> HolonomyRep:
    shears = fiber_shears(sol, tb)
    A = _develop_loop(_LOOPS["A"], shears)
    B = _develop_loop(_LOOPS["B"], shears)
    # lift to SL(2,C) with Re tr A >= 0 and Re tr B >= 0
    sa, sb = _pair_signs((np.trace(A), np.trace(B)))
    A, B = sa * A, sb * B
    phi = tb.monodromy
    rep = HolonomyRep(A, B, np.eye(2, dtype=complex), phi)
    A2 = rep.rho(apply_automorphism(phi, "A"))
    B2 = rep.rho(apply_automorphism(phi, "B"))
    Phi = _conjugator(A, B, A2, B2)
    return HolonomyRep(A, B, Phi, phi)


def translation_length(rep: HolonomyRep, word: str) -> complex:
    """Complex translation length ``2 arccosh(tr/2)`` with nonnegative real part."""
    w = reduce_word(word)
    if not w:
        raise DomainError("the identity has no closed geodesic")
    t = complex(np.trace(rep.rho(w)))
    if abs(abs(t.real) - 2) < 1e-9 and abs(t.imag) < 1e-9:
        return 0j
    ell = 2 * cmath.acosh(t / 2)
    return -ell if ell.real < 0 else ell


# --- trace-move fixed points -------------------------------------------------------

@dataclass(frozen=True)
class TraceTriple:
    x: complex
    y: complex
    z: complex
    # sign pattern (s1, s2) with moves(t) = (s1 x, s2 y, s1 s2 z)
    signs: tuple[int, int] = (1, 1)
    geometric: bool = False
    # found by refining the holonomy traces rather than from a random start
    seeded: bool = False

    def as_tuple(self):
        return (self.x, self.y, self.z)

    def relation_residual(self) -> float:
        x, y, z = self.as_tuple()
        return abs(x * x + y * y + z * z - x * y * z)


class _Dual:
    """Forward-mode value plus gradient in the three trace variables."""

    __slots__ = ("v", "g")

    def __init__(self, v, g):
        self.v, self.g = v, g

    def __add__(self, o):
        return _Dual(self.v + o.v, self.g + o.g)

    def __sub__(self, o):
        return _Dual(self.v - o.v, self.g - o.g)

    def __mul__(self, o):
        return _Dual(self.v * o.v, self.v * o.g + o.v * self.g)


def _system(phi, signs, t):
    """Residual and Jacobian of the fixed-point equations plus the relation."""
    eye = np.eye(3, dtype=complex)
    d = tuple(_Dual(complex(t[i]), eye[i]) for i in range(3))
    u = pull_back_traces(phi, d)
    s1, s2 = signs
    target = (s1, s2, s1 * s2)
    F = np.empty(4, dtype=complex)
    J = np.empty((4, 3), dtype=complex)
    for i in range(3):
        F[i] = u[i].v - target[i] * t[i]
        J[i] = u[i].g - target[i] * eye[i]
    x, y, z = t
    F[3] = x * x + y * y + z * z - x * y * z
    J[3] = (2 * x - y * z, 2 * y - x * z, 2 * z - x * y)
    return F, J


def _newton_triple(phi, signs, t0, tol=1e-11, max_iter=100):
    t = np.array(t0, dtype=complex)
    for _ in range(max_iter):
        F, J = _system(phi, signs, t)
        scale = 1 + np.abs(t).max() ** 2
        if not np.all(np.isfinite(F)):
            return None
        if np.linalg.norm(F) < tol * scale:
            return t
        step = np.linalg.lstsq(J, -F, rcond=None)[0]
        if not np.all(np.isfinite(step)):
            return None
        t = t + step
    F, _ = _system(phi, signs, t)
    return t if np.linalg.norm(F) < tol * (1 + np.abs(t).max() ** 2) else None


def _fixed_signs(phi, t) -> tuple[int, int]:
    u = pull_back_traces(phi, tuple(t))
    return (1 if abs(u[0] - t[0]) <= abs(u[0] + t[0]) else -1,
            1 if abs(u[1] - t[1]) <= abs(u[1] + t[1]) else -1)


def _pair_signs(t) -> tuple[int, int]:
    return (1 if t[0].real >= 0 else -1), (1 if t[1].real >= 0 else -1)


def _normalize_lift(t) -> np.ndarray:
    s1, s2 = _pair_signs(t)
    return np.array([s1 * t[0], s2 * t[1], s1 * s2 * t[2]], dtype=complex)


def _pair_sign_distance(t, ref) -> float:
    return min(max(abs(t[0] - s1 * ref[0]), abs(t[1] - s2 * ref[1]),
                   abs(t[2] - s1 * s2 * ref[2]))
               for s1 in (1, -1) for s2 in (1, -1))


def _search(phi, seeds):
    roots: list[tuple[np.ndarray, tuple[int, int]]] = []
    for signs in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
        for t0 in seeds:
            with np.errstate(all="ignore"):
                t = _newton_triple(phi, signs, t0)
            # the origin is a degenerate root that Newton only creeps towards
            if t is None or np.abs(t).max() < 1e-2 or np.abs(t.imag).max() < 1e-8:
                continue
            # identify roots up to simultaneous sign changes of pairs
            if any(_pair_sign_distance(t, r) < 1e-7 * (1 + np.abs(t).max()) for r, _ in roots):
                continue
            t = _normalize_lift(t)
            roots.append((t, _fixed_signs(phi, t)))
    return roots


def fixed_trace_triple(phi: MappingClass, reference=None, starts: int = 64,
                       seed: int = 0, match_tol: float = 1e-4) -> list[TraceTriple]:
    """Solutions of ``moves(phi)(t) = +-t`` on ``x^2 + y^2 + z^2 = xyz``.

    Found by multi-start Newton for each sign pattern, from random starts
    that do not look at ``reference``.  With ``reference`` (holonomy traces)
    the matching root is flagged ``geometric`` and listed first; the others
    are Galois companions.  If no random start reaches it, Newton is rerun
    from the reference itself and the result is flagged ``seeded``.  Real
    roots and the trivial root at the origin are discarded.
    """
    if not isinstance(classify(phi), PseudoAnosov):
        raise ClassificationError(f"{phi} is not pseudo-Anosov")
    rng = np.random.default_rng(seed)
    seeds = []
    for _ in range(starts):
        r = rng.uniform(0.5, 4.0, 3)
        ang = rng.uniform(-math.pi, math.pi, 3)
        seeds.append(r * np.exp(1j * ang))
    roots = _search(phi, seeds)
    seeded = False
    if reference is not None and not any(
            _pair_sign_distance(t, reference) < match_tol for t, _ in roots):
        roots += _search(phi, [np.array(reference, dtype=complex)])
        seeded = True
    triples = []
    found = False
    for t, signs in roots:
        geo = reference is not None and _pair_sign_distance(t, reference) < match_tol
        found |= geo
        triples.append(TraceTriple(complex(t[0]), complex(t[1]), complex(t[2]), signs, geo,
                                   seeded and geo))
    if reference is not None and not found:
        raise ToleranceError("no trace-move fixed point matches the holonomy traces",
                             trace=[float(np.abs(reference).max())])
    triples.sort(key=lambda tr: (not tr.geometric, -abs(tr.x.imag) - abs(tr.y.imag)))
    return triples
