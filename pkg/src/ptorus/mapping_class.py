"""Mapping classes of the once-punctured torus as words in R and L.

``R = [[1,1],[0,1]]`` twists about the (1,0)-curve, ``L = [[1,0],[1,1]]``
about the (0,1)-curve with the opposite handedness.  Words are multiplied
left to right and act on column vectors, so ``"R L"`` is ``R @ L`` and the
letter on the right acts first.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

from . import mat2
from .errors import ClassificationError, DomainError, ParseError
from .lamination import CurveClass, MeasuredLamination, curve
from .scalars import QuadSurd

__all__ = [
    "FiniteOrder",
    "MappingClass",
    "NTClass",
    "PseudoAnosov",
    "RLForm",
    "Reducible",
    "canonical_rl_form",
    "classify",
    "dilatation",
    "parse_word",
    "word_from_matrix_letters",
]

_GEN = {"R": mat2.R_MAT, "L": mat2.L_MAT}
_TOKEN = re.compile(r"([RL])(?:\^([+-]?\d+))?")


@dataclass(frozen=True)
class MappingClass:
    word: tuple[tuple[str, int], ...]
    matrix: mat2.Mat = field(compare=False)

    @classmethod
    def from_word(cls, word) -> "MappingClass":
        word = tuple((g, int(e)) for g, e in word if e != 0)
        m = mat2.IDENTITY
        for g, e in word:
            m = mat2.mul(m, mat2.power(_GEN[g], e))
        return cls(word, m)

    @property
    def trace(self) -> int:
        return mat2.trace(self.matrix)

    def __mul__(self, other: "MappingClass") -> "MappingClass":
        return MappingClass.from_word(self.word + other.word)

    def inverse(self) -> "MappingClass":
        return MappingClass.from_word(tuple((g, -e) for g, e in reversed(self.word)))

    def __pow__(self, n: int) -> "MappingClass":
        base = self if n >= 0 else self.inverse()
        return MappingClass.from_word(base.word * abs(n))

    def text(self) -> str:
        return " ".join(g if e == 1 else f"{g}^{e}" for g, e in self.word)

    def __str__(self):
        return self.text() or "1"


def parse_word(text: str) -> MappingClass:
    """Parse ``"R^4 L"``-style words; the empty string is the identity."""
    word = []
    i, n = 0, len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if m is None:
            raise ParseError(f"unexpected {text[i]!r} in word", len(text[:i].encode()))
        end = m.end()
        if end < n and not (text[end].isspace() or text[end] in "RL"):
            raise ParseError(f"unexpected {text[end]!r} in word", len(text[:end].encode()))
        word.append((m.group(1), int(m.group(2)) if m.group(2) else 1))
        i = end
    return MappingClass.from_word(word)


def word_from_matrix_letters(letters: str) -> MappingClass:
    return parse_word(" ".join(letters))


# --- Nielsen-Thurston classification ---------------------------------------

@dataclass(frozen=True)
class FiniteOrder:
    order: int
    tag = "finite-order"


@dataclass(frozen=True)
class Reducible:
    invariant: CurveClass
    tag = "reducible"


@dataclass(frozen=True)
class PseudoAnosov:
    dilatation: QuadSurd
    mu_s: MeasuredLamination
    mu_u: MeasuredLamination
    tag = "pseudo-Anosov"


NTClass = FiniteOrder | Reducible | PseudoAnosov

_ELLIPTIC_ORDER = {0: 4, 1: 6, -1: 3}


def _eigen_data(m: mat2.Mat):
    """Expanding eigenvalue magnitude and eigen-directions of a hyperbolic matrix."""
    (a, b), (c, d) = m
    t = a + d
    s = 1 if t > 0 else -1
    disc = t * t - 4
    root = QuadSurd(0, 1, disc)
    lam = (abs(t) + root) / 2
    # signed eigenvalues e = s*lam (expanding) and s/lam (contracting)
    e_u = lam * s
    e_s = lam.conjugate() * s
    # (e - d, c) is an eigenvector for eigenvalue e; c != 0 when |t| > 2
    mu_u = MeasuredLamination(e_u - d, c)
    mu_s = MeasuredLamination(e_s - d, c)
    return lam, mu_s, mu_u


def classify(phi: MappingClass) -> NTClass:
    m = phi.matrix
    t = mat2.trace(m)
    if m in (mat2.IDENTITY, mat2.neg(mat2.IDENTITY)):
        return FiniteOrder(1 if m == mat2.IDENTITY else 2)
    if abs(t) < 2:
        return FiniteOrder(_ELLIPTIC_ORDER[t])
    if abs(t) == 2:
        s = 1 if t > 0 else -1
        (a, b), (c, d) = m
        v = (b, s - a) if (b, s - a) != (0, 0) else (s - d, c)
        g = math.gcd(*v)
        return Reducible(curve(v[0] // g, v[1] // g))
    lam, mu_s, mu_u = _eigen_data(m)
    return PseudoAnosov(lam, mu_s, mu_u)


def dilatation(phi: MappingClass) -> QuadSurd:
    nt = classify(phi)
    if not isinstance(nt, PseudoAnosov):
        raise ClassificationError(f"{phi} is {nt.tag}, not pseudo-Anosov")
    return nt.dilatation


# --- conjugacy normal form ---------------------------------------------------

@dataclass(frozen=True)
class RLForm:
    """``sign * R^a1 L^b1 ... R^ak L^bk`` up to cyclic rotation of the blocks."""

    sign: int
    blocks: tuple[int, ...]

    def __post_init__(self):
        if len(self.blocks) < 2 or len(self.blocks) % 2 or min(self.blocks) < 1:
            raise DomainError("RL form needs alternating positive R and L exponents")

    @property
    def letters(self) -> str:
        """Expanded cyclic word, e.g. ``"RRRRL"``."""
        return "".join(("R" if i % 2 == 0 else "L") * e for i, e in enumerate(self.blocks))

    def word(self) -> str:
        parts = []
        for i, e in enumerate(self.blocks):
            g = "R" if i % 2 == 0 else "L"
            parts.append(g if e == 1 else f"{g}^{e}")
        return " ".join(parts)

    def mapping_class(self) -> MappingClass:
        return parse_word(self.word())

    def matrix(self) -> mat2.Mat:
        m = self.mapping_class().matrix
        return m if self.sign > 0 else mat2.neg(m)

    def __str__(self):
        return ("" if self.sign > 0 else "-") + self.word()


def _canonical_rotation(blocks: tuple[int, ...]) -> tuple[int, ...]:
    rots = [blocks[i:] + blocks[:i] for i in range(0, len(blocks), 2)]
    return min(rots)


def _quadratic_cf(P: int, Q: int, D: int, limit: int = 100000):
    """Continued fraction of ``(P + sqrt(D))/Q``; returns (terms, period_start).

    Requires ``Q | D - P^2`` and ``D`` not a square.
    """
    r = math.isqrt(D)
    seen = {}
    terms = []
    for _ in range(limit):
        if (P, Q) in seen:
            return terms, seen[(P, Q)]
        seen[(P, Q)] = len(terms)
        if Q > 0:
            a = (P + r) // Q
        else:
            a = -((P + r) // (-Q)) - 1
        terms.append(a)
        P = a * Q - P
        Q = (D - P * P) // Q
    raise RuntimeError("continued fraction period not found")


def canonical_rl_form(phi: MappingClass) -> RLForm:
    """Positive cyclic RL word conjugate to plus or minus the matrix of ``phi``.

    The attracting slope ``x/y`` of the expanding eigenvector has an
    eventually periodic continued fraction; a block ``R^a L^b`` acts on
    slopes as ``r -> a + 1/(b + 1/r)``, so the period read from an even
    index gives the primitive root, and the trace fixes the power.
    """
    m = phi.matrix
    t = mat2.trace(m)
    if abs(t) <= 2:
        raise ClassificationError(f"{phi} is not pseudo-Anosov")
    s = 1 if t > 0 else -1
    if s < 0:
        m = mat2.neg(m)
        t = -t
    (a, b), (c, d) = m
    # x/y = (e - d)/c with e = (t + sqrt(t^2-4))/2
    P, Q, D = t - 2 * d, 2 * c, t * t - 4
    terms, start = _quadratic_cf(P, Q, D)
    period = terms[start:]
    # even indices carry R exponents; index 0 may be nonpositive
    j = max(start, 1)
    if j % 2:
        j += 1
    idx = [(j + i - start) % len(period) + start for i in range(len(period))]
    blocks = tuple(terms[i] for i in idx)
    if len(blocks) % 2:
        blocks = blocks + blocks
    root = RLForm(1, blocks)
    root_trace = mat2.trace(root.mapping_class().matrix)
    # find k with trace(root^k) == t
    k, mk = 1, root.mapping_class().matrix
    while mat2.trace(mk) < t:
        k += 1
        mk = mat2.mul(mk, root.mapping_class().matrix)
    if mat2.trace(mk) != t or root_trace <= 2:
        raise RuntimeError("RL normal form failed")
    return RLForm(s, _canonical_rotation(blocks * k))
