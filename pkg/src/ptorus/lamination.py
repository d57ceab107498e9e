"""Measured laminations on the once-punctured torus.

A measured lamination is modelled by a planar vector ``(a, b)`` taken up to
sign: a weighted simple closed curve of slope ``b/a`` is ``w*(a, b)`` with
``(a, b)`` primitive, and irrational slopes are vectors with surd entries.
The geometric intersection number is ``|det|``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from . import mat2
from .errors import DomainError, EmptyLaminationError
from .scalars import QuadSurd, format_scalar, is_exact, parse_scalar, scalar_field, sign

__all__ = [
    "CurveClass",
    "EMPTY",
    "FAREY_ARCS",
    "INFINITY",
    "MeasuredLamination",
    "act_on_lamination",
    "alternation_number",
    "curve",
    "intersection_number",
    "lamination",
    "make_lamination",
    "normal_coordinates",
    "projective_class",
    "projective_distance",
    "twist_matrix",
]

INFINITY = math.inf


@dataclass(frozen=True)
class CurveClass:
    """Primitive integer pair up to sign; first nonzero entry positive."""

    a: int
    b: int

    def __post_init__(self):
        if (self.a, self.b) == (0, 0):
            raise DomainError("(0, 0) is not a curve class")
        if math.gcd(self.a, self.b) != 1:
            raise DomainError(f"({self.a}, {self.b}) is not primitive")
        if self.a < 0 or (self.a == 0 and self.b < 0):
            raise DomainError("curve class not sign-normalized; use curve()")

    def __iter__(self):
        return iter((self.a, self.b))

    def __str__(self):
        return f"({self.a},{self.b})"


def curve(a: int, b: int) -> CurveClass:
    """Curve class of the primitive pair ``(a, b)``, normalized up to sign."""
    if a < 0 or (a == 0 and b < 0):
        a, b = -a, -b
    return CurveClass(a, b)


def _normalize(a, b):
    if sign(a) < 0 or (sign(a) == 0 and sign(b) < 0):
        return -a, -b
    return a, b


def _clean(x):
    if isinstance(x, QuadSurd):
        return x.simplify()
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    return x


class MeasuredLamination:
    """Nonzero vector modulo sign, or the empty lamination."""

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        a, b = _normalize(_clean(a), _clean(b))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __setattr__(self, name, value):
        raise AttributeError("MeasuredLamination is immutable")

    @property
    def vector(self):
        return (self.a, self.b)

    @property
    def is_empty(self) -> bool:
        return sign(self.a) == 0 and sign(self.b) == 0

    @property
    def exact(self) -> bool:
        return is_exact(self.a) and is_exact(self.b)

    def scaled(self, w) -> "MeasuredLamination":
        if sign(w) <= 0:
            raise DomainError("scale factor must be positive")
        return MeasuredLamination(self.a * w, self.b * w)

    def __mul__(self, w):
        return self.scaled(w)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, MeasuredLamination):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"MeasuredLamination({format_scalar(self.a)}, {format_scalar(self.b)})"

    def norm_squared(self):
        return self.a * self.a + self.b * self.b

    def to_float(self) -> tuple[float, float]:
        return float(self.a), float(self.b)

    # serialization ----------------------------------------------------------
    def field(self) -> str:
        fields = {scalar_field(self.a), scalar_field(self.b)}
        if "float" in fields:
            return "float"
        surds = sorted(f for f in fields if f.startswith("surd"))
        return surds[0] if surds else "rational"

    def to_json(self) -> dict:
        field = self.field()
        if field == "float":
            return {"a": repr(float(self.a)), "b": repr(float(self.b)), "field": field}
        return {"a": format_scalar(self.a), "b": format_scalar(self.b), "field": field}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, obj) -> "MeasuredLamination":
        if isinstance(obj, str):
            obj = json.loads(obj)
        field = obj["field"]
        if field not in ("rational", "float") and not field.startswith("surd("):
            raise DomainError(f"unknown lamination field {field!r}")
        a = parse_scalar(obj["a"], field)
        b = parse_scalar(obj["b"], field)
        return cls(a, b)


EMPTY = MeasuredLamination(0, 0)


def lamination(a, b) -> MeasuredLamination:
    return MeasuredLamination(a, b)


def make_lamination(weight, c: CurveClass) -> MeasuredLamination:
    """The weighted simple closed curve ``weight * c``."""
    if sign(weight) == 0:
        raise EmptyLaminationError("zero weight gives the empty lamination")
    if sign(weight) < 0:
        raise DomainError("weight must be positive")
    return MeasuredLamination(weight * c.a, weight * c.b)


def intersection_number(l1: MeasuredLamination, l2: MeasuredLamination):
    """Geometric intersection number ``|det(v1, v2)|`` (0 for empty input)."""
    if l1.is_empty or l2.is_empty:
        return Fraction(0)
    return _clean(abs(l1.a * l2.b - l1.b * l2.a))


def projective_class(lam: MeasuredLamination):
    """Slope ``b/a`` of the projective class; ``INFINITY`` for vertical."""
    if lam.is_empty:
        raise EmptyLaminationError("the empty lamination has no projective class")
    if sign(lam.a) == 0:
        return INFINITY
    return _clean(lam.b / lam.a)


def projective_distance(l1: MeasuredLamination, l2: MeasuredLamination) -> float:
    """Angle in ``[0, pi/2]`` between the lines spanned by two laminations.

    This is a metric on PL_0 that stays finite near the vertical slope.
    """
    if l1.is_empty or l2.is_empty:
        raise EmptyLaminationError("the empty lamination has no projective class")
    a1, b1 = l1.to_float()
    a2, b2 = l2.to_float()
    return math.atan2(abs(a1 * b2 - b1 * a2), abs(a1 * a2 + b1 * b2))


def act_on_lamination(m: mat2.Mat, lam: MeasuredLamination) -> MeasuredLamination:
    """Image of ``lam`` under the mapping class with matrix ``m``."""
    if mat2.det(m) != 1:
        raise DomainError("mapping class matrix must have determinant 1")
    return MeasuredLamination(*mat2.apply(m, lam.vector))


def twist_matrix(c: CurveClass, power: int = 1) -> mat2.Mat:
    """Matrix of the ``power``-th twist about ``c``: ``v -> v + power*det(c, v)*c``.

    Twisting about (1,0) is ``R``; twisting about (0,1) is ``L^-1``.
    """
    p, q = c.a, c.b
    k = power
    return ((1 - k * p * q, k * p * p), (-k * q * q, 1 + k * p * q))


# --- alternation number against the Farey ideal triangulation ------------

FAREY_ARCS = (CurveClass(1, 0), CurveClass(0, 1), CurveClass(1, 1))


def normal_coordinates(mu: MeasuredLamination):
    """Transverse measures of ``mu`` across the arcs (1,0), (0,1), (1,1)."""
    if mu.is_empty:
        raise EmptyLaminationError("empty lamination")
    a, b = mu.vector
    return (_clean(abs(b)), _clean(abs(a)), _clean(abs(a - b)))


def alternation_number(mu: MeasuredLamination):
    """Alternation number of ``mu`` against the Farey triangulation.

    In each ideal triangle a normal arc cuts off one corner and so turns
    left or right.  Let the normal coordinates be ``n_max = n_mid + n_min``.
    The arcs crossing the edge of measure ``n_max`` alternate between the two
    triangles with opposite turns, and the turns along the remaining edges
    repeat exactly where the Sturmian sequence of the two smaller edges does.
    The direction changes total ``2*n_max - 2*n_min = 2*n_mid``.
    """
    coords = normal_coordinates(mu)
    coords = sorted(coords) if mu.exact else sorted(coords, key=float)
    lo, mid, hi = coords
    if mu.exact and hi != mid + lo:
        raise DomainError("normal coordinates violate the triangle relation")
    return _clean(2 * mid)
