"""Exact scalars: arbitrary-precision rationals and real quadratic surds.

A :class:`QuadSurd` is ``p + q*sqrt(d)`` with rational ``p, q`` and a
squarefree integer ``d > 1``.  Mixed arithmetic with ``int`` and
:class:`~fractions.Fraction` stays exact; mixing with ``float`` degrades to
``float``.  Surds over different radicands do not mix.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational

__all__ = [
    "QuadSurd",
    "Scalar",
    "exact_log",
    "exact_sqrt",
    "format_scalar",
    "is_exact",
    "parse_scalar",
    "scalar_field",
    "sign",
    "squarefree_decomposition",
    "to_float",
]

_GUARD_BITS = 96


def squarefree_decomposition(n: int) -> tuple[int, int]:
    """Return ``(s, d)`` with ``n == s*s*d`` and ``d`` squarefree (``n > 0``)."""
    if n <= 0:
        raise ValueError("n must be positive")
    s, d = 1, 1
    m = n
    p = 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            s *= p ** (e // 2)
            if e % 2:
                d *= p
        p += 1 if p == 2 else 2
    d *= m
    return s, d


class QuadSurd:
    """Element ``p + q*sqrt(d)`` of the real quadratic field Q(sqrt(d))."""

    __slots__ = ("p", "q", "d")

    def __init__(self, p, q=0, d: int = 5):
        d = int(d)
        if d <= 1:
            raise ValueError("radicand must be an integer > 1")
        s, sf = squarefree_decomposition(d)
        self.p = Fraction(p)
        self.q = Fraction(q) * s
        self.d = sf
        if sf == 1:
            self.p += self.q
            self.q = Fraction(0)
            self.d = 1

    # construction helpers -------------------------------------------------
    @classmethod
    def sqrt(cls, d: int) -> "QuadSurd":
        return cls(0, 1, d)

    def _coerce(self, other):
        if isinstance(other, QuadSurd):
            if other.q == 0:
                return other.p
            if self.q != 0 and other.d != self.d:
                raise ValueError(f"cannot mix sqrt({self.d}) and sqrt({other.d})")
            return other
        if isinstance(other, (int, Rational)):
            return Fraction(other)
        return NotImplemented

    def _radicand(self, other) -> int:
        if isinstance(other, QuadSurd) and other.q != 0:
            return other.d
        return self.d

    def simplify(self):
        """Collapse to a :class:`Fraction` when the irrational part vanishes."""
        return self.p if self.q == 0 else self

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, float):
            return float(self) + other
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if isinstance(o, Fraction):
            return _mk(self.p + o, self.q, self.d)
        return _mk(self.p + o.p, self.q + o.q, self._radicand(o))

    __radd__ = __add__

    def __neg__(self):
        return _mk(-self.p, -self.q, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, float):
            return float(self) - other
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, float):
            return float(self) * other
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if isinstance(o, Fraction):
            return _mk(self.p * o, self.q * o, self.d)
        d = self._radicand(o)
        return _mk(self.p * o.p + self.q * o.q * d, self.p * o.q + self.q * o.p, d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadSurd":
        return _mk(self.p, -self.q, self.d)

    def norm(self) -> Fraction:
        """Field norm ``p^2 - d q^2``."""
        return self.p * self.p - self.d * self.q * self.q

    def inverse(self) -> "QuadSurd":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero surd")
        return _mk(self.p / n, -self.q / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, float):
            return float(self) / other
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if isinstance(o, Fraction):
            if o == 0:
                raise ZeroDivisionError("division by zero")
            return _mk(self.p / o, self.q / o, self.d)
        return self * o.inverse()

    def __rtruediv__(self, other):
        if isinstance(other, float):
            return other / float(self)
        return self.inverse() * other

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = _mk(Fraction(1), Fraction(0), self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # ordering --------------------------------------------------------------
    def sign(self) -> int:
        """Exact sign of the real number represented."""
        sp = (self.p > 0) - (self.p < 0)
        sq = (self.q > 0) - (self.q < 0)
        if sq == 0:
            return sp
        if sp == 0 or sp == sq:
            return sq
        # opposite signs: compare p^2 with d q^2
        diff = self.p * self.p - self.d * self.q * self.q
        if diff == 0:
            return 0
        return sp if diff > 0 else sq

    def _cmp(self, other) -> int:
        if isinstance(other, float):
            a = float(self)
            return (a > other) - (a < other)
        o = self._coerce(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare QuadSurd with {type(other).__name__}")
        return sign(self - o)

    def __eq__(self, other):
        try:
            return self._cmp(other) == 0
        except (TypeError, ValueError):
            return False

    def __hash__(self):
        if self.q == 0:
            return hash(self.p)
        return hash((self.p, self.q, self.d))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return self.sign() != 0

    # conversion ------------------------------------------------------------
    def __float__(self):
        return _surd_to_float(self)

    def __repr__(self):
        return f"QuadSurd({self.p!s}, {self.q!s}, {self.d})"

    def __str__(self):
        return format_scalar(self)


def _mk(p, q, d) -> QuadSurd:
    s = QuadSurd.__new__(QuadSurd)
    s.p = Fraction(p)
    s.q = Fraction(q)
    s.d = d
    return s


Scalar = int | Fraction | QuadSurd | float


def is_exact(x) -> bool:
    return isinstance(x, (int, Rational, QuadSurd)) and not isinstance(x, bool)


def sign(x) -> int:
    if isinstance(x, QuadSurd):
        return x.sign()
    return (x > 0) - (x < 0)


def _isqrt_scaled(n: Fraction, bits: int) -> int:
    """floor(sqrt(n) * 2**bits) for rational n >= 0."""
    num = n.numerator << (2 * bits)
    return math.isqrt(num // n.denominator)


def _surd_fixed_point(x: QuadSurd, bits: int) -> int:
    """Integer approximation of ``x * 2**bits`` (error below 2)."""
    root = _isqrt_scaled(x.q * x.q * x.d, bits)
    if x.q < 0:
        root = -root
    p = x.p.numerator * (1 << bits) // x.p.denominator
    return p + root


def _surd_to_float(x: QuadSurd) -> float:
    if x.q == 0:
        return float(x.p)
    if (x.p >= 0) == (x.q >= 0) or x.p == 0:
        n = _surd_fixed_point(x, _GUARD_BITS)
        return _ratio_to_float(n, _GUARD_BITS)
    # p and q*sqrt(d) cancel; divide the norm by the conjugate instead
    return float(x.norm()) / _surd_to_float(x.conjugate())


def _ratio_to_float(n: int, bits: int) -> float:
    try:
        return n / (1 << bits)
    except OverflowError:
        return math.inf if n > 0 else -math.inf


def to_float(x) -> float:
    return float(x)


def exact_sqrt(x):
    """Exact square root of a nonnegative rational (Fraction or QuadSurd)."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative radicand")
    if x == 0:
        return Fraction(0)
    num = x.numerator * x.denominator
    s, d = squarefree_decomposition(num)
    if d == 1:
        return Fraction(s, x.denominator)
    return QuadSurd(0, Fraction(s, x.denominator), d)


def exact_log(x) -> float:
    """Natural log of a positive exact scalar without float overflow."""
    if isinstance(x, float):
        return math.log(x)
    if isinstance(x, QuadSurd) and x.q != 0:
        if x.sign() <= 0:
            raise ValueError("log of nonpositive value")
        approx = _surd_fixed_point(x, _GUARD_BITS)
        if approx > 0:
            return math.log(approx) - _GUARD_BITS * math.log(2)
        return math.log(float(x))
    f = Fraction(x.p if isinstance(x, QuadSurd) else x)
    if f <= 0:
        raise ValueError("log of nonpositive value")
    return math.log(f.numerator) - math.log(f.denominator)


def scalar_field(x) -> str:
    if isinstance(x, QuadSurd) and x.q != 0:
        return f"surd({x.d})"
    if isinstance(x, float):
        return "float"
    return "rational"


def _fmt_frac(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def format_scalar(x) -> str:
    """Decimal-free string: ``"3/2"``, ``"3+2*sqrt(2)"``, ``"-1/2*sqrt(5)"``."""
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, QuadSurd):
        if x.q == 0:
            return _fmt_frac(x.p)
        if x.q == 1:
            coef = ""
        elif x.q == -1:
            coef = "-"
        else:
            coef = _fmt_frac(x.q) + "*"
        rad = f"{coef}sqrt({x.d})"
        if x.p == 0:
            return rad
        return f"{_fmt_frac(x.p)}{'' if rad.startswith('-') else '+'}{rad}"
    return _fmt_frac(Fraction(x))


_RAT = r"[+-]?\d+(?:/\d+)?"
_SURD_RE = re.compile(
    rf"^\s*(?:(?P<p>{_RAT})\s*(?=[+-]|$))?\s*(?:(?P<q>[+-]?(?:\d+(?:/\d+)?)?)\s*\*?\s*sqrt\((?P<d>\d+)\))?\s*$"
)


def parse_scalar(text: str, field: str | None = None):
    """Inverse of :func:`format_scalar`."""
    text = text.strip()
    if field == "float":
        return float(text)
    if "sqrt" not in text:
        if field is None and re.search(r"[.eE]|inf|nan", text):
            return float(text)
        return Fraction(text)
    m = _SURD_RE.match(text)
    if not m or m.group("d") is None:
        raise ValueError(f"malformed surd literal {text!r}")
    p = Fraction(m.group("p")) if m.group("p") else Fraction(0)
    qs = m.group("q")
    if qs in ("", "+", None):
        q = Fraction(1)
    elif qs == "-":
        q = Fraction(-1)
    else:
        q = Fraction(qs)
    return QuadSurd(p, q, int(m.group("d"))).simplify()
