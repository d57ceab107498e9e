"""Fricke trace coordinates on the Teichmuller space of the punctured torus.

A marked hyperbolic structure is a triple ``(x, y, z)`` of traces of the
curves (1,0), (0,1) and (1,1), subject to ``x^2 + y^2 + z^2 = xyz`` (the
commutator is parabolic).  Traces of all simple curves follow by
Stern-Brocot descent, ``t(u+v) = t(u) t(v) - t(u-v)`` for Farey neighbours.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import mat2
from .errors import DomainError, EmptyLaminationError, ToleranceError
from .lamination import (
    CurveClass,
    MeasuredLamination,
    curve,
    intersection_number,
    lamination,
)
from .scalars import QuadSurd, exact_log, exact_sqrt, format_scalar, is_exact, sign

__all__ = [
    "FrickePoint",
    "LengthProfile",
    "act_on_teich",
    "boundary_profile",
    "four_curve_lengths",
    "four_curve_sweep",
    "fuchsian_matrices",
    "l_move",
    "l_move_inv",
    "length_of_curve",
    "length_of_lamination",
    "log_trace_of_slope",
    "make_fricke",
    "r_move",
    "r_move_inv",
    "trace_of_slope",
]

_FLOAT_REL_TOL = 1e-9
# above this many Stern-Brocot levels exact traces get expensive; use logs
_EXACT_NORM_LIMIT = 256
_LOG_SWITCH = 1e8


def _relation_residual(x, y, z):
    return x * x + y * y + z * z - x * y * z


@dataclass(frozen=True)
class FrickePoint:
    x: object
    y: object
    z: object

    def __post_init__(self):
        x, y, z = self.x, self.y, self.z
        if self.exact:
            if _relation_residual(x, y, z) != 0:
                raise DomainError(f"({x}, {y}, {z}) violates x^2+y^2+z^2 = xyz")
            if min(sign(t - 2) for t in (x, y, z)) <= 0:
                raise DomainError("Fricke traces must exceed 2")
        else:
            fx, fy, fz = float(x), float(y), float(z)
            scale = max(1.0, fx * fy * fz)
            if abs(_relation_residual(fx, fy, fz)) > _FLOAT_REL_TOL * scale:
                raise DomainError(f"({fx}, {fy}, {fz}) violates x^2+y^2+z^2 = xyz")
            if min(fx, fy, fz) <= 2:
                raise DomainError("Fricke traces must exceed 2")

    @property
    def exact(self) -> bool:
        return all(is_exact(t) for t in (self.x, self.y, self.z))

    def as_tuple(self):
        return (self.x, self.y, self.z)

    def to_float(self) -> tuple[float, float, float]:
        return (float(self.x), float(self.y), float(self.z))

    def to_json(self) -> dict:
        out = {k: float(getattr(self, k)) for k in "xyz"}
        if self.exact:
            out["exact"] = {k: format_scalar(getattr(self, k)) for k in "xyz"}
        return out


def make_fricke(x, y, larger_root: bool = True) -> FrickePoint:
    """Complete ``(x, y)`` to a Fricke triple by solving for ``z``.

    The two roots ``z`` and ``xy - z`` differ by a twist about (1,0).
    """
    if sign(x - 2) <= 0 or sign(y - 2) <= 0:
        raise DomainError("x and y must exceed 2")
    disc = x * x * y * y - 4 * (x * x + y * y)
    if sign(disc) < 0:
        raise DomainError("no hyperbolic structure with parabolic commutator for these traces")
    if is_exact(x) and is_exact(y) and not isinstance(x, QuadSurd) and not isinstance(y, QuadSurd):
        root = exact_sqrt(disc)
    else:
        root = math.sqrt(float(disc))
    s = 1 if larger_root else -1
    z = (x * y + s * root) / 2
    if isinstance(z, QuadSurd):
        z = z.simplify()
    return FrickePoint(x, y, z)


# --- trace moves -------------------------------------------------------------
# r_move/l_move give the traces of the curves R(c), L(c); that is the
# structure pulled back by the twist.

def r_move(x, y, z):
    return (x, z, x * z - y)


def r_move_inv(x, y, z):
    return (x, x * y - z, y)


def l_move(x, y, z):
    return (z, y, y * z - x)


def l_move_inv(x, y, z):
    return (x * y - z, y, x)


_PUSH = {("R", 1): r_move_inv, ("R", -1): r_move, ("L", 1): l_move_inv, ("L", -1): l_move}


def _check_point(g):
    if not isinstance(g, FrickePoint):
        g = FrickePoint(*g)
    return g


def act_on_teich(phi, g: FrickePoint) -> FrickePoint:
    """Push the marked structure ``g`` forward by the mapping class ``phi``.

    The result satisfies ``length(act_on_teich(phi, g), phi(c)) == length(g, c)``.
    """
    g = _check_point(g)
    t = g.as_tuple()
    for letter, e in reversed(phi.word):
        move = _PUSH[(letter, 1 if e > 0 else -1)]
        for _ in range(abs(e)):
            t = move(*t)
    return FrickePoint(*(v.simplify() if isinstance(v, QuadSurd) else v for v in t))


def pull_back_traces(phi, t):
    """Traces of ``phi(A), phi(B), phi(AB)`` given those of ``A, B, AB``.

    Works for any ring elements (used with complex traces by the solver).
    """
    for letter, e in reversed(phi.word):
        move = _PUSH[(letter, -1 if e > 0 else 1)]
        for _ in range(abs(e)):
            t = move(*t)
    return t


# --- traces of simple curves ---------------------------------------------------

def _descent_start(g: FrickePoint, c: CurveClass):
    a, b = c.a, c.b
    x, y, z = g.as_tuple()
    if b < 0:
        # reflection (a, b) -> (a, -b) exchanges (1,1) and (1,-1)
        return (a, -b), (x, y, x * y - z)
    return (a, b), (x, y, z)


def _descend(g: FrickePoint, c: CurveClass, mul, sub, validate=None):
    """Stern-Brocot descent returning ``t(c)``; ``mul``/``sub`` define the ring."""
    (a, b), (x, y, z) = _descent_start(g, c)
    if b == 0:
        return x
    if a == 0:
        return y
    # invariant: u, v Farey neighbours in the first quadrant, m = u + v,
    # d = t(v - u) (up to sign, the curve v - u)
    tu, tv, tm = x, y, z
    u, v = (1, 0), (0, 1)
    while True:
        m = (u[0] + v[0], u[1] + v[1])
        if m == (a, b):
            return tm
        if b * m[0] < m[1] * a:
            # target between u and m: new pair (u, m), difference m - u = v
            new = sub(mul(tu, tm), tv)
            v, tv, tm = m, tm, new
        else:
            new = sub(mul(tm, tv), tu)
            u, tu, tm = m, tm, new
        if validate is not None:
            validate(tu, tv, tm)


def trace_of_slope(g: FrickePoint, c: CurveClass, check: bool = False):
    """Trace of the simple curve ``c`` (exact when ``g`` is exact)."""
    g = _check_point(g)
    validate = None
    if check:
        def validate(p, q, r):
            res = _relation_residual(p, q, r)
            if is_exact(res):
                if res != 0:
                    raise AssertionError("Fricke relation broken during descent")
            elif abs(res) > 1e-6 * max(1.0, abs(p * q * r)):
                raise AssertionError("Fricke relation broken during descent")
    t = _descend(g, c, lambda p, q: p * q, lambda p, q: p - q, validate)
    return t.simplify() if isinstance(t, QuadSurd) else t


def _log_sub(lp, lq):
    """log(e^lp - e^lq) for lp > lq."""
    return lp + math.log1p(-math.exp(lq - lp))


def log_trace_of_slope(g: FrickePoint, c: CurveClass) -> float:
    """``log t(c)`` by descent in the log domain; never overflows."""
    g = _check_point(g)
    lx, ly, lz = (exact_log(t) for t in g.as_tuple())
    if c.b < 0:
        x, y, z = g.as_tuple()
        lz = exact_log(x * y - z)
    c2 = CurveClass(c.a, abs(c.b)) if c.b < 0 else c
    g2 = _LogPoint(lx, ly, lz)
    return _descend(g2, c2, lambda p, q: p + q, _log_sub)


@dataclass(frozen=True)
class _LogPoint:
    x: float
    y: float
    z: float

    def as_tuple(self):
        return (self.x, self.y, self.z)


def _acosh_half_from_log(lt: float) -> float:
    """arccosh(t/2) from log t, accurate for huge t."""
    if lt < math.log(_LOG_SWITCH):
        return math.acosh(math.exp(lt) / 2)
    return lt + math.log1p(math.sqrt(1.0 - 4.0 * math.exp(-2 * lt))) - math.log(2)


def length_of_curve(g: FrickePoint, c: CurveClass) -> float:
    """Hyperbolic length ``2 arccosh(t(c)/2)`` of the geodesic in class ``c``."""
    g = _check_point(g)
    if g.exact and abs(c.a) + abs(c.b) <= _EXACT_NORM_LIMIT:
        t = trace_of_slope(g, c)
        if float(t) < _LOG_SWITCH:
            return 2 * math.acosh(float(t) / 2)
        return 2 * _acosh_half_from_log(exact_log(t))
    return 2 * _acosh_half_from_log(log_trace_of_slope(g, c))


def _floor(x) -> int:
    if isinstance(x, QuadSurd):
        n = math.floor(float(x))
        while x < n:
            n -= 1
        while x >= n + 1:
            n += 1
        return n
    return math.floor(x)


def _convergents(s):
    """Continued-fraction convergents ``(p, q)`` of a nonnegative slope."""
    p0, q0, p1, q1 = 0, 1, 1, 0
    x = s
    while True:
        a = _floor(x)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        yield p1, q1
        frac = x - a
        if (sign(frac) == 0) if is_exact(frac) else abs(float(frac)) < 1e-15:
            return
        x = 1 / frac


def length_of_lamination(g: FrickePoint, lam: MeasuredLamination, tol: float = 1e-9,
                         max_depth: int = 64) -> float:
    """Length of a measured lamination; irrational slopes via convergents."""
    g = _check_point(g)
    if lam.is_empty:
        raise EmptyLaminationError("empty lamination has no length")
    a, b = lam.vector
    if lam.exact and not isinstance(a, QuadSurd) and not isinstance(b, QuadSurd):
        # rational vector: weight times primitive class
        from fractions import Fraction

        a, b = Fraction(a), Fraction(b)
        den = math.lcm(a.denominator, b.denominator)
        ia, ib = int(a * den), int(b * den)
        k = math.gcd(ia, ib)
        w = Fraction(k, den)
        return float(w) * length_of_curve(g, curve(ia // k, ib // k))
    fa, fb = float(a), float(b)
    if fa == 0 or fb == 0:
        c = curve(0, 1) if fa == 0 else curve(1, 0)
        return math.hypot(fa, fb) * length_of_curve(g, c)
    norm = math.hypot(fa, fb)
    flip = (fa > 0) != (fb > 0)
    slope = abs(b / a) if lam.exact else abs(fb / fa)
    estimates = []
    for depth, (p, q) in enumerate(_convergents(slope)):
        # convergent p/q approximates |b/a|: the class (q, +-p)
        c = curve(q, -p if flip else p)
        est = length_of_curve(g, c) * norm / math.hypot(q, p)
        estimates.append(est)
        if len(estimates) >= 2 and abs(estimates[-1] - estimates[-2]) < tol:
            return est
        if depth + 1 >= max_depth:
            break
    if len(estimates) >= 1 and not lam.exact and len(estimates) < max_depth:
        # float slope expansion terminated: the slope is rational in floating point
        return estimates[-1]
    raise ToleranceError(
        f"length did not converge within depth {max_depth}", trace=estimates[-2:]
    )


def fuchsian_matrices(g: FrickePoint):
    """Real ``SL(2)`` matrices ``A, B`` with traces ``x, y`` and ``tr AB = z``."""
    g = _check_point(g)
    x, y, z = g.to_float()
    p = (y + math.sqrt(y * y - 4)) / 2
    A = np.array([[x, -1.0], [1.0, 0.0]])
    B = np.array([[p, z - x * p], [0.0, 1.0 / p]])
    return A, B


FOUR_CURVES = (CurveClass(1, 0), CurveClass(0, 1), CurveClass(1, 1), CurveClass(1, -1))


def four_curve_lengths(g: FrickePoint) -> tuple[float, float, float, float]:
    """Lengths of (1,0), (0,1), (1,1), (1,-1): traces x, y, z, xy - z."""
    g = _check_point(g)
    x, y, z = g.as_tuple()
    out = []
    for t in (x, y, z, x * y - z):
        out.append(2 * math.acosh(float(t) / 2))
    return tuple(out)


def four_curve_sweep(lo: float = 2.1, hi: float = 20.0, steps: int = 2000):
    """Max of the four lengths along the diagonal ``x = y``, both roots for ``z``.

    Points with ``x < 2*sqrt(2)`` carry no structure with parabolic commutator
    and are skipped.  Returns ``(xs, maxima)`` with two entries per valid ``x``.
    """
    xs, maxima = [], []
    for x in np.linspace(lo, hi, steps):
        x = float(x)
        if x * x < 8:
            continue
        for larger in (True, False):
            g = make_fricke(x, x, larger_root=larger)
            xs.append(x)
            maxima.append(max(four_curve_lengths(g)))
    return np.array(xs), np.array(maxima)


# --- boundary profiles ---------------------------------------------------------

@dataclass
class LengthProfile:
    """Probe lengths along ``g_n = phi^n g_0``, ``n = 0..n_max``."""

    probes: list
    lengths: np.ndarray  # shape (n_max + 1, len(probes))
    limit_ratios: list = field(default_factory=list)
    growth_limit: float | None = None

    @property
    def ratios(self) -> np.ndarray:
        return self.lengths / self.lengths[:, :1]

    @property
    def growth(self) -> np.ndarray:
        """Per-step factors ``length_{n+1} / length_n``."""
        return self.lengths[1:] / self.lengths[:-1]

    def rows(self):
        for n, row in enumerate(self.lengths):
            for j, val in enumerate(row):
                yield n, j, float(val), float(val / row[0])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "probe_index", "length", "ratio_to_probe0"])
        for n, j, val, ratio in self.rows():
            w.writerow([n, j, f"{val:.15g}", f"{ratio:.15g}"])
        return buf.getvalue()


def boundary_profile(g0: FrickePoint, phi, n_max: int, probes) -> LengthProfile:
    """Probe lengths along the orbit ``g_n = act_on_teich(phi^n, g0)``.

    By equivariance ``length(g_n, c) = length(g0, phi^-n c)``; the integer
    vectors ``phi^-n c`` stay small while the traces of ``g_n`` do not, so the
    lengths are evaluated at ``g0``.
    """
    from .mapping_class import PseudoAnosov, classify

    g0 = _check_point(g0)
    if not probes:
        raise DomainError("at least one probe lamination is required")
    inv = mat2.inv(phi.matrix)
    table = np.empty((n_max + 1, len(probes)))
    vecs = [p.vector for p in probes]
    for n in range(n_max + 1):
        for j, v in enumerate(vecs):
            table[n, j] = length_of_lamination(g0, lamination(*v))
        vecs = [mat2.apply(inv, v) for v in vecs]
    nt = classify(phi)
    limits, growth = [], None
    if isinstance(nt, PseudoAnosov):
        i0 = intersection_number(probes[0], nt.mu_u)
        limits = [intersection_number(p, nt.mu_u) / i0 for p in probes]
        growth = float(nt.dilatation)
    return LengthProfile(list(probes), table, limits, growth)
