"""Brute-force oracles that cross-check the fast routines.

Each oracle returns an :class:`OracleResult` whose rows compare the library
value with an independently computed one.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import _kernels, mat2
from .lamination import alternation_number, curve, intersection_number, lamination
from .mapping_class import canonical_rl_form, parse_word

__all__ = [
    "ORACLES",
    "OracleResult",
    "alternation_oracle",
    "dilog_oracle",
    "intersection_oracle",
    "primitive_pairs",
    "rl_form_oracle",
    "traced_alternation",
]


@dataclass
class OracleResult:
    name: str
    columns: tuple[str, ...]
    rows: list = field(default_factory=list)
    mismatches: int = 0
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.mismatches == 0 and bool(self.rows)

    def table(self, limit: int = 20) -> str:
        lines = ["\t".join(self.columns)]
        shown = [r for r in self.rows if not r[-1]][:limit] or self.rows[:limit]
        for r in shown:
            lines.append("\t".join(str(x) for x in r))
        lines.append(f"# {self.name}: {len(self.rows)} cases, {self.mismatches} mismatches, "
                     f"{self.elapsed:.2f}s")
        return "\n".join(lines)


def primitive_pairs(bound: int):
    """Primitive integer pairs with entries in ``[-bound, bound]``, one per sign class."""
    out = []
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            if math.gcd(a, b) == 1 and (a > 0 or (a == 0 and b > 0)):
                out.append((a, b))
    return out


# --- intersection numbers --------------------------------------------------------------

def intersection_oracle(bound: int = 10) -> OracleResult:
    """``|ad - bc|`` against crossings of straight representatives on the flat torus."""
    t0 = time.perf_counter()
    res = OracleResult("intersection", ("u", "v", "det", "crossings", "ok"))
    pairs = primitive_pairs(bound)
    for u in pairs:
        lu = lamination(*u)
        for v in pairs:
            det = int(intersection_number(lu, lamination(*v)))
            count = _kernels.crossing_count(u, v)
            ok = det == count
            res.mismatches += not ok
            res.rows.append((u, v, det, count, ok))
    res.elapsed = time.perf_counter() - t0
    return res


# --- alternation number ------------------------------------------------------------------

_START = (Fraction(2718281, 10000000), Fraction(1414213, 10000000))


def _corner(e1, e2):
    """Lattice point where the edge lines of two crossing events meet."""
    (t1, k1), (t2, k2) = sorted((e1, e2))
    if (t1, t2) == ("d", "h"):
        return (k2 + k1, k2)
    if (t1, t2) == ("d", "v"):
        return (k2, k2 - k1)
    return (k2, k1)  # ("h", "v")


def traced_alternation(a: int, b: int) -> int:
    """Alternation number of the curve ``(a, b)`` by following a straight line.

    The line crosses the lifts of the arcs (1,0) [horizontal lines], (0,1)
    [vertical] and (1,1) [diagonals].  Between consecutive crossings it cuts
    a corner of an ideal triangle; the corner lies to its left or right, and
    the alternation number counts the changes around the closed curve.
    """
    x0, y0 = _START
    events = []
    for kind, val0, speed in (("v", x0, a), ("h", y0, b), ("d", x0 - y0, a - b)):
        if speed == 0:
            continue
        lo, hi = sorted((val0, val0 + speed))
        for k in range(math.ceil(lo), math.floor(hi) + 1):
            t = (k - val0) / speed
            if 0 <= t < 1:
                events.append((t, kind, k))
    events.sort()
    ts = [e[0] for e in events]
    if len(set(ts)) != len(ts):
        raise RuntimeError("straight line passes through a lattice point")
    shift = {"v": a, "h": b, "d": a - b}
    n = len(events)
    turns = []
    for i in range(n):
        t1, kind1, k1 = events[i]
        if i + 1 < n:
            t2, kind2, k2 = events[i + 1]
        else:
            t2, kind2, k2 = events[0]
            t2, k2 = t2 + 1, k2 + shift[kind2]
        cx, cy = _corner((kind1, k1), (kind2, k2))
        tm = (t1 + t2) / 2
        px, py = x0 + tm * a, y0 + tm * b
        cross = a * (cy - py) - b * (cx - px)
        turns.append(1 if cross > 0 else -1)
    return sum(1 for i in range(n) if turns[i] != turns[i - 1])


def alternation_oracle(bound: int = 8) -> OracleResult:
    t0 = time.perf_counter()
    res = OracleResult("alternation", ("curve", "combinatorial", "traced", "ok"))
    for a, b in primitive_pairs(bound):
        comb = int(alternation_number(lamination(a, b)))
        traced = traced_alternation(a, b)
        ok = comb == traced
        res.mismatches += not ok
        res.rows.append((str(curve(a, b)), comb, traced, ok))
    res.elapsed = time.perf_counter() - t0
    return res


# --- RL normal form --------------------------------------------------------------------

def _find_conjugator(m, target, bound):
    """Some ``P`` in SL(2,Z) with entries at most ``bound`` and ``P m P^-1 = target``."""
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            for c in range(-bound, bound + 1):
                # d from ad - bc = 1
                if a == 0:
                    if b * c != -1:
                        continue
                    ds = range(-bound, bound + 1)
                else:
                    if (1 + b * c) % a:
                        continue
                    ds = ((1 + b * c) // a,)
                for d in ds:
                    p = ((a, b), (c, d))
                    if mat2.det(p) == 1 and mat2.mul(p, m) == mat2.mul(target, p):
                        return p
    return None


_RL_WORDS = ("R L", "R^4 L", "R^2 L^3", "L R", "R^3 L R^2 L^2", "R^3 L^2 R L",
             "R^-7 R^4 L R^7", "R^2 L^-3", "L R L R^2", "R L^2 R L^2")


def rl_form_oracle(words=_RL_WORDS, bound: int = 12) -> OracleResult:
    """Normal form against a brute-force search for an explicit conjugator."""
    t0 = time.perf_counter()
    res = OracleResult("rl-form", ("word", "rl_form", "conjugator", "ok"))
    for w in words:
        phi = parse_word(w)
        rl = canonical_rl_form(phi)
        p = _find_conjugator(phi.matrix, rl.matrix(), bound)
        ok = p is not None and all(x >= 0 for r in rl.mapping_class().matrix for x in r)
        res.mismatches += not ok
        res.rows.append((w, str(rl), p, ok))
    res.elapsed = time.perf_counter() - t0
    return res


# --- Bloch-Wigner dilogarithm -------------------------------------------------------------

def dilog_oracle(samples: int = 500, seed: int = 0, tol: float = 1e-12) -> OracleResult:
    """Series evaluation against ``mpmath.polylog`` at 30 digits."""
    import mpmath

    from .dilog import bloch_wigner

    t0 = time.perf_counter()
    res = OracleResult("dilog", ("z", "series", "mpmath", "ok"))
    rng = random.Random(seed)
    with mpmath.workdps(30):
        for _ in range(samples):
            z = complex(rng.gauss(0, 2), rng.gauss(0, 2))
            zm = mpmath.mpc(z.real, z.imag)
            ref = float(mpmath.im(mpmath.polylog(2, zm)) + mpmath.arg(1 - zm) * mpmath.log(abs(zm)))
            val = bloch_wigner(z)
            ok = abs(val - ref) <= tol * max(1.0, abs(ref))
            res.mismatches += not ok
            res.rows.append((f"{z:.6g}", f"{val:.15g}", f"{ref:.15g}", ok))
    res.elapsed = time.perf_counter() - t0
    return res


ORACLES = {
    "intersection": intersection_oracle,
    "alternation": alternation_oracle,
    "rl-form": rl_form_oracle,
    "dilog": dilog_oracle,
}
