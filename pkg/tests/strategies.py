"""Shared hypothesis strategies."""

import math
from fractions import Fraction

from hypothesis import strategies as st

from ptorus.lamination import curve, lamination
from ptorus.mapping_class import MappingClass
from ptorus.scalars import QuadSurd

small_int = st.integers(-40, 40)
fractions = st.builds(Fraction, st.integers(-60, 60), st.integers(1, 15))
positive_fractions = st.builds(Fraction, st.integers(1, 60), st.integers(1, 15))
radicands = st.sampled_from([2, 3, 5, 6, 7, 13])


@st.composite
def surds(draw, d=None):
    d = draw(radicands) if d is None else d
    return QuadSurd(draw(fractions), draw(fractions), d)


def primitive_pairs(bound=12):
    return st.tuples(st.integers(-bound, bound), st.integers(-bound, bound)).filter(
        lambda p: math.gcd(*p) == 1)


curves = primitive_pairs().map(lambda p: curve(*p))


@st.composite
def exact_laminations(draw):
    a, b = draw(fractions), draw(fractions)
    if a == 0 and b == 0:
        a = Fraction(1)
    return lamination(a, b)


@st.composite
def words(draw, max_len=6, max_exp=3):
    n = draw(st.integers(0, max_len))
    return MappingClass.from_word(
        [(draw(st.sampled_from("RL")), draw(st.integers(-max_exp, max_exp))) for _ in range(n)])


@st.composite
def positive_rl_words(draw, max_blocks=3, max_exp=3):
    k = draw(st.integers(1, max_blocks))
    parts = []
    for _ in range(k):
        parts.append(("R", draw(st.integers(1, max_exp))))
        parts.append(("L", draw(st.integers(1, max_exp))))
    return MappingClass.from_word(parts)


@st.composite
def pseudo_anosov_words(draw):
    """Conjugates of positive RL words, optionally times the elliptic involution."""
    core = draw(positive_rl_words())
    psi = draw(words(max_len=3, max_exp=2))
    phi = psi * core * psi.inverse()
    if draw(st.booleans()):
        phi = phi * MappingClass.from_word([("R", 1), ("L", -1), ("R", 1)]) ** 2
    return phi
