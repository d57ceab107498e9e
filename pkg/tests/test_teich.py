import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptorus.errors import DomainError
from ptorus.lamination import act_on_lamination, curve, intersection_number, lamination
from ptorus.mapping_class import parse_word
from ptorus.scalars import QuadSurd
from ptorus.teich import (
    FrickePoint,
    act_on_teich,
    boundary_profile,
    four_curve_lengths,
    four_curve_sweep,
    fuchsian_matrices,
    l_move,
    l_move_inv,
    length_of_curve,
    length_of_lamination,
    log_trace_of_slope,
    make_fricke,
    r_move,
    r_move_inv,
    trace_of_slope,
)
from strategies import curves, primitive_pairs, words

G333 = FrickePoint(3, 3, 3)


def relation(x, y, z):
    return x * x + y * y + z * z - x * y * z


@st.composite
def fricke_points(draw):
    x = draw(st.integers(3, 12))
    y = draw(st.integers(3, 12))
    return make_fricke(Fraction(x), Fraction(y), larger_root=draw(st.booleans()))


def test_make_fricke_examples():
    assert make_fricke(3, 3).as_tuple() == (3, 3, 6)
    assert make_fricke(3, 3, larger_root=False).as_tuple() == (3, 3, 3)
    g = make_fricke(2.9, 2.9)
    assert relation(*g.to_float()) == pytest.approx(0, abs=1e-9)
    with pytest.raises(DomainError):
        make_fricke(2.5, 2.5)
    with pytest.raises(DomainError):
        make_fricke(2, 5)


def test_root_choice_differs_by_twist():
    big, small = make_fricke(4, 5), make_fricke(4, 5, larger_root=False)
    assert big.z + small.z == 4 * 5
    assert isinstance(big.z, QuadSurd)


def test_fricke_validation():
    with pytest.raises(DomainError):
        FrickePoint(3, 3, 4)
    with pytest.raises(DomainError):
        FrickePoint(3.0, 3.0, 4.0)


def test_trace_moves_examples():
    assert r_move(3, 3, 3) == (3, 3, 6)
    assert 9 + 9 + 36 == 3 * 3 * 6
    assert r_move_inv(*r_move(3, 3, 6)) == (3, 3, 6)
    assert l_move_inv(*l_move(3, 3, 6)) == (3, 3, 6)
    assert act_on_teich(parse_word(""), make_fricke(3, 3)) == make_fricke(3, 3)


def test_trace_of_slope_examples():
    assert trace_of_slope(G333, curve(1, 0)) == 3
    assert trace_of_slope(G333, curve(2, 1)) == 6
    assert trace_of_slope(G333, curve(1, 1)) == 3
    assert trace_of_slope(G333, curve(1, -1)) == 6


def test_length_examples():
    assert length_of_lamination(G333, lamination(0, 1)) == pytest.approx(1.9248473002384, rel=1e-12)
    assert length_of_lamination(G333, lamination(0, 2)) == pytest.approx(3.8496946004768, rel=1e-12)
    assert length_of_lamination(G333, lamination(2, 1)) == pytest.approx(3.5254943480782, rel=1e-12)


def test_irrational_length_is_limit_of_convergents():
    lam = lamination(2, QuadSurd(-1, 1, 5))
    val = length_of_lamination(G333, lam)
    norm = math.hypot(2, math.sqrt(5) - 1)
    p, q = 233, 377  # Fibonacci convergent of (sqrt5-1)/2
    approx = length_of_curve(G333, curve(q, p)) * norm / math.hypot(q, p)
    assert val == pytest.approx(approx, rel=1e-5)


def test_fuchsian_examples():
    for g in (G333, make_fricke(4, 7), make_fricke(2.9, 3.1)):
        A, B = fuchsian_matrices(g)
        x, y, z = g.to_float()
        assert np.linalg.det(A) == pytest.approx(1, abs=1e-12)
        assert np.linalg.det(B) == pytest.approx(1, abs=1e-12)
        assert np.trace(A) == pytest.approx(x, rel=1e-12)
        assert np.trace(B) == pytest.approx(y, rel=1e-12)
        assert np.trace(A @ B) == pytest.approx(z, rel=1e-12)
        comm = A @ B @ np.linalg.inv(A) @ np.linalg.inv(B)
        assert np.trace(comm) == pytest.approx(-2, abs=1e-10)
        P = np.array([[2.0, 1.0], [3.0, 2.0]])
        Ac = P @ A @ np.linalg.inv(P)
        assert np.trace(Ac) == pytest.approx(x, rel=1e-12)


def test_four_curves_example():
    lengths = four_curve_lengths(G333)
    assert lengths[:3] == pytest.approx([1.9248473002384] * 3, rel=1e-12)
    assert lengths[3] == pytest.approx(2 * math.acosh(3), rel=1e-12)


def test_four_curve_sweep_skips_invalid_points():
    xs, maxima = four_curve_sweep()
    assert xs.min() >= 2 * math.sqrt(2)
    assert (maxima > 0).all()


def test_boundary_profile_examples():
    probes = [lamination(1, 0), lamination(0, 1)]
    prof = boundary_profile(G333, parse_word("R L"), 12, probes)
    golden = (1 + math.sqrt(5)) / 2
    r = prof.ratios[12, 1]
    assert min(abs(r - golden), abs(r - 1 / golden)) < 1e-3
    assert prof.growth[11, 0] == pytest.approx((3 + math.sqrt(5)) / 2, abs=1e-3)
    flat = boundary_profile(G333, parse_word("R"), 10, [lamination(1, 0)])
    assert np.allclose(flat.lengths, flat.lengths[0])
    csv = prof.to_csv().splitlines()
    assert csv[0] == "n,probe_index,length,ratio_to_probe0"
    assert len(csv) == 1 + 13 * 2
    with pytest.raises(DomainError):
        boundary_profile(G333, parse_word("R L"), 3, [])


def test_boundary_profile_large_n_is_finite():
    prof = boundary_profile(G333, parse_word("R^4 L"), 40, [lamination(1, 0), lamination(1, 1)])
    assert np.isfinite(prof.lengths).all()
    assert prof.ratios[40, 1] == pytest.approx(prof.limit_ratios[1], rel=1e-6)


def test_binding_confinement_along_twist_ray():
    g = G333
    rows = []
    for _ in range(12):
        rows.append((length_of_curve(g, curve(1, 0)), length_of_curve(g, curve(0, 1)),
                     length_of_curve(g, curve(2, 3))))
        g = act_on_teich(parse_word("R"), g)
    rows = np.array(rows)
    assert np.allclose(rows[:, 0], rows[0, 0])
    assert (np.diff(rows[5:, 1]) > 0).all() and (np.diff(rows[5:, 2]) > 0).all()


def test_fuchsian_equality_case():
    # with both ends equal the harmonic-mean bound is an identity
    ell = length_of_curve(G333, curve(3, 2))
    assert 1 / ell == pytest.approx(0.5 * (1 / ell + 1 / ell), rel=0, abs=0)


# properties -------------------------------------------------------------------

@given(fricke_points(), words(max_len=4, max_exp=2))
@settings(max_examples=40)
def test_action_preserves_relation_exactly(g, phi):
    h = act_on_teich(phi, g)
    assert relation(*h.as_tuple()) == 0
    assert act_on_teich(phi.inverse(), h) == g


@given(fricke_points(), words(max_len=3, max_exp=2), primitive_pairs(5))
@settings(max_examples=40)
def test_length_equivariance(g, phi, v):
    lam = lamination(*v)
    lhs = length_of_lamination(act_on_teich(phi, g), act_on_lamination(phi.matrix, lam))
    assert lhs == pytest.approx(length_of_lamination(g, lam), rel=1e-9)


@given(fricke_points(), curves)
@settings(max_examples=60)
def test_descent_keeps_relation(g, c):
    t = trace_of_slope(g, c, check=True)
    assert t > 2
    assert log_trace_of_slope(g, c) == pytest.approx(math.log(float(t)), rel=1e-9)


@given(fricke_points(), curves, curves)
@settings(max_examples=40)
def test_trace_identity_for_unit_pairs(g, c1, c2):
    if intersection_number(lamination(*c1), lamination(*c2)) != 1:
        return
    s = curve(c1.a + c2.a, c1.b + c2.b)
    d = curve(c1.a - c2.a, c1.b - c2.b)
    t1, t2 = trace_of_slope(g, c1), trace_of_slope(g, c2)
    assert trace_of_slope(g, s) + trace_of_slope(g, d) == t1 * t2
