import math
import re
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import regression, solved
from ptorus.errors import DomainError
from ptorus.holonomy import reduce_word
from ptorus.limitset import (
    FUCHSIAN_A,
    FUCHSIAN_B,
    CTPolyline,
    Projection,
    ProjectionError,
    RepInvalidError,
    circle_residual,
    coverage,
    ct_polyline,
    cusp_anchor,
    cusp_projection,
    parabolic_fixed_point,
    raster_hash,
    render_svg,
    to_csv,
)
from ptorus.teich import fuchsian_matrices, make_fricke

FUCHS = (FUCHSIAN_A, FUCHSIAN_B)


def _chordal(u, v):
    if np.isinf(u) and np.isinf(v):
        return 0.0
    if np.isinf(u):
        return 2 / math.sqrt(1 + abs(v) ** 2)
    if np.isinf(v):
        return 2 / math.sqrt(1 + abs(u) ** 2)
    return 2 * abs(u - v) / math.sqrt((1 + abs(u) ** 2) * (1 + abs(v) ** 2))


def _mobius(m, z):
    (a, b), (c, d) = m
    den = c * z + d
    return complex(math.inf) if den == 0 else (a * z + b) / den


def test_parabolic_fixed_point():
    assert parabolic_fixed_point(((1, 1), (0, 1))) == (1, 0)
    num, den = parabolic_fixed_point(((1, 0), (1, 1)))
    assert num == 0 and den != 0
    with pytest.raises(RepInvalidError):
        parabolic_fixed_point(((2, 0), (0, 1)))


def test_reference_commutator_is_parabolic():
    K = FUCHSIAN_A @ FUCHSIAN_B @ np.linalg.inv(FUCHSIAN_A) @ np.linalg.inv(FUCHSIAN_B)
    assert np.trace(K) == pytest.approx(-2)


def test_depth_limits():
    with pytest.raises(DomainError):
        ct_polyline(FUCHS, 0)
    with pytest.raises(DomainError):
        ct_polyline(FUCHS, 21)


def test_rejects_non_parabolic_rep():
    A = np.array([[2.0, 0], [0, 0.5]])
    B = np.array([[2.0, 1.0], [1.0, 1.0]])
    with pytest.raises(RepInvalidError):
        ct_polyline((A, B), 3)


def test_anchors_unique_and_ordered():
    poly = ct_polyline(solved("R L")[2], 7)
    keys = set(zip(poly.anchor_num.tolist(), poly.anchor_den.tolist()))
    assert len(keys) == len(poly)
    finite = [a for a in poly.anchors if a != math.inf]
    assert all(x < y for x, y in zip(finite, finite[1:]))
    assert all(isinstance(a, Fraction) for a in finite)


@given(st.text("ABab", max_size=5).map(reduce_word))
@settings(max_examples=60)
def test_images_are_cusp_images(w):
    _, _, rep = solved("R^4 L")
    poly = ct_polyline(rep, 6)
    index = {a: z for a, z in poly.points}
    anchor = cusp_anchor(w)
    assert anchor in index
    conj = rep.rho(w) @ rep.rho("ABab") @ np.linalg.inv(rep.rho(w))
    assert abs(abs(np.trace(conj)) - 2) < 1e-6
    kfix = complex(parabolic_fixed_point(rep.rho("ABab"))[0]) / complex(
        parabolic_fixed_point(rep.rho("ABab"))[1])
    assert _chordal(index[anchor], _mobius(rep.rho(w), kfix)) < 1e-6


def test_fuchsian_outputs_lie_on_circle():
    assert circle_residual(ct_polyline(FUCHS, 10)) < 1e-8
    for g in (make_fricke(3, 4), make_fricke(5.5, 7.25)):
        assert circle_residual(ct_polyline(fuchsian_matrices(g), 8)) < 1e-8


def test_degenerate_output_is_not_circular():
    assert circle_residual(ct_polyline(solved("R L")[2], 8)) > 1e-2


def test_determinism_and_threads():
    rep = solved("R^2 L")[2]
    a = ct_polyline(rep, 8, threads=1)
    b = ct_polyline(rep, 8, threads=4)
    for field in ("anchor_num", "anchor_den", "image_num", "image_den"):
        assert np.array_equal(getattr(a, field), getattr(b, field))


def test_coverage_monotone_and_locked():
    rep = solved("R L")[2]
    vals = [coverage(ct_polyline(rep, d), 50) for d in (4, 6, 8, 10)]
    assert all(x <= y for x, y in zip(vals, vals[1:]))
    assert vals[2] == regression()["rl_coverage_grid50"]["8"]
    assert vals[3] == regression()["rl_coverage_grid50"]["10"]
    with pytest.raises(DomainError):
        coverage(ct_polyline(rep, 3), 1)


def _three_points():
    return CTPolyline(1, np.array([0, 1, 1]), np.array([1, 1, 0]),
                      np.array([0j, 1 + 0j, 1j]), np.array([1 + 0j, 1 + 0j, 1 + 0j]))


def test_svg_structure():
    svg = render_svg(_three_points()).decode()
    assert svg.count("<polyline") == 1
    pts = re.search(r'points="([^"]*)"', svg).group(1).split()
    assert len(pts) == 3
    assert 'viewBox="' in svg
    assert 'stroke-width="0.01"' in render_svg(_three_points(), stroke_width=0.01).decode()


def test_projection_error_at_pole():
    poly = CTPolyline(1, np.array([1]), np.array([0]), np.array([1 + 0j]), np.array([0j]))
    with pytest.raises(ProjectionError):
        render_svg(poly)


def test_svg_is_byte_identical():
    rep = solved("R^4 L")[2]
    proj = cusp_projection(rep)
    assert render_svg(ct_polyline(rep, 7), proj) == render_svg(ct_polyline(rep, 7), proj)


@pytest.mark.parametrize("word, depth", [("R L", 10), ("R^4 L", 8)])
def test_raster_hash_regression(word, depth):
    rep = solved(word)[2]
    poly = ct_polyline(rep, depth)
    key = f"{word} depth {depth}"
    assert raster_hash(poly, cusp_projection(rep)) == regression()["raster_hash"][key]


def test_csv_dump():
    poly = ct_polyline(FUCHS, 3)
    lines = to_csv(poly).splitlines()
    assert lines[0] == "anchor,re,im"
    assert len(lines) == len(poly) + 1


def test_projection_clip():
    z = Projection(clip=1.0).apply(np.array([0.5 + 0j, 3 + 0j]), np.array([1 + 0j, 1 + 0j]))
    assert z.tolist() == [0.5 + 0j]
