import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import regression, solved
from ptorus.bundle import layered_triangulation
from ptorus.dilog import bloch_wigner
from ptorus.errors import SolverError, ToleranceError
from ptorus.geometry import shape_parameters, solve_shapes, volume
from ptorus.mapping_class import RLForm
from ptorus.oracles import dilog_oracle

V_REG = 1.0149416064096536  # regular ideal tetrahedron
SHORT_WORDS = ["R L", "R^2 L", "R^4 L", "R^2 L^2", "R^3 L^2", "R^2 L R L", "R^2 L^3 R L"]


def test_figure_eight_shapes_exact():
    _, sol, _ = solved("R L")
    target = complex(0.5, math.sqrt(3) / 2)
    assert np.abs(sol.shapes - target).max() < 1e-10
    assert sol.residual < 1e-12
    assert volume(sol.shapes) == pytest.approx(2.0298832128, abs=1e-9)


def test_regular_tetrahedron_volume():
    assert bloch_wigner(cmath.exp(1j * math.pi / 3)) == pytest.approx(V_REG, abs=1e-14)


@pytest.mark.parametrize("word", SHORT_WORDS)
def test_solutions_positive_and_consistent(word):
    tb, sol, _ = solved(word)
    assert sol.positively_oriented
    assert sol.residual < 1e-10
    z, zp, zpp = shape_parameters(sol.shapes)
    logs = np.column_stack([np.log(z), np.log(zp), np.log(zpp)]).ravel()
    for row, rhs in zip(tb.equations.edge_rows, tb.equations.edge_rhs):
        val = np.dot(row, logs)
        assert abs(val - rhs * math.pi * 1j) < 1e-10
        assert abs(np.prod([v ** e for v, e in zip(np.ravel(np.column_stack([z, zp, zpp])), row)])
                   - 1) < 1e-10
    # every tetrahedron's angles sum to pi
    assert np.allclose(np.angle(z) + np.angle(zp) + np.angle(zpp), math.pi, atol=1e-12)


@pytest.mark.parametrize("word", list(regression()["volumes"]))
def test_volume_regression(word):
    _, sol, _ = solved(word)
    assert volume(sol.shapes) == pytest.approx(regression()["volumes"][word], abs=1e-9)


@pytest.mark.parametrize("word", SHORT_WORDS)
def test_volume_bounds(word):
    tb, sol, _ = solved(word)
    vol = volume(sol.shapes)
    assert 0 < vol <= V_REG * tb.n + 1e-12
    if word != "R L":
        assert vol < V_REG * tb.n - 1e-6


@pytest.mark.parametrize("blocks", [(4, 1), (2, 3, 1, 1), (3, 1, 2, 2)])
def test_reversed_word_same_volume(blocks):
    fwd = solve_shapes(layered_triangulation(RLForm(1, blocks)))
    rev_blocks = tuple(reversed(blocks))
    # reversing the letter string swaps the roles of R and L; rotate back to R first
    rev = solve_shapes(layered_triangulation(RLForm(1, rev_blocks[1:] + rev_blocks[:1])))
    assert volume(fwd.shapes) == pytest.approx(volume(rev.shapes), abs=1e-9)


def test_perturbed_start_same_solution():
    tb = layered_triangulation(RLForm(1, (4, 1)))
    a = solve_shapes(tb)
    b = solve_shapes(tb, initial=0.4 + 0.9j)
    assert np.abs(a.shapes - b.shapes).max() < 1e-9


def test_newton_determinism():
    tb = layered_triangulation(RLForm(1, (2, 3, 1, 1)))
    a, b = solve_shapes(tb), solve_shapes(tb)
    assert a.iterations == b.iterations
    assert np.array_equal(a.shapes, b.shapes)


def test_solver_errors_are_reported():
    tb = layered_triangulation(RLForm(1, (4, 1)))
    with pytest.raises(ToleranceError) as exc:
        solve_shapes(tb, max_iter=1, starts=0, initial=3.0 + 0.01j)
    assert exc.value.trace
    assert issubclass(ToleranceError, SolverError)


def test_dilog_oracle_against_mpmath():
    res = dilog_oracle(200)
    assert res.passed, res.table()


@given(st.complex_numbers(max_magnitude=50, allow_nan=False, allow_infinity=False))
@settings(max_examples=200)
def test_bloch_wigner_symmetries(z):
    if abs(z) < 1e-6 or abs(z - 1) < 1e-6:
        return
    d = bloch_wigner(z)
    scale = max(1.0, abs(d))
    assert bloch_wigner(1 - z) == pytest.approx(-d, abs=1e-12 * scale)
    assert bloch_wigner(1 / z) == pytest.approx(-d, abs=1e-12 * scale)
    assert bloch_wigner(z.conjugate()) == pytest.approx(-d, abs=1e-12 * scale)
    assert abs(d) <= V_REG + 1e-12
    if z.imag > 0:
        assert d >= -1e-15
