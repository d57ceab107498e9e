"""The numba kernels and their numpy fallbacks must agree exactly."""

import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptorus import _kernels
from ptorus.lamination import intersection_number, lamination
from strategies import primitive_pairs

needs_numba = pytest.mark.skipif(_kernels.ENGINE != "numba", reason="numba not available")


def _frontier(seed, n):
    rng = np.random.default_rng(seed)
    mats = rng.integers(-50, 50, size=(n, 2, 2)).astype(np.int64)
    last = rng.integers(-1, 4, size=n).astype(np.int8)
    gens = rng.integers(-3, 4, size=(4, 2, 2)).astype(np.int64)
    return mats, last, gens


@needs_numba
@pytest.mark.parametrize("seed", range(5))
def test_extend_frontier_parity(seed):
    mats, last, gens = _frontier(seed, 200)
    a, la = _kernels.extend_frontier(mats, last, gens)
    b, lb = _kernels.extend_frontier_numpy(mats, last, gens)
    assert np.array_equal(a, b) and np.array_equal(la, lb)
    c, lc = _kernels.extend_frontier(mats.astype(complex), last, gens.astype(complex))
    d, ld = _kernels.extend_frontier_numpy(mats.astype(complex), last, gens.astype(complex))
    assert np.array_equal(c, d) and np.array_equal(lc, ld)


def test_extend_frontier_skips_inverse():
    mats = np.eye(2, dtype=np.int64)[None]
    out, last = _kernels.extend_frontier_numpy(mats, np.array([0], dtype=np.int8),
                                               np.stack([np.eye(2, dtype=np.int64)] * 4))
    assert last.tolist() == [0, 1, 3]
    out, last = _kernels.extend_frontier_numpy(mats, np.array([-1], dtype=np.int8),
                                               np.stack([np.eye(2, dtype=np.int64)] * 4))
    assert last.tolist() == [0, 1, 2, 3]


@needs_numba
@pytest.mark.parametrize("grid", [2, 7, 50])
def test_bin_sphere_parity(grid):
    rng = np.random.default_rng(grid)
    num = rng.normal(size=5000) + 1j * rng.normal(size=5000)
    den = np.ones(5000, dtype=complex)
    den[:10] = 0
    pts = _kernels.sphere_points(num, den)
    assert np.array_equal(_kernels.bin_sphere(pts, grid), _kernels.bin_sphere_numpy(pts, grid))


def test_sphere_points_unit_norm():
    num = np.array([0j, 1 + 1j, 1 + 0j, 3j])
    den = np.array([1 + 0j, 2 + 0j, 0j, 1 + 0j])
    pts = _kernels.sphere_points(num, den)
    assert np.allclose(np.linalg.norm(pts, axis=1), 1)
    assert np.allclose(pts[2], [0, 0, 1])
    assert np.allclose(pts[0], [0, 0, -1])


def test_equal_area_bins():
    # uniform points on the sphere fill cells evenly
    rng = np.random.default_rng(0)
    v = rng.normal(size=(200000, 3))
    v /= np.linalg.norm(v, axis=1)[:, None]
    counts = np.bincount(_kernels.bin_sphere_numpy(v, 10), minlength=100)
    assert counts.min() > 0.8 * counts.mean() and counts.max() < 1.2 * counts.mean()


@given(primitive_pairs(10), primitive_pairs(10))
@settings(max_examples=200)
def test_crossing_count_parity(u, v):
    expected = int(intersection_number(lamination(*u), lamination(*v)))
    assert _kernels.crossing_count_numpy(u, v) == expected
    assert _kernels.crossing_count(u, v) == expected


def test_env_flag_selects_numpy():
    env = dict(os.environ, PTORUS_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "from ptorus import _kernels; print(_kernels.ENGINE)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_numpy_engine_reproduces_raster_hash(tmp_path):
    code = (
        "import json, sys; sys.path.insert(0, 'tests'); from conftest import solved, regression;"
        "from ptorus import _kernels; from ptorus.limitset import *;"
        "rep = solved('R L')[2]; p = ct_polyline(rep, 10);"
        "print(_kernels.ENGINE, raster_hash(p, cusp_projection(rep)), coverage(p, 50))"
    )
    env = dict(os.environ, PTORUS_NO_NUMBA="1")
    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True, cwd=root)
    engine, digest, cov = out.stdout.split()
    from conftest import regression

    assert engine == "numpy"
    assert digest == regression()["raster_hash"]["R L depth 10"]
    assert float(cov) == regression()["rl_coverage_grid50"]["10"]
