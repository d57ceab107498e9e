"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5] [--depth 12]

Each kernel is checked for identical output before timing.  The end-to-end
row runs ``ct_polyline`` at the given depth in a subprocess per engine, since
the engine is fixed at import time by ``PTORUS_NO_NUMBA``.
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from ptorus import _kernels


def best_of(fn, repeat):
    fn()  # warm up (and jit-compile)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def frontier_case(n):
    rng = np.random.default_rng(0)
    mats = rng.normal(size=(n, 2, 2)) + 1j * rng.normal(size=(n, 2, 2))
    last = rng.integers(0, 4, size=n).astype(np.int8)
    gens = rng.normal(size=(4, 2, 2)) + 1j * rng.normal(size=(4, 2, 2))
    return mats, last, gens


def sphere_case(n):
    rng = np.random.default_rng(1)
    num = rng.normal(size=n) + 1j * rng.normal(size=n)
    return _kernels.sphere_points(num, np.ones(n, dtype=complex))


_END_TO_END = """
import json, time
from ptorus import _kernels
from ptorus.bundle import layered_triangulation, trichotomy
from ptorus.geometry import solve_shapes
from ptorus.holonomy import holonomy
from ptorus.limitset import coverage, ct_polyline
from ptorus.mapping_class import parse_word
tb = layered_triangulation(trichotomy(parse_word("R L")).rl)
rep = holonomy(solve_shapes(tb), tb)
ct_polyline(rep, 4)
t0 = time.perf_counter()
poly = ct_polyline(rep, {depth})
cov = coverage(poly, 50)
print(json.dumps({{"engine": _kernels.ENGINE, "seconds": time.perf_counter() - t0,
                  "points": len(poly), "coverage": cov}}))
"""


def end_to_end(depth, disable):
    env = dict(os.environ)
    if disable:
        env["PTORUS_NO_NUMBA"] = "1"
    else:
        env.pop("PTORUS_NO_NUMBA", None)
    out = subprocess.run([sys.executable, "-c", _END_TO_END.format(depth=depth)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--depth", type=int, default=12)
    ap.add_argument("--size", type=int, default=300_000)
    args = ap.parse_args()

    if _kernels.ENGINE != "numba":
        print("numba unavailable (or PTORUS_NO_NUMBA set); only the numpy rows are timed")

    rows = []
    mats, last, gens = frontier_case(args.size)
    pts = sphere_case(args.size)
    cases = [
        ("extend_frontier", lambda: _kernels.extend_frontier(mats, last, gens),
         lambda: _kernels.extend_frontier_numpy(mats, last, gens)),
        ("bin_sphere", lambda: _kernels.bin_sphere(pts, 50),
         lambda: _kernels.bin_sphere_numpy(pts, 50)),
        ("crossing_count", lambda: [_kernels.crossing_count((a, 7), (3, -5)) for a in range(1, 60)],
         lambda: [_kernels.crossing_count_numpy((a, 7), (3, -5)) for a in range(1, 60)]),
    ]
    for name, fast, slow in cases:
        a, b = fast(), slow()
        same = all(np.array_equal(x, y) for x, y in zip(a, b)) if isinstance(a, tuple) \
            else np.array_equal(np.asarray(a), np.asarray(b))
        t_fast = best_of(fast, args.repeat) if _kernels.ENGINE == "numba" else float("nan")
        t_slow = best_of(slow, args.repeat)
        rows.append((name, t_fast, t_slow, same))

    print(f"{'kernel':<18}{'numba s':>12}{'numpy s':>12}{'speedup':>10}  identical")
    for name, tf, ts, same in rows:
        print(f"{name:<18}{tf:>12.5f}{ts:>12.5f}{ts / tf:>10.2f}  {same}")

    print(f"\nct_polyline depth {args.depth}, R L rep")
    for disable in (False, True):
        r = end_to_end(args.depth, disable)
        print(f"  {r['engine']:<6} {r['seconds']:.3f}s  {r['points']} points  "
              f"coverage {r['coverage']}")


if __name__ == "__main__":
    main()
