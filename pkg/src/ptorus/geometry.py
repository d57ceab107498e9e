"""Complete hyperbolic structures on layered punctured-torus bundles."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .bundle import GluingSystem, TriangulatedBundle
from .dilog import bloch_wigner
from .errors import SolverError, ToleranceError

__all__ = [
    "ShapeSolution",
    "shape_parameters",
    "solve_shapes",
    "volume",
]

TOL = 1e-12
MAX_ITER = 100


def shape_parameters(z):
    """``(z, z', z'')`` with ``z' = 1/(1-z)`` and ``z'' = 1 - 1/z``, vectorised."""
    z = np.asarray(z, dtype=complex)
    return z, 1 / (1 - z), 1 - 1 / z


def _logs(z):
    z0, z1, z2 = shape_parameters(z)
    out = np.empty(3 * z.size, dtype=complex)
    out[0::3], out[1::3], out[2::3] = np.log(z0), np.log(z1), np.log(z2)
    return out


def _dlogs(z):
    """Derivatives of the three logs with respect to ``log z``."""
    out = np.empty(3 * z.size, dtype=complex)
    out[0::3] = 1.0
    out[1::3] = z / (1 - z)
    out[2::3] = 1 / (z - 1)
    return out


def _residual(A, rhs, z):
    return A @ _logs(z) - 1j * math.pi * rhs


def _jacobian(A, z):
    n = z.size
    d = _dlogs(z)
    J = np.zeros((A.shape[0], n), dtype=complex)
    for k in range(n):
        J[:, k] = A[:, 3 * k : 3 * k + 3] @ d[3 * k : 3 * k + 3]
    return J


@dataclass(frozen=True)
class ShapeSolution:
    shapes: np.ndarray
    residual: float
    iterations: int

    @property
    def positively_oriented(self) -> bool:
        return bool(np.all(self.shapes.imag > 0))


def _newton(A, rhs, z0, tol, max_iter):
    w = np.log(z0)
    z = z0
    r = _residual(A, rhs, z)
    norm = np.linalg.norm(r)
    for it in range(1, max_iter + 1):
        if norm < tol:
            return z, norm, it - 1
        J = _jacobian(A, z)
        step = np.linalg.lstsq(J, -r, rcond=None)[0]
        t = 1.0
        # damped step; also refuse to cross the real axis by too much
        while t > 1e-6:
            wn = w + t * step
            zn = np.exp(wn)
            rn = _residual(A, rhs, zn)
            nn = np.linalg.norm(rn)
            if np.isfinite(nn) and nn < norm * (1 - 1e-4 * t) or nn < tol:
                break
            t *= 0.5
        else:
            return z, norm, it
        w, z, r, norm = wn, zn, rn, nn
    return z, norm, max_iter


def solve_shapes(
    tb: TriangulatedBundle,
    tol: float = TOL,
    max_iter: int = MAX_ITER,
    starts: int = 16,
    seed: int = 0,
    initial=None,
) -> ShapeSolution:
    """Solve edge and completeness equations by damped Newton in ``log z``.

    Starts from ``initial`` (default the regular ideal shape); on failure
    retries from random upper-half-plane points.  Raises ``SolverError`` when no start reaches
    ``tol`` with every shape positively oriented.
    """
    rows, rhs = tb.equations.solver_rows()
    A = np.array(rows, dtype=float)
    b = np.array(rhs, dtype=float)
    n = tb.n
    rng = np.random.default_rng(seed)
    z0 = cmath.exp(1j * math.pi / 3) if initial is None else initial
    inits = [np.broadcast_to(np.asarray(z0, dtype=complex), (n,)).copy()]
    for _ in range(starts):
        inits.append(rng.uniform(-1, 2, n) + 1j * rng.uniform(0.2, 2, n))
    best = None
    for z0 in inits:
        z, norm, it = _newton(A, b, z0, tol, max_iter)
        if norm < tol and np.all(z.imag > 0):
            return ShapeSolution(z, float(norm), it)
        if best is None or norm < best[1]:
            best = (z, norm)
    if best is not None and best[1] < tol:
        raise SolverError("solver converged to a degenerate or negatively oriented solution",
                          trace=[float(best[1])])
    raise ToleranceError(f"residual {best[1]:.3e} above tolerance {tol:.1e}",
                         trace=[float(best[1])])


def volume(shapes) -> float:
    return float(sum(bloch_wigner(complex(z)) for z in np.atleast_1d(shapes)))
