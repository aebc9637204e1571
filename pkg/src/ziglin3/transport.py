"""Analytic continuation of fundamental matrices along paths."""

from __future__ import annotations

import numpy as np
from scipy.integrate import solve_ivp

from .errors import ClearanceError, StepSizeError
from .loops import LoopPath, path_clearance, DEFAULT_CLEARANCE_FACTOR


def transport_matrix(matfun, n, waypoints, tol=1e-12):
    """Continue X' = M(tau) X with X = I along a polyline; returns X(end)."""
    X = np.eye(n, dtype=complex)
    for a, b in zip(waypoints[:-1], waypoints[1:]):
        d = b - a
        if d == 0:
            continue

        def rhs(s, y):
            M = matfun(a + s * d)
            return (d * (M @ y.reshape(n, n))).ravel()

        sol = solve_ivp(rhs, (0.0, 1.0), X.ravel(), method="DOP853",
                        rtol=tol, atol=tol * 1e-2)
        if not sol.success:
            raise StepSizeError(f"transport failed on segment {a} -> {b}: "
                                f"{sol.message}")
        X = sol.y[:, -1].reshape(n, n)
    return X


def transport(fs, path: LoopPath, tol=1e-12):
    """Monodromy-style transport of the Fuchsian system along a loop.

    The clearance requirement (a fixed fraction of the smallest pairwise
    singularity distance) is enforced before integrating.
    """
    points = list(fs.points)
    min_pair = min(abs(p - q) for i, p in enumerate(points)
                   for q in points[i + 1:])
    required = DEFAULT_CLEARANCE_FACTOR * min_pair
    got = path_clearance(path.waypoints, points)
    if got < required:
        raise ClearanceError(
            f"loop clearance {got:.3e} below {required:.3e}")
    n = fs.A.shape[0]
    return transport_matrix(fs.coefficient, n, path.waypoints, tol=tol)
