"""Trajectory integration for both charts.

The workhorse is an adaptive 8th-order Runge-Kutta (DOP853) with dense
output and collision guards.  A fixed-step leapfrog is provided for the
full chart as a long-horizon conservation demo; the reduced Hamiltonian
is not separable, so leapfrog is full-chart only.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import solve_ivp

from .dynamics import (
    COLLISION_THRESHOLD,
    full_vector_field,
    reduced_vector_field,
)
from .errors import CollisionError, StepSizeError, Ziglin3Error
from .masses import MassTriple
from .states import FullState, ReducedState, Trajectory


def _full_min_distance(z):
    x = z[:6]
    d12 = np.hypot(x[0] - x[2], x[1] - x[3])
    d13 = np.hypot(x[0] - x[4], x[1] - x[5])
    d23 = np.hypot(x[2] - x[4], x[3] - x[5])
    return min(d12, d13, d23)


def _reduced_min_distance(z):
    r1 = abs(z[0])
    r2 = np.hypot(z[1], z[2])
    r3 = np.hypot(z[0] - z[1], z[2])
    return min(r1, r2, r3)


def integrate(state, m: MassTriple, t_span, tol=1e-12,
              collision_threshold=None, max_points=None) -> Trajectory:
    """Integrate a FullState or ReducedState over t_span = (t0, t1).

    Local error is controlled at `tol`.  If any mutual distance falls
    below the collision threshold the run stops early and the trajectory
    records the reason in its metadata.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    thr = COLLISION_THRESHOLD if collision_threshold is None else collision_threshold

    if isinstance(state, FullState):
        kind = "full"
        k = 0.0
        rhs = lambda t, z: full_vector_field(z, m)
        mindist = _full_min_distance
    elif isinstance(state, ReducedState):
        kind = "reduced"
        k = state.k
        rhs = lambda t, z: reduced_vector_field(z, k, m)
        mindist = _reduced_min_distance
    else:
        raise TypeError(f"cannot integrate {type(state).__name__}")

    z0 = state.as_array()
    if mindist(z0) < thr:
        raise CollisionError("initial state", float(mindist(z0)))

    t0, t1 = float(t_span[0]), float(t_span[1])
    if t0 == t1:
        return Trajectory(np.array([t0]), z0[None, :], kind, k,
                          meta={"tol": tol, "nfev": 0, "status": "zero-span"})

    def collision_event(t, z):
        return mindist(z) - thr
    collision_event.terminal = True
    collision_event.direction = -1

    sol = solve_ivp(rhs, (t0, t1), z0, method="DOP853", rtol=tol,
                    atol=tol * 1e-2, dense_output=True,
                    events=[collision_event], max_step=np.inf)
    if sol.status == -1:
        raise StepSizeError(f"integrator failed: {sol.message}")

    meta = {
        "tol": tol,
        "nfev": int(sol.nfev),
        "n_steps": int(sol.t.size),
        "status": "ok" if sol.status == 0 else "collision-stop",
    }
    if sol.status == 1:
        meta["stop_reason"] = (
            f"mutual distance reached threshold {thr:g} at t={sol.t[-1]:.6g}")

    ts, zs = sol.t, sol.y.T
    if max_points is not None and ts.size > max_points:
        tsamp = np.linspace(ts[0], ts[-1], max_points)
        zs = sol.sol(tsamp).T
        ts = tsamp
    return Trajectory(ts, zs, kind, k, meta=meta)


def integrate_full_leapfrog(state: FullState, m: MassTriple, t_span,
                            dt=1e-3) -> Trajectory:
    """Fixed-step leapfrog (kick-drift-kick) for the separable full chart."""
    t0, t1 = float(t_span[0]), float(t_span[1])
    n = max(1, int(round((t1 - t0) / dt)))
    dt = (t1 - t0) / n
    z = state.as_array().copy()
    masses = np.repeat([m.m1, m.m2, m.m3], 2)
    ts = np.empty(n + 1)
    zs = np.empty((n + 1, 12))
    ts[0], zs[0] = t0, z

    def forces(x):
        return full_vector_field(np.concatenate([x, np.zeros(6)]), m)[6:]

    f = forces(z[:6])
    for i in range(n):
        z[6:] += 0.5 * dt * f
        z[:6] += dt * z[6:] / masses
        f = forces(z[:6])
        z[6:] += 0.5 * dt * f
        ts[i + 1] = t0 + (i + 1) * dt
        zs[i + 1] = z
    return Trajectory(ts, zs, "full", 0.0,
                      meta={"method": "leapfrog", "dt": dt, "n_steps": n})


def relative_drift(values):
    """Max relative drift of a sampled conserved quantity."""
    values = np.asarray(values, dtype=float)
    scale = max(1.0, float(np.max(np.abs(values))))
    return float((values.max() - values.min()) / scale)
