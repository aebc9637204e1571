import math

import numpy as np
import pytest

from ziglin3 import dynamics
from ziglin3.integrate import integrate, integrate_full_leapfrog, relative_drift
from ziglin3.masses import MassTriple
from ziglin3.orbit import solve_parametrization
from ziglin3.states import FullState, ReducedState


def hierarchical_state(rng, m: MassTriple) -> FullState:
    """Binary (bodies 1, 2) on a near-circular orbit plus a distant third
    body; stays bounded and collision-free over the test horizon."""
    mu12 = m.m1 + m.m2
    sep = 1.0 + 0.1 * rng.uniform(-1, 1)
    phase = rng.uniform(0, 2 * np.pi)
    ux = np.array([np.cos(phase), np.sin(phase)])
    uy = np.array([-np.sin(phase), np.cos(phase)])
    r1 = -m.m2 / mu12 * sep * ux
    r2 = m.m1 / mu12 * sep * ux
    vorb = math.sqrt(mu12 / sep)
    v1 = -m.m2 / mu12 * vorb * uy
    v2 = m.m1 / mu12 * vorb * uy

    r_out = 8.0 + rng.uniform(0, 2)
    phase3 = rng.uniform(0, 2 * np.pi)
    wx = np.array([np.cos(phase3), np.sin(phase3)])
    wy = np.array([-np.sin(phase3), np.cos(phase3)])
    mtot = m.s1
    r3 = r_out * wx * (mu12 / mtot)
    v3 = math.sqrt(mtot / r_out) * wy * (mu12 / mtot)
    shift1 = -m.m3 / mtot * r_out * wx
    shiftv1 = -m.m3 / mtot * math.sqrt(mtot / r_out) * wy
    x = np.concatenate([r1 + shift1, r2 + shift1, r3])
    v = np.concatenate([v1 + shiftv1, v2 + shiftv1, v3])
    y = v * np.repeat([m.m1, m.m2, m.m3], 2)
    return FullState(tuple(x), tuple(y))


def test_zero_span_returns_initial_state():
    m = MassTriple(1, 1, 1)
    s = FullState((0, 0, 1, 0, 0, 1), (0,) * 6)
    traj = integrate(s, m, (0.0, 0.0))
    assert traj.t.shape == (1,)
    assert np.allclose(traj.states[0], s.as_array())


def test_conservation_along_trajectory(rng):
    m = MassTriple(1.0, 0.8, 1.3)
    s = hierarchical_state(rng, m)
    traj = integrate(s, m, (0.0, 10.0), tol=1e-12, max_points=200)
    vals = np.array([dynamics.first_integrals_full(traj.state(i), m)
                     for i in range(traj.t.size)])
    for col in range(4):
        assert relative_drift(vals[:, col]) < 1e-9


def test_lagrange_initial_condition_keeps_ratios():
    m = MassTriple(1, 2, 3)
    param = solve_parametrization(m)
    w0 = 0.4
    z0 = param.state(w0).real
    s0 = ReducedState.from_array(z0, k=param.k)
    t1 = param.time_map(1.6) - param.time_map(w0)
    traj = integrate(s0, m, (0.0, float(t1.real)), tol=1e-12, max_points=50)
    for i in range(traj.t.size):
        row = traj.states[i]
        assert abs(row[1] / row[0] - 0.5) < 1e-8
        assert abs(row[2] / row[0] - math.sqrt(3) / 2) < 1e-8


def test_reduced_energy_drift(rng):
    m = MassTriple(1, 2, 3)
    param = solve_parametrization(m)
    z0 = param.state(0.3).real
    s0 = ReducedState.from_array(z0 * 1.01, k=param.k)
    traj = integrate(s0, m, (0.0, 5.0), tol=1e-12, max_points=100)
    vals = [dynamics.reduced_energy(traj.states[i], param.k, m)
            for i in range(traj.t.size)]
    assert relative_drift(np.array(vals)) < 1e-9


def test_collision_stops_early():
    m = MassTriple(1, 1, 1)
    # two bodies aimed at each other
    s = FullState((-0.5, 0, 0.5, 0, 0, 5.0), (1.0, 0, -1.0, 0, 0, 0))
    traj = integrate(s, m, (0.0, 10.0), tol=1e-10, collision_threshold=1e-3)
    assert traj.meta["status"] == "collision-stop"
    assert "stop_reason" in traj.meta


def test_leapfrog_long_horizon_energy(rng):
    m = MassTriple(1.0, 0.8, 1.3)
    s = hierarchical_state(rng, m)
    traj = integrate_full_leapfrog(s, m, (0.0, 20.0), dt=2e-3)
    vals = [dynamics.full_energy(traj.states[i], m)
            for i in range(0, traj.t.size, 100)]
    assert relative_drift(np.array(vals)) < 1e-5


def test_bad_tolerance_rejected():
    m = MassTriple(1, 1, 1)
    s = FullState((0, 0, 1, 0, 0, 1), (0,) * 6)
    with pytest.raises(ValueError):
        integrate(s, m, (0.0, 1.0), tol=-1.0)
