import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ziglin3 import dynamics
from ziglin3.errors import CollisionError
from ziglin3.masses import MassTriple
from ziglin3.states import FullState, ReducedState

EQUILATERAL_FULL = FullState(
    (0.0, 0.0, 1.0, 0.0, 0.5, math.sqrt(3) / 2), (0.0,) * 6)


def test_full_energy_unit_triangle_at_rest():
    m = MassTriple(1, 1, 1)
    assert dynamics.hamiltonian_full(EQUILATERAL_FULL, m) == pytest.approx(-3.0)


def test_full_energy_independent_arithmetic():
    # direct evaluation of the displayed formula, written out separately
    m = MassTriple(1, 2, 3)
    s = FullState((0, 0, 1, 0, 0, 1), (1, 0, 0, 1, -1, -1))
    kinetic = (1 ** 2 + 0) / (2 * 1) + (0 + 1 ** 2) / (2 * 2) + (1 + 1) / (2 * 3)
    d12, d13, d23 = 1.0, 1.0, math.sqrt(2.0)
    potential = -(1 * 2) / d12 - (1 * 3) / d13 - (2 * 3) / d23
    expected = kinetic + potential
    assert expected == pytest.approx(13 / 12 - 5 - 3 * math.sqrt(2))
    assert dynamics.hamiltonian_full(s, m) == pytest.approx(expected, rel=1e-14)


@given(st.floats(min_value=-3, max_value=3))
def test_kinetic_scaling(scale):
    m = MassTriple(1, 2, 3)
    x = (0.0, 0.0, 1.1, 0.2, -0.4, 0.9)
    y = (0.3, -0.2, 0.5, 0.1, -0.7, 0.4)
    base = dynamics.hamiltonian_full(FullState(x, (0.0,) * 6), m)
    scaled = dynamics.hamiltonian_full(
        FullState(x, tuple(scale * v for v in y)), m)
    unscaled = dynamics.hamiltonian_full(FullState(x, y), m)
    kinetic = unscaled - base
    assert scaled - base == pytest.approx(scale ** 2 * kinetic, abs=1e-9)


def test_collision_error_names_pair():
    m = MassTriple(1, 1, 1)
    s = FullState((0, 0, 0, 0, 1, 0), (0,) * 6)
    with pytest.raises(CollisionError) as err:
        dynamics.hamiltonian_full(s, m)
    assert "P1-P2" in str(err.value)


def test_reduced_energy_equilateral():
    m = MassTriple(1, 1, 1)
    s = ReducedState(1.0, 0.5, math.sqrt(3) / 2, 0, 0, 0, k=0.0)
    assert dynamics.hamiltonian_reduced(s, m) == pytest.approx(-3.0)


def test_reduced_energy_with_area_constant():
    # same configuration, k nonzero: H = -3 + (M1/2) k^2 by substitution
    m = MassTriple(1, 1, 1)
    k = 0.7
    s = ReducedState(1.0, 0.5, math.sqrt(3) / 2, 0, 0, 0, k=k)
    M1 = (m.m1 + m.m3) / (m.m1 * m.m3)
    assert dynamics.hamiltonian_reduced(s, m) == pytest.approx(
        -3.0 + 0.5 * M1 * k ** 2)


@given(st.floats(0.5, 2.0), st.floats(-0.4, 0.4), st.floats(0.5, 1.5))
def test_reduced_rest_energy_is_potential(q1, q2, q3):
    m = MassTriple(1.3, 0.7, 2.1)
    s = ReducedState(q1, q2, q3, 0, 0, 0, k=0.0)
    r1, r2, r3 = s.distances()
    expected = -(m.m1 * m.m3 / r1 + m.m2 * m.m3 / r2 + m.m1 * m.m2 / r3)
    assert dynamics.hamiltonian_reduced(s, m) == pytest.approx(expected)


def test_gradient_matches_finite_differences():
    m = MassTriple(1, 2, 3)
    z = np.array([1.1, 0.3, 0.9, 0.2, -0.1, 0.4])
    k = 0.3
    grad = dynamics.reduced_gradient(z, k, m)
    fd = dynamics.central_gradient(
        lambda v: dynamics.reduced_energy(v, k, m), z)
    assert np.allclose(grad, fd, rtol=1e-8, atol=1e-8)


def test_hessian_matches_finite_differences():
    m = MassTriple(0.5, 1.5, 2.5)
    z = np.array([0.9, 0.4, 1.1, -0.3, 0.25, 0.6])
    k = -0.4
    hess = dynamics.reduced_hessian(z, k, m)
    fd = dynamics.central_jacobian(
        lambda v: dynamics.reduced_gradient(v, k, m), z)
    scale = max(1.0, np.max(np.abs(hess)))
    assert np.max(np.abs(hess - fd)) / scale < 1e-6


def test_full_field_matches_finite_differences():
    m = MassTriple(1, 2, 3)
    z = np.array([0.0, 0.0, 1.3, 0.1, -0.2, 1.0, 0.1, 0.2, -0.3, 0.4, 0.5, -0.6])
    field = dynamics.full_vector_field(z, m)
    grad = dynamics.central_gradient(lambda v: dynamics.full_energy(v, m), z)
    J = np.block([[np.zeros((6, 6)), np.eye(6)],
                  [-np.eye(6), np.zeros((6, 6))]])
    assert np.allclose(field, J @ grad, rtol=1e-6, atol=1e-7)


def test_momenta_zero_kills_velocities_at_zero_k():
    m = MassTriple(1, 2, 3)
    s = ReducedState(1.0, 0.4, 0.8, 0, 0, 0, k=0.0)
    field = dynamics.vector_field_reduced(s, m)
    assert np.allclose(field[:3], 0.0, atol=1e-14)


def test_first_integrals_momentum_sums():
    m = MassTriple(1, 1, 1)
    s = FullState((0, 0, 1, 0, 0, 1), (1, 0, -1, 0, 0, 0))
    _, f2, f3, f4 = dynamics.first_integrals_full(s, m)
    assert f2 == 0.0
    assert f3 == 0.0
    s0 = FullState((0.4, 0.1, 1, 0, 0, 1), (0,) * 6)
    _, f2, f3, f4 = dynamics.first_integrals_full(s0, m)
    assert (f2, f3, f4) == (0.0, 0.0, 0.0)


def _random_rotation(rng):
    a = rng.uniform(0, 2 * np.pi)
    return np.array([[np.cos(a), -np.sin(a)], [np.sin(a), np.cos(a)]])


def test_full_energy_euclidean_invariance(rng):
    m = MassTriple(1.2, 0.8, 2.0)
    x = np.array([0.0, 0.0, 1.3, 0.1, -0.2, 1.0])
    y = np.array([0.1, 0.2, -0.3, 0.4, 0.5, -0.6])
    base = dynamics.full_energy(np.concatenate([x, y]), m)
    for _ in range(5):
        R = _random_rotation(rng)
        shift = rng.normal(size=2)
        x2 = np.concatenate([R @ x[i:i + 2] + shift for i in (0, 2, 4)])
        y2 = np.concatenate([R @ y[i:i + 2] for i in (0, 2, 4)])
        val = dynamics.full_energy(np.concatenate([x2, y2]), m)
        assert val == pytest.approx(base, abs=1e-12)


def test_lift_preserves_energy_and_area():
    m = MassTriple(1.4, 0.9, 1.7)
    s = ReducedState(1.2, 0.3, 0.8, 0.15, -0.2, 0.35, k=-0.6)
    full = dynamics.lift_reduced_state(s, m)
    h_red = dynamics.hamiltonian_reduced(s, m)
    h_full = dynamics.hamiltonian_full(full, m)
    assert h_full == pytest.approx(h_red, rel=1e-12)
    f1, f2, f3, f4 = dynamics.first_integrals_full(full, m)
    assert f2 == pytest.approx(0.0, abs=1e-12)
    assert f3 == pytest.approx(0.0, abs=1e-12)
    # the area integral of the lift is -k in this sign convention
    assert f4 == pytest.approx(-s.k, rel=1e-12)
