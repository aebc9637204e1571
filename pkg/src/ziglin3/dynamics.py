"""Hamiltonians, vector fields, first integrals and exact derivatives.

Two charts are supported:

* the full 12-dimensional planar three-body system (positions and momenta
  of the three bodies), used for independent conservation testing, and
* the reduced 3-degree-of-freedom system obtained by fixing the centre of
  mass and eliminating the rotation with the area constant k; this is the
  primary object of the package.

The low-level reduced-chart routines (`reduced_energy`, `reduced_gradient`,
`reduced_hessian`) accept complex states.  They take an optional `r`
argument carrying the mutual distances: on the complexified Lagrange orbit
the distances are known analytically and the principal square root would
pick the wrong branch, so callers override them there.
"""

from __future__ import annotations

import numpy as np

from .errors import CollisionError
from .masses import MassTriple
from .states import FullState, ReducedState

COLLISION_THRESHOLD = 1e-10

# Symplectic structure of the reduced chart, d/dt (q, p) = J * grad H.
J6 = np.block([
    [np.zeros((3, 3)), np.eye(3)],
    [-np.eye(3), np.zeros((3, 3))],
])


def mass_coefficients(m: MassTriple) -> tuple[float, float]:
    """Kinetic coefficients (M1, M2) of the reduced Hamiltonian.

    Whittaker-style reduction relative to body 3: M1 pairs with the
    (q1, p1) block and the body-1/body-3 distance, M2 with (q2, q3).
    """
    M1 = (m.m1 + m.m3) / (m.m1 * m.m3)
    M2 = (m.m2 + m.m3) / (m.m2 * m.m3)
    return M1, M2


# ---------------------------------------------------------------------------
# Full chart
# ---------------------------------------------------------------------------

def _full_distances(x, check=True):
    d12 = np.sqrt((x[0] - x[2]) ** 2 + (x[1] - x[3]) ** 2)
    d13 = np.sqrt((x[0] - x[4]) ** 2 + (x[1] - x[5]) ** 2)
    d23 = np.sqrt((x[2] - x[4]) ** 2 + (x[3] - x[5]) ** 2)
    if check:
        for name, d in (("P1-P2", d12), ("P1-P3", d13), ("P2-P3", d23)):
            if abs(d) < COLLISION_THRESHOLD:
                raise CollisionError(name, float(abs(d)))
    return d12, d13, d23


def full_energy(z, m: MassTriple):
    """Energy of a raw full-chart state vector z = (x[0:6], y[0:6])."""
    x, y = z[:6], z[6:12]
    d12, d13, d23 = _full_distances(x)
    kinetic = (
        (y[0] ** 2 + y[1] ** 2) / (2.0 * m.m1)
        + (y[2] ** 2 + y[3] ** 2) / (2.0 * m.m2)
        + (y[4] ** 2 + y[5] ** 2) / (2.0 * m.m3)
    )
    potential = -(m.m1 * m.m2 / d12 + m.m1 * m.m3 / d13 + m.m2 * m.m3 / d23)
    return kinetic + potential


def hamiltonian_full(state: FullState, m: MassTriple) -> float:
    return float(full_energy(state.as_array(), m))


def full_vector_field(z, m: MassTriple):
    """Time derivative of the raw full-chart state vector."""
    x, y = z[:6], z[6:12]
    d12, d13, d23 = _full_distances(x)
    dx = np.empty(6, dtype=np.result_type(z, float))
    dx[0] = y[0] / m.m1
    dx[1] = y[1] / m.m1
    dx[2] = y[2] / m.m2
    dx[3] = y[3] / m.m2
    dx[4] = y[4] / m.m3
    dx[5] = y[5] / m.m3

    # pairwise attractions; f_ab = m_a m_b (x_b - x_a) / d^3 acts on a
    r12 = np.array([x[2] - x[0], x[3] - x[1]])
    r13 = np.array([x[4] - x[0], x[5] - x[1]])
    r23 = np.array([x[4] - x[2], x[5] - x[3]])
    f12 = m.m1 * m.m2 * r12 / d12 ** 3
    f13 = m.m1 * m.m3 * r13 / d13 ** 3
    f23 = m.m2 * m.m3 * r23 / d23 ** 3
    dy = np.empty(6, dtype=dx.dtype)
    dy[0:2] = f12 + f13
    dy[2:4] = -f12 + f23
    dy[4:6] = -f13 - f23
    return np.concatenate([dx, dy])


def vector_field_full(state: FullState, m: MassTriple) -> np.ndarray:
    return full_vector_field(state.as_array(), m)


def first_integrals_full(state: FullState, m: MassTriple) -> tuple:
    """Classical integrals (F1, F2, F3, F4): energy, both momentum sums,
    and the area integral."""
    z = state.as_array()
    x, y = z[:6], z[6:12]
    f1 = full_energy(z, m)
    f2 = y[0] + y[2] + y[4]
    f3 = y[1] + y[3] + y[5]
    f4 = (y[0] * x[1] + y[2] * x[3] + y[4] * x[5]
          - x[0] * y[1] - x[2] * y[3] - x[4] * y[5])
    return (float(f1), float(f2), float(f3), float(f4))


# ---------------------------------------------------------------------------
# Reduced chart
# ---------------------------------------------------------------------------

def _reduced_distances(z, r=None, check=True):
    if r is not None:
        r1, r2, r3 = r
    else:
        q1, q2, q3 = z[0], z[1], z[2]
        r1 = q1
        r2 = np.sqrt(q2 ** 2 + q3 ** 2)
        r3 = np.sqrt((q1 - q2) ** 2 + q3 ** 2)
    if check:
        for name, d in (("r1", r1), ("r2", r2), ("r3", r3)):
            if abs(d) < COLLISION_THRESHOLD:
                raise CollisionError(name, float(abs(d)))
    return r1, r2, r3


def reduced_energy(z, k, m: MassTriple, r=None):
    """Reduced Hamiltonian on a raw state z = (q1, q2, q3, p1, p2, p3)."""
    q1, q2, q3, p1, p2, p3 = z
    M1, M2 = mass_coefficients(m)
    mu = 1.0 / m.m3
    r1, r2, r3 = _reduced_distances(z, r)
    Pa = p3 * q2 - p2 * q3 - k
    kinetic = (
        0.5 * M1 * (p1 ** 2 + (Pa / q1) ** 2)
        + 0.5 * M2 * (p2 ** 2 + p3 ** 2)
        + mu * (p1 * p2 - p3 * Pa / q1)
    )
    potential = -(m.m1 * m.m3 / r1 + m.m2 * m.m3 / r2 + m.m1 * m.m2 / r3)
    return kinetic + potential


def hamiltonian_reduced(state: ReducedState, m: MassTriple) -> float:
    return float(reduced_energy(state.as_array(), state.k, m))


def reduced_gradient(z, k, m: MassTriple, r=None):
    """Exact gradient of the reduced Hamiltonian, order (q1..q3, p1..p3)."""
    q1, q2, q3, p1, p2, p3 = z
    a, M2 = mass_coefficients(m)
    mu = 1.0 / m.m3
    r1, r2, r3 = _reduced_distances(z, r)
    s1 = 1.0 / q1
    Pa = p3 * q2 - p2 * q3 - k
    dq = q1 - q2

    g = np.empty(6, dtype=np.result_type(z, float))
    g[0] = (-a * Pa ** 2 * s1 ** 3 + mu * p3 * Pa * s1 ** 2
            + m.m1 * m.m3 * s1 ** 2 + m.m1 * m.m2 * dq / r3 ** 3)
    g[1] = (a * Pa * p3 * s1 ** 2 - mu * p3 ** 2 * s1
            + m.m2 * m.m3 * q2 / r2 ** 3 - m.m1 * m.m2 * dq / r3 ** 3)
    g[2] = (-a * Pa * p2 * s1 ** 2 + mu * p2 * p3 * s1
            + m.m2 * m.m3 * q3 / r2 ** 3 + m.m1 * m.m2 * q3 / r3 ** 3)
    g[3] = a * p1 + mu * p2
    g[4] = -a * Pa * q3 * s1 ** 2 + M2 * p2 + mu * (p1 + p3 * q3 * s1)
    g[5] = a * Pa * q2 * s1 ** 2 + M2 * p3 - mu * (Pa + p3 * q2) * s1
    return g


def reduced_hessian(z, k, m: MassTriple, r=None):
    """Exact Hessian of the reduced Hamiltonian (6x6, symmetric)."""
    q1, q2, q3, p1, p2, p3 = z
    a, M2 = mass_coefficients(m)
    mu = 1.0 / m.m3
    r1, r2, r3 = _reduced_distances(z, r)
    s1 = 1.0 / q1
    Pa = p3 * q2 - p2 * q3 - k
    dq = q1 - q2
    m12 = m.m1 * m.m2
    m13 = m.m1 * m.m3
    m23 = m.m2 * m.m3

    H = np.zeros((6, 6), dtype=np.result_type(z, float))

    # kinetic part
    H[0, 0] = 3 * a * Pa ** 2 * s1 ** 4 - 2 * mu * p3 * Pa * s1 ** 3
    H[0, 1] = -2 * a * Pa * p3 * s1 ** 3 + mu * p3 ** 2 * s1 ** 2
    H[0, 2] = 2 * a * Pa * p2 * s1 ** 3 - mu * p2 * p3 * s1 ** 2
    H[0, 4] = 2 * a * Pa * q3 * s1 ** 3 - mu * p3 * q3 * s1 ** 2
    H[0, 5] = -2 * a * Pa * q2 * s1 ** 3 + mu * (Pa + p3 * q2) * s1 ** 2
    H[1, 1] = a * p3 ** 2 * s1 ** 2
    H[1, 2] = -a * p2 * p3 * s1 ** 2
    H[1, 4] = -a * p3 * q3 * s1 ** 2
    H[1, 5] = a * (Pa + p3 * q2) * s1 ** 2 - 2 * mu * p3 * s1
    H[2, 2] = a * p2 ** 2 * s1 ** 2
    H[2, 4] = -a * (Pa - p2 * q3) * s1 ** 2 + mu * p3 * s1
    H[2, 5] = -a * p2 * q2 * s1 ** 2 + mu * p2 * s1
    H[3, 3] = a
    H[3, 4] = mu
    H[4, 4] = a * q3 ** 2 * s1 ** 2 + M2
    H[4, 5] = -a * q2 * q3 * s1 ** 2 + mu * q3 * s1
    H[5, 5] = a * q2 ** 2 * s1 ** 2 + M2 - 2 * mu * q2 * s1

    # potential part (q block only)
    H[0, 0] += -2 * m13 * s1 ** 3 + m12 * (1.0 / r3 ** 3 - 3 * dq ** 2 / r3 ** 5)
    H[0, 1] += m12 * (-1.0 / r3 ** 3 + 3 * dq ** 2 / r3 ** 5)
    H[0, 2] += -3 * m12 * dq * q3 / r3 ** 5
    H[1, 1] += (m23 * (1.0 / r2 ** 3 - 3 * q2 ** 2 / r2 ** 5)
                + m12 * (1.0 / r3 ** 3 - 3 * dq ** 2 / r3 ** 5))
    H[1, 2] += -3 * m23 * q2 * q3 / r2 ** 5 + 3 * m12 * dq * q3 / r3 ** 5
    H[2, 2] += (m23 * (1.0 / r2 ** 3 - 3 * q3 ** 2 / r2 ** 5)
                + m12 * (1.0 / r3 ** 3 - 3 * q3 ** 2 / r3 ** 5))

    # symmetrize
    iu = np.triu_indices(6, 1)
    H[(iu[1], iu[0])] = H[iu]
    return H


def reduced_vector_field(z, k, m: MassTriple, r=None):
    """Hamiltonian vector field of the reduced chart, J * grad H."""
    g = reduced_gradient(z, k, m, r)
    return J6 @ g


def vector_field_reduced(state: ReducedState, m: MassTriple) -> np.ndarray:
    return reduced_vector_field(state.as_array(), state.k, m)


def lift_reduced_state(state: ReducedState, m: MassTriple) -> FullState:
    """Embed a reduced state into the full chart.

    The lifted state has its centre of mass at the origin, body 1 on the
    positive axis through body 3, and total angular momentum equal to the
    state's area constant k (the full-chart integral F4 equals -k under
    this sign convention).
    """
    q1, q2, q3 = state.q1, state.q2, state.q3
    p1, p2, p3 = state.p1, state.p2, state.p3
    Pa = p3 * q2 - p2 * q3 - state.k
    u = np.array([q1, 0.0])
    v = np.array([q2, q3])
    pu = np.array([p1, -Pa / q1])
    pv = np.array([p2, p3])
    x3 = -(m.m1 * u + m.m2 * v) / m.s1
    x1 = x3 + u
    x2 = x3 + v
    y3 = -pu - pv
    return FullState(
        (x1[0], x1[1], x2[0], x2[1], x3[0], x3[1]),
        (pu[0], pu[1], pv[0], pv[1], y3[0], y3[1]),
    )


# ---------------------------------------------------------------------------
# Finite-difference helpers (test oracles)
# ---------------------------------------------------------------------------

def central_gradient(f, z, h=1e-6):
    """Central-difference gradient of a scalar function of a vector."""
    z = np.asarray(z, dtype=float)
    g = np.zeros_like(z)
    for i in range(z.size):
        zp, zm = z.copy(), z.copy()
        step = h * max(1.0, abs(z[i]))
        zp[i] += step
        zm[i] -= step
        g[i] = (f(zp) - f(zm)) / (2.0 * step)
    return g


def central_jacobian(f, z, h=1e-6):
    """Central-difference Jacobian of a vector function of a vector."""
    z = np.asarray(z)
    f0 = np.asarray(f(z))
    Jm = np.zeros((f0.size, z.size), dtype=np.result_type(f0, float))
    for i in range(z.size):
        zp, zm = z.astype(Jm.dtype), z.astype(Jm.dtype)
        step = h * max(1.0, abs(z[i]))
        zp[i] += step
        zm[i] -= step
        Jm[:, i] = (np.asarray(f(zp)) - np.asarray(f(zm))) / (2.0 * step)
    return Jm
