"""Variational equations along the orbit and their normal reduction.

With w the orbit parameter, the linearized flow is

    dxi/dw = M6(w) xi,        M6 = (dt/dw) * J * Hess H (Gamma(w)),

a 6x6 system with poles only at the two roots of P.  Two directions are
dynamically trivial: the rescaled tangent X_H(Gamma) is an exact solution
and the energy differential dH is conserved, so the essential dynamics is
the induced flow on ker dH / span{tangent}, a 4-dimensional system.

This module realizes that quotient with an explicitly polynomial frame
T(w) = [F1 .. F6] whose first column is a polynomial multiple of the
tangent solution and whose middle four columns span a complement inside
ker dH.  In the frame coordinates the system is block-triangular and the
middle 4x4 block N(w) is the normal variational system.  By construction
det T is proportional to P(w)^2 P'(w): the frame degenerates only at the
two roots of P (already singular) and at the vertex of the parabola,
which therefore appears as an extra singular point of N with identity
monodromy.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .dynamics import J6, reduced_gradient, reduced_hessian, reduced_vector_field
from .orbit import LagrangeParam


def variational_matrix(param: LagrangeParam, w):
    """Coefficient matrix M6(w) of the 6x6 variational system."""
    P = param.P(w)
    z = param.state(w)
    hess = reduced_hessian(z, param.k, param.masses, r=(P, P, P))
    return param.dt_dw(w) * (J6 @ hess)


def tangent_solution(param: LagrangeParam, w):
    """X_H(Gamma(w)): the exact solution of the variational system."""
    P = param.P(w)
    z = param.state(w)
    return reduced_vector_field(z, param.k, param.masses, r=(P, P, P))


def gradient_on_orbit(param: LagrangeParam, w):
    P = param.P(w)
    z = param.state(w)
    return reduced_gradient(z, param.k, param.masses, r=(P, P, P))


class NormalFrame:
    """Frame realizing the normal variational system in a balanced chart.

    The collision points are regularized first by the diagonal gauge
    D6 = diag(P, P, P, 1/P, 1/P, 1/P) (positions scale like the triangle
    size, momenta like its inverse), which gives the 6x6 system simple
    poles at the roots of P.  In the balanced chart both the rescaled
    tangent solution (P' c, u) and the conserved-energy row (-u, P' c)
    are low-degree polynomials, and the frame below is analytic with
    det T proportional to P'^2: it is invertible away from the parabola
    vertex, so the induced 4x4 block N(w) inherits simple poles at the
    roots of P and acquires its only other finite singularity, an
    apparent one, at the vertex.
    """

    def __init__(self, param: LagrangeParam):
        self.param = param
        e1, e2, e3 = param.e1, param.e2, param.e3
        root3 = param.orientation * math.sqrt(3.0)
        c = np.array([1.0, 0.5, 0.5 * root3])
        d1 = np.array([1.0, param.alpha, param.gamma])
        d2 = np.array([0.0, param.beta, param.delta])
        B = np.column_stack([c, d1, d2])
        if abs(np.linalg.det(B)) < 1e-12:
            raise ValueError("degenerate constant frame (c, d1, d2)")
        duals = np.linalg.inv(B.T)          # columns: c*, d1*, d2*
        self.c, self.d1, self.d2 = c, d1, d2
        self.cs, self.d1s, self.d2s = duals[:, 0], duals[:, 1], duals[:, 2]
        self._e = (e1, e2, e3)

    def matrices(self, w):
        """Frame T(w) and its w-derivative in the balanced chart."""
        e1, e2, e3 = self._e
        dP = 2.0 * e1 * w + e2
        u1 = -e1 * w * w + e3

        Z = np.zeros(3)
        cols = np.empty((6, 6), dtype=complex)
        dcols = np.empty((6, 6), dtype=complex)

        def put(i, qpart, ppart, dqpart, dppart):
            cols[:3, i] = qpart
            cols[3:, i] = ppart
            dcols[:3, i] = dqpart
            dcols[3:, i] = dppart

        # F1: rescaled tangent solution (exact solution of the balanced VE
        # up to the polynomial factor P^2)
        put(0, dP * self.c, u1 * self.d1 - dP * self.d2,
            2.0 * e1 * self.c, -2.0 * e1 * w * self.d1 - 2.0 * e1 * self.d2)
        # F2, F3: constant momentum directions inside ker dH
        put(1, Z, self.d1s, Z, Z)
        put(2, Z, self.d2s, Z, Z)
        # F4: constant mixed direction, also in ker dH
        put(3, self.d2s, -self.cs, Z, Z)
        # F5: position syzygy direction of ker dH
        put(4, dP * self.d1s + u1 * self.d2s, Z,
            2.0 * e1 * self.d1s - 2.0 * e1 * w * self.d2s, Z)
        # F6: completion transverse to ker dH; det T = const * P'^2
        put(5, self.d2s, Z, Z, Z)

        return cols, dcols

    def balanced_matrix(self, w):
        """Balanced 6x6 coefficient matrix D6^-1 M6 D6 - D6^-1 D6'."""
        P = self.param.P(w)
        dP = self.param.dP(w)
        M6 = variational_matrix(self.param, w)
        M = M6.copy()
        M[:3, 3:] /= P ** 2
        M[3:, :3] *= P ** 2
        lam = dP / P
        M[:3, :3] -= lam * np.eye(3)
        M[3:, 3:] += lam * np.eye(3)
        return M

    def normal_matrix(self, w):
        """The 4x4 normal variational coefficient matrix N(w)."""
        T, dT = self.matrices(w)
        M = self.balanced_matrix(w)
        big = np.linalg.solve(T, M @ T - dT)
        return big[1:5, 1:5]

    def full_transformed(self, w):
        """The whole 6x6 frame-coordinate coefficient matrix."""
        T, dT = self.matrices(w)
        M = self.balanced_matrix(w)
        return np.linalg.solve(T, M @ T - dT)

    def balance(self, w):
        """The diagonal balancing gauge D6(w) as a vector of scales."""
        P = self.param.P(w)
        return np.array([P, P, P, 1.0 / P, 1.0 / P, 1.0 / P])

    def projection(self, w):
        """4x6 map sending an (unbalanced) variation to normal coordinates.

        Annihilates both the tangent direction and the energy gradient,
        and maps the frame's normal columns to unit coordinates.
        """
        T, _ = self.matrices(w)
        rows = np.linalg.inv(T)[1:5, :]
        g = gradient_on_orbit(self.param, w)
        G = g @ g
        if abs(G) < 1e-12:
            raise ValueError("isotropic gradient at this w; move the point")
        unbalance = np.diag(1.0 / self.balance(w))
        return rows @ unbalance @ (np.eye(6) - np.outer(g, g) / G)


def normal_system(param: LagrangeParam):
    """Convenience: w -> N(w) with a cached frame."""
    frame = NormalFrame(param)
    return frame.normal_matrix


def laurent_coefficients(fn, center, radius, n_samples=128, orders=(-3, 3)):
    """Laurent coefficients of a matrix function on a circle, via FFT.

    Returns {n: c_n} for n in the closed range `orders`, where
    fn(tau) = sum c_n (tau - center)^n on the sampling circle.
    """
    ks = np.arange(n_samples)
    zs = radius * np.exp(2j * np.pi * ks / n_samples)
    samples = np.array([fn(center + z) for z in zs])
    # c_n = (1/N) sum_k f_k exp(-2pi i k n / N) / r^n
    out = {}
    fft = np.fft.fft(samples, axis=0) / n_samples
    for n in range(orders[0], orders[1] + 1):
        out[n] = fft[n % n_samples] / radius ** n
    return out
