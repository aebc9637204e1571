"""The parabolic equilateral (Lagrange) orbit in the reduced chart.

The orbit keeps the three bodies at the vertices of an equilateral
triangle whose size q follows a zero-energy Kepler motion.  Regularizing
that motion (size = squared modulus of a complex line) makes every phase
variable a rational function of one complex parameter w:

    (q1, q2, q3) = (q, q/2, +-sqrt(3) q/2),   q = P(w) = e1 w^2 + e2 w + e3,
    (p1, p2, p3) = (p, alpha p + beta/q, gamma p + delta/q),   p = w / P(w),

with constants fixed by the masses and one homothety gauge parameter
sigma (the pericentre scale; sigma = 1 by default).  The constants below
come from eliminating the ansatz against Hamilton's equations in closed
form; `solve_parametrization` re-verifies the elimination numerically and
treats any residual above tolerance as an internal error.

The two roots of P are a complex-conjugate pair (triple-collision points
of the complexified orbit), and dt/dw = P(w)/A with a constant A, so the
time map t(w) is a polynomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import reduced_gradient, reduced_vector_field
from .errors import PoleError, Ziglin3Error
from .masses import MassTriple

RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class LagrangeParam:
    """Constants of the parabolic Lagrange parametrization."""

    masses: MassTriple
    alpha: float
    beta: float
    gamma: float
    delta: float
    e1: float
    e2: float
    e3: float
    k: float
    sigma: float = 1.0
    orientation: int = 1

    # -- polynomial pieces -------------------------------------------------

    def P(self, w):
        return (self.e1 * w + self.e2) * w + self.e3

    def dP(self, w):
        return 2.0 * self.e1 * w + self.e2

    def u1(self, w):
        # P - w P'
        return -self.e1 * w * w + self.e3

    @property
    def time_constant(self) -> float:
        """A in dt/dw = P(w)/A."""
        m = self.masses
        return m.m1 * (2.0 * m.m3 + m.m2) / 2.0

    def roots(self) -> tuple[complex, complex]:
        """The two (conjugate) roots of P, collision points of the orbit."""
        disc = self.e2 ** 2 - 4.0 * self.e1 * self.e3
        s = np.sqrt(complex(disc))
        r_plus = (-self.e2 + s) / (2.0 * self.e1)
        r_minus = (-self.e2 - s) / (2.0 * self.e1)
        if r_plus.imag < r_minus.imag:
            r_plus, r_minus = r_minus, r_plus
        return complex(r_plus), complex(r_minus)

    def vertex(self) -> float:
        """Critical point of P; pericentre of the size motion."""
        return -self.e2 / (2.0 * self.e1)

    # -- evaluation ---------------------------------------------------------

    def state(self, w):
        """Phase point Gamma(w) as a length-6 (complex) array."""
        P = self.P(w)
        if abs(P) < 1e-13:
            raise PoleError(f"w={w!r} is at (or near) a root of P")
        p = w / P
        root3 = self.orientation * math.sqrt(3.0)
        return np.array([
            P, 0.5 * P, 0.5 * root3 * P,
            p, self.alpha * p + self.beta / P, self.gamma * p + self.delta / P,
        ])

    def dstate_dw(self, w):
        """Exact derivative of Gamma with respect to w."""
        P = self.P(w)
        dP = self.dP(w)
        u1 = self.u1(w)
        root3 = self.orientation * math.sqrt(3.0)
        return np.array([
            dP, 0.5 * dP, 0.5 * root3 * dP,
            u1 / P ** 2,
            (self.alpha * u1 - self.beta * dP) / P ** 2,
            (self.gamma * u1 - self.delta * dP) / P ** 2,
        ])

    def time_map(self, w):
        """t(w), the polynomial primitive of P/A with t(0) = 0."""
        A = self.time_constant
        return ((self.e1 * w / 3.0 + self.e2 / 2.0) * w + self.e3) * w / A

    def dt_dw(self, w):
        return self.P(w) / self.time_constant

    def to_json(self) -> dict:
        return {
            "masses": self.masses.to_json(),
            "alpha": self.alpha, "beta": self.beta,
            "gamma": self.gamma, "delta": self.delta,
            "e1": self.e1, "e2": self.e2, "e3": self.e3,
            "k": self.k,
            "sigma": self.sigma,
            "orientation": self.orientation,
            "gauge": "pericentre scale sigma; w pinned by p1 = w/P(w)",
        }

    @classmethod
    def from_json(cls, obj) -> "LagrangeParam":
        return cls(
            MassTriple.from_json(obj["masses"]),
            obj["alpha"], obj["beta"], obj["gamma"], obj["delta"],
            obj["e1"], obj["e2"], obj["e3"], obj["k"],
            obj.get("sigma", 1.0), obj.get("orientation", 1),
        )


@dataclass(frozen=True)
class OrbitPoint:
    w: complex
    state: np.ndarray
    t: complex


def solve_parametrization(m: MassTriple, orientation: int = 1,
                          sigma: float = 1.0) -> LagrangeParam:
    """Determine the orbit constants for the given masses.

    The closed forms below are the exact elimination of the ansatz
    against the reduced Hamilton equations.  A residual sweep over a
    fixed w grid re-verifies them; failure indicates a bug, not a bad
    input, so it raises the package base error.
    """
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    m1, m2, m3 = m.m1, m.m2, m.m3
    S1, S2 = m.s1, m.s2
    eps = float(orientation)
    root3 = math.sqrt(3.0)
    denom = 2.0 * m3 + m2
    A = m1 * denom / 2.0

    alpha = m2 * (m3 - m1) / (m1 * denom)
    gamma = eps * root3 * m2 * (m1 + m3) / (m1 * denom)
    beta = eps * root3 * m2 * m3 * sigma * math.sqrt(2.0 * S1) / denom
    delta = (2.0 * m2 * sigma * (m3 * (m1 + m2 - m3) + 2.0 * m1 * m2)
             / (denom * math.sqrt(2.0 * S1)))
    k = -sigma * S2 * math.sqrt(2.0 / S1)

    e1 = S1 / (2.0 * A ** 2)
    e2 = eps * root3 * m1 * m2 * sigma * math.sqrt(S1 / 2.0) / A ** 2
    e3 = sigma ** 2 * (denom ** 2 + 3.0 * m2 ** 2) / denom ** 2

    param = LagrangeParam(m, alpha, beta, gamma, delta, e1, e2, e3, k,
                          sigma, orientation)

    worst = max(residual(param, w) for w in _validation_grid(param))
    if worst > RESIDUAL_TOL:
        raise Ziglin3Error(
            f"orbit constants failed self-check: residual {worst:.3e} "
            f"exceeds {RESIDUAL_TOL:g} (internal error)")
    return param


def _validation_grid(param: LagrangeParam, n: int = 32):
    """Deterministic w grid, real and complex, clear of the roots of P."""
    wc = param.vertex()
    r_plus, _ = param.roots()
    h = abs(r_plus.imag - 0.0) + abs(r_plus - wc)  # scale of the layout
    pts = []
    for j in range(n // 2):
        pts.append(wc + 0.3 * h + 2.2 * h * j / (n // 2 - 1))  # real ray
    for j in range(n - n // 2):
        ang = 2.0 * math.pi * (j + 0.5) / (n - n // 2)
        pts.append(wc + 1.7 * h * complex(math.cos(ang), math.sin(ang)))
    return pts


def residual(param: LagrangeParam, w) -> float:
    """Defect of Gamma at w against Hamilton's equations.

    Computes || dGamma/dw - (dt/dw) X_H(Gamma(w)) || with the mutual
    distances overridden by their analytic value r_i = P(w).
    """
    P = param.P(w)
    z = param.state(w)
    field = reduced_vector_field(z, param.k, param.masses, r=(P, P, P))
    defect = param.dstate_dw(w) - param.dt_dw(w) * field
    return float(np.linalg.norm(defect))


def orbit_state(param: LagrangeParam, w) -> OrbitPoint:
    """Evaluate the orbit at parameter w (pole error at roots of P)."""
    return OrbitPoint(complex(w), param.state(w), param.time_map(w))


def orbit_energy(param: LagrangeParam, w):
    """Reduced energy on the orbit; identically zero in the parabolic case."""
    from .dynamics import reduced_energy
    P = param.P(w)
    return reduced_energy(param.state(w), param.k, param.masses, r=(P, P, P))


def time_to_parameter(param: LagrangeParam, t: float) -> float:
    """Invert the (monotone) real-time map t(w) for real w."""
    e1, e2, e3 = param.e1, param.e2, param.e3
    A = param.time_constant
    # cubic e1 w^3/3 + e2 w^2/2 + e3 w - A t = 0 has one real root since
    # dt/dw = P/A > 0 on the real axis
    coeffs = [e1 / 3.0, e2 / 2.0, e3, -A * t]
    roots = np.roots(coeffs)
    real = [r.real for r in roots if abs(r.imag) < 1e-9 * max(1.0, abs(r))]
    if not real:
        raise Ziglin3Error(f"no real w found for t={t}")
    return min(real, key=lambda w: abs(param.time_map(w) - t))
