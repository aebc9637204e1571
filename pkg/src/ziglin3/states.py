"""Phase-space state containers and their JSON forms."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class FullState:
    """Planar three-body phase point: positions x[0:6], momenta y[0:6].

    Layout: body 1 at (x[0], x[1]), body 2 at (x[2], x[3]), body 3 at
    (x[4], x[5]); y holds the conjugate momenta in the same order.
    """

    x: tuple
    y: tuple

    def __post_init__(self):
        if len(self.x) != 6 or len(self.y) != 6:
            raise ValueError("FullState needs 6 positions and 6 momenta")
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        object.__setattr__(self, "y", tuple(float(v) for v in self.y))

    def as_array(self) -> np.ndarray:
        return np.array(self.x + self.y, dtype=float)

    @classmethod
    def from_array(cls, z) -> "FullState":
        z = np.asarray(z)
        return cls(tuple(z[:6]), tuple(z[6:12]))

    def pair_distances(self) -> dict:
        x = self.x
        d12 = np.hypot(x[0] - x[2], x[1] - x[3])
        d13 = np.hypot(x[0] - x[4], x[1] - x[5])
        d23 = np.hypot(x[2] - x[4], x[3] - x[5])
        return {"P1-P2": float(d12), "P1-P3": float(d13), "P2-P3": float(d23)}

    def to_json(self) -> dict:
        return {"x": list(self.x), "y": list(self.y)}

    @classmethod
    def from_json(cls, obj) -> "FullState":
        return cls(tuple(obj["x"]), tuple(obj["y"]))


@dataclass(frozen=True)
class ReducedState:
    """State of the three-degree-of-freedom reduced problem.

    k is the area-integral constant: a fixed parameter of the reduced
    Hamiltonian, not a coordinate.
    """

    q1: float
    q2: float
    q3: float
    p1: float
    p2: float
    p3: float
    k: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.q1, self.q2, self.q3, self.p1, self.p2, self.p3], dtype=float)

    @classmethod
    def from_array(cls, z, k=0.0) -> "ReducedState":
        z = np.asarray(z)
        return cls(*(float(v) for v in z[:6]), k=float(k))

    def distances(self) -> tuple:
        r1 = self.q1
        r2 = float(np.hypot(self.q2, self.q3))
        r3 = float(np.hypot(self.q1 - self.q2, self.q3))
        return (r1, r2, r3)

    def to_json(self) -> dict:
        return {
            "q1": self.q1, "q2": self.q2, "q3": self.q3,
            "p1": self.p1, "p2": self.p2, "p3": self.p3,
            "k": self.k,
        }

    @classmethod
    def from_json(cls, obj) -> "ReducedState":
        return cls(obj["q1"], obj["q2"], obj["q3"], obj["p1"], obj["p2"], obj["p3"], obj["k"])


@dataclass
class Trajectory:
    """Ordered integrator output: times, raw state rows, run metadata."""

    t: np.ndarray
    states: np.ndarray
    kind: str                      # "full" | "reduced"
    k: float = 0.0                 # area constant (reduced runs only)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.states = np.asarray(self.states, dtype=float)
        if self.t.ndim != 1 or self.states.shape[0] != self.t.shape[0]:
            raise ValueError("times and states must align")
        if self.t.size > 1 and not (np.all(np.diff(self.t) > 0) or np.all(np.diff(self.t) < 0)):
            raise ValueError("trajectory times must be strictly monotone")

    def state(self, i) :
        row = self.states[i]
        if self.kind == "full":
            return FullState.from_array(row)
        return ReducedState.from_array(row, k=self.k)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "k": self.k,
            "t": [float(v) for v in self.t],
            "states": [[float(v) for v in row] for row in self.states],
            "meta": self.meta,
        }
