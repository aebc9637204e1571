"""Mass triples and the spectral quantities derived from them."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class MassTriple:
    """Three positive point masses, with the derived spectral data.

    The derived quantities feed the expected monodromy spectrum at
    infinity: theta measures how far the masses are from the equal-mass
    point (theta = 0 iff m1 = m2 = m3, theta -> 144 only in a degenerate
    limit where the product terms vanish), and lambda1/lambda2 are the
    exponents whose exponentials e^{+-2*pi*i*lambda} form that spectrum.
    """

    m1: float
    m2: float
    m3: float

    def __post_init__(self):
        for name in ("m1", "m2", "m3"):
            v = getattr(self, name)
            if not (v > 0.0) or not math.isfinite(v):
                raise ValueError(f"mass {name} must be positive and finite, got {v!r}")

    @property
    def s1(self) -> float:
        """Sum of the masses."""
        return self.m1 + self.m2 + self.m3

    @property
    def s2(self) -> float:
        """Sum of pairwise mass products."""
        return self.m1 * self.m2 + self.m2 * self.m3 + self.m1 * self.m3

    @property
    def theta(self) -> float:
        # 144 * (1 - 3*S2/S1^2) >= 0 by AM-GM; clamp float dust at 0.
        t = 144.0 * (1.0 - 3.0 * self.s2 / self.s1**2)
        return max(t, 0.0)

    @property
    def lambda1(self) -> float:
        return 1.5 + 0.5 * math.sqrt(13.0 + math.sqrt(self.theta))

    @property
    def lambda2(self) -> float:
        return 1.5 + 0.5 * math.sqrt(13.0 - math.sqrt(self.theta))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.m1, self.m2, self.m3)

    def to_json(self) -> dict:
        return {
            "m1": self.m1,
            "m2": self.m2,
            "m3": self.m3,
            "s1": self.s1,
            "s2": self.s2,
            "theta": self.theta,
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MassTriple":
        return cls(float(obj["m1"]), float(obj["m2"]), float(obj["m3"]))
