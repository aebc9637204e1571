"""Loop construction for monodromy transport.

All loops are closed polylines based at a common regular basepoint.
Monodromy only depends on the homotopy class, so circles are realized as
polygons; clearance from every singular point is checked explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ClearanceError

DEFAULT_CLEARANCE_FACTOR = 0.1


@dataclass
class LoopPath:
    """Closed positively-oriented polyline from a basepoint."""

    basepoint: complex
    waypoints: list
    encircled: tuple
    clearance: float = 0.0

    def __post_init__(self):
        if abs(self.waypoints[0] - self.waypoints[-1]) > 1e-13:
            raise ValueError("loop must be closed")
        if abs(self.waypoints[0] - self.basepoint) > 1e-13:
            raise ValueError("loop must start at the basepoint")

    def to_json(self):
        return {
            "basepoint": [self.basepoint.real, self.basepoint.imag],
            "waypoints": [[w.real, w.imag] for w in self.waypoints],
            "encircled": list(self.encircled),
            "clearance": self.clearance,
        }


def _segment_point_distance(a, b, p):
    d = b - a
    L2 = abs(d) ** 2
    if L2 == 0.0:
        return abs(p - a)
    t = ((p - a).real * d.real + (p - a).imag * d.imag) / L2
    t = min(1.0, max(0.0, t))
    return abs(p - (a + t * d))


def path_clearance(waypoints, singularities):
    """Smallest distance from the polyline to any singular point."""
    best = np.inf
    for a, b in zip(waypoints[:-1], waypoints[1:]):
        for s in singularities:
            best = min(best, _segment_point_distance(a, b, s))
    return float(best)


def check_clearance(loop: LoopPath, singularities, min_clearance):
    got = path_clearance(loop.waypoints, singularities)
    if got < min_clearance:
        raise ClearanceError(
            f"path clearance {got:.3e} below required {min_clearance:.3e}")
    return got


def _polygon(center, radius, n, start_angle):
    return [center + radius * np.exp(1j * (start_angle + 2 * np.pi * k / n))
            for k in range(n + 1)]


def keyhole_loop(basepoint, target, singularities, radius=None, n_arc=24,
                 label=None) -> LoopPath:
    """Spoke from the basepoint, one positive polygon around the target,
    spoke back."""
    others = [s for s in singularities if abs(s - target) > 1e-12]
    local = min(abs(s - target) for s in others) if others else abs(basepoint - target)
    r = radius if radius is not None else 0.25 * local
    direction = (basepoint - target) / abs(basepoint - target)
    entry = target + r * direction
    ang0 = float(np.angle(direction))
    pts = [basepoint, entry] + _polygon(target, r, n_arc, ang0)[1:] + [basepoint]
    loop = LoopPath(basepoint, pts, (label if label is not None else str(target),))
    loop.clearance = path_clearance(pts, others)
    return loop


def infinity_loop(basepoint, singularities, radius=None, n_arc=48) -> LoopPath:
    """Clockwise large polygon around all finite singular points, traversed
    from the basepoint; equals the positive local loop at infinity."""
    centroid = sum(singularities) / len(singularities)
    spread = max(abs(s - centroid) for s in singularities)
    R = radius if radius is not None else 2.5 * spread + 2.0 * abs(basepoint - centroid)
    direction = (basepoint - centroid) / abs(basepoint - centroid)
    entry = centroid + R * direction
    ang0 = float(np.angle(direction))
    # clockwise: negative orientation in the finite chart
    poly = [centroid + R * np.exp(1j * (ang0 - 2 * np.pi * k / n_arc))
            for k in range(n_arc + 1)]
    pts = [basepoint, entry] + poly[1:] + [basepoint]
    loop = LoopPath(basepoint, pts, ("infinity",))
    loop.clearance = path_clearance(pts, singularities)
    return loop


def reversed_loop(loop: LoopPath) -> LoopPath:
    pts = list(reversed(loop.waypoints))
    out = LoopPath(loop.basepoint, pts, loop.encircled + ("reversed",))
    out.clearance = loop.clearance
    return out
