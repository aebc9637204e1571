"""Numerical non-integrability certificates for the planar three-body
problem near the parabolic equilateral (Lagrange) orbit."""

__version__ = "0.1.0"

from .masses import MassTriple
from .states import FullState, ReducedState, Trajectory
from .orbit import LagrangeParam, OrbitPoint, solve_parametrization, orbit_state
from .fuchsian import FuchsianSystem, build_fuchsian
from .monodromy import (MonodromySet, SpectralData, generators,
                        spectral_analysis, theoretical_spectrum,
                        matching_distance)
from .certify import Certificate, RunConfig, certify, sweep

__all__ = [
    "MassTriple", "FullState", "ReducedState", "Trajectory",
    "LagrangeParam", "OrbitPoint", "solve_parametrization", "orbit_state",
    "FuchsianSystem", "build_fuchsian",
    "MonodromySet", "SpectralData", "generators", "spectral_analysis",
    "theoretical_spectrum", "matching_distance",
    "Certificate", "RunConfig", "certify", "sweep",
]
