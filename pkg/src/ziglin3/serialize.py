"""Deterministic JSON helpers shared by the serializable types."""

from __future__ import annotations

import json

import numpy as np


def complex_to_pair(z):
    z = complex(z)
    return [z.real, z.imag]


def matrix_to_json(M):
    """Row-major nested list of [re, im] pairs."""
    M = np.asarray(M)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def matrix_from_json(obj):
    return np.array([[complex(re, im) for re, im in row] for row in obj])


def vector_to_json(v):
    return [[float(z.real), float(z.imag)] for z in np.asarray(v)]


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, stable float repr, newline end."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(path, obj):
    with open(path, "w") as fh:
        fh.write(dumps(obj))
