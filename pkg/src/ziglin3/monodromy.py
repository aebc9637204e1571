"""Monodromy generators of the Fuchsian system and their spectral data."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .fuchsian import FuchsianSystem
from .loops import LoopPath, infinity_loop, keyhole_loop
from .masses import MassTriple
from .serialize import matrix_to_json
from .transport import transport

RANK_TOL = 1e-6   # singular values below this fraction of the largest count as zero


@dataclass
class MonodromySet:
    """Generators at the common basepoint.

    Composition convention: loops compose by matrix products acting on
    initial conditions, so the boundary relation of the punctured sphere
    reads T0 * T1 * T2 * Tinf = I with our loop ordering (vertex, upper
    root, lower root, clockwise outer circle).  With T0 = I this is the
    product relation T1 T2 = Tinf^{-1}.
    """

    T0: np.ndarray
    T1: np.ndarray
    T2: np.ndarray
    Tinf: np.ndarray               # direct transport along the outer loop
    Tinf_product: np.ndarray       # (T1 T2)^{-1} via the relation
    basepoint: complex
    tol: float
    loops: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "T0": matrix_to_json(self.T0),
            "T1": matrix_to_json(self.T1),
            "T2": matrix_to_json(self.T2),
            "Tinf": matrix_to_json(self.Tinf),
            "Tinf_product": matrix_to_json(self.Tinf_product),
            "basepoint": [self.basepoint.real, self.basepoint.imag],
            "transport_tol": self.tol,
            "loops": {k: v.to_json() for k, v in self.loops.items()},
            "convention": "right composition; T0*T1*T2*Tinf = I",
        }


@dataclass
class SpectralData:
    eigenvalues: np.ndarray
    clusters: list                 # list of lists of eigenvalue indices
    jordan: list                   # per cluster: sorted block sizes
    diagnostics: dict = field(default_factory=dict)

    def blocks_for_value(self, value, tol=1e-6):
        for idx, bl in zip(self.clusters, self.jordan):
            if abs(self.eigenvalues[idx[0]] - value) < tol:
                return bl
        return None

    def to_json(self):
        return {
            "eigenvalues": [[z.real, z.imag] for z in self.eigenvalues],
            "clusters": self.clusters,
            "jordan_blocks": self.jordan,
            "diagnostics": self.diagnostics,
        }


def generators(fs: FuchsianSystem, tol=1e-12) -> MonodromySet:
    """Transport simple positive loops around each singularity plus the
    outer loop; verify nothing in the construction, just compute."""
    base = fs.basepoint
    pts = list(fs.points)
    loops = {
        "T0": keyhole_loop(base, fs.tau0, pts, label="tau0"),
        "T1": keyhole_loop(base, fs.tau1, pts, label="tau1"),
        "T2": keyhole_loop(base, fs.tau2, pts, label="tau2"),
        "Tinf": infinity_loop(base, pts),
    }
    T0 = transport(fs, loops["T0"], tol)
    T1 = transport(fs, loops["T1"], tol)
    T2 = transport(fs, loops["T2"], tol)
    Tinf = transport(fs, loops["Tinf"], tol)
    Tinf_product = np.linalg.inv(T1 @ T2)
    return MonodromySet(T0, T1, T2, Tinf, Tinf_product, base, tol, loops)


def _rank(M, rel_tol=RANK_TOL):
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rel_tol * s[0]))


def _cluster(eigs, tol):
    """Union-find grouping of eigenvalues within distance tol."""
    n = len(eigs)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(eigs[i] - eigs[j]) < tol:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: (eigs[g[0]].real, eigs[g[0]].imag))


def _jordan_blocks(T, lam, multiplicity, rel_tol=RANK_TOL):
    """Block sizes from ranks of powers of (T - lam I)."""
    n = T.shape[0]
    M = T - lam * np.eye(n)
    ranks = [n]
    power = np.eye(n, dtype=complex)
    for _ in range(multiplicity):
        power = power @ M
        ranks.append(_rank(power, rel_tol))
    # number of blocks of size >= k is ranks[k-1] - ranks[k]
    sizes = []
    for k in range(1, multiplicity + 1):
        count_ge_k = ranks[k - 1] - ranks[k]
        sizes.append(count_ge_k)
    blocks = []
    for k in range(multiplicity, 0, -1):
        exact = sizes[k - 1] - (sizes[k] if k < multiplicity else 0)
        blocks.extend([k] * exact)
    blocks = [b for b in blocks if b > 0]
    return sorted(blocks, reverse=True)


def spectral_analysis(T, tol=1e-6, cluster_tol=None) -> SpectralData:
    """Eigenvalues, clustering and Jordan structure of a nonsingular matrix."""
    T = np.asarray(T, dtype=complex)
    if abs(np.linalg.det(T)) < 1e-12:
        raise ValueError("matrix is numerically singular")
    eigs = np.linalg.eigvals(T)
    ctol = cluster_tol if cluster_tol is not None else max(tol, 1e-6) * max(1.0, np.max(np.abs(eigs)))
    clusters = _cluster(eigs, ctol)

    jordan = []
    for group in clusters:
        lam = np.mean(eigs[np.array(group)])
        jordan.append(_jordan_blocks(T, lam, len(group)))

    gaps = sorted(abs(a - b) for a, b in itertools.combinations(eigs, 2))
    diagnostics = {"cluster_tol": float(ctol),
                   "min_eigen_gap": float(gaps[0]) if gaps else np.inf}
    # ambiguity flag: a gap close to the clustering threshold means the
    # grouping is not robust; report the alternative clustering as well
    if gaps and 0.3 * ctol < gaps[0] < 3.0 * ctol:
        alt = _cluster(eigs, gaps[0] * 0.5)
        diagnostics["ambiguous"] = True
        diagnostics["alternative_clusters"] = alt
    return SpectralData(eigs, clusters, jordan, diagnostics)


def theoretical_spectrum(m: MassTriple) -> np.ndarray:
    """{e^{+-2 pi i lambda1}, e^{+-2 pi i lambda2}} from the mass data."""
    l1, l2 = m.lambda1, m.lambda2
    return np.array([
        np.exp(2j * np.pi * l1), np.exp(2j * np.pi * l2),
        np.exp(-2j * np.pi * l1), np.exp(-2j * np.pi * l2),
    ])


def matching_distance(spec_a, spec_b) -> float:
    """Optimal-assignment distance between two eigenvalue multisets
    (max metric over the best pairing)."""
    a = np.asarray(spec_a)
    b = np.asarray(spec_b)
    if a.shape != b.shape:
        raise ValueError("spectra must have equal length")
    best = np.inf
    for perm in itertools.permutations(range(len(b))):
        d = max(abs(a[i] - b[p]) for i, p in enumerate(perm))
        if d < best:
            best = d
    return float(best)


def unipotent_certificate(T, rel_tol=RANK_TOL):
    """(norm of (T-I)^2 relative to scale, rank of T-I)."""
    n = T.shape[0]
    N = T - np.eye(n)
    nn = N @ N
    scale = max(1.0, np.linalg.norm(N) ** 2)
    return float(np.linalg.norm(nn) / scale), _rank(N, rel_tol)


def determinant_consistency(fs: FuchsianSystem, mset: MonodromySet):
    """Abel identity det T_i = exp(2 pi i tr R_i) per singular point."""
    out = {}
    for name, T, R in (("T0", mset.T0, fs.A), ("T1", mset.T1, fs.B),
                       ("T2", mset.T2, fs.C)):
        expected = np.exp(2j * np.pi * np.trace(R))
        out[name] = abs(np.linalg.det(T) - expected)
    return out
