"""End-to-end non-integrability certificates and mass-space sweeps.

`certify` runs orbit construction, Fuchsian reduction and monodromy
transport for one mass triple and evaluates every spectral and
structural obstruction, packaging the results with residuals and
tolerances.  `sweep` samples the mass simplex and checks the universal
spectral obstruction (the outer-loop spectrum never collapses to all
ones) sample by sample; it transports the exact normal system directly,
which is faster than the full presentation and defined for every mass.
"""

from __future__ import annotations

import concurrent.futures
import math
import os
from dataclasses import dataclass, field, asdict

import numpy as np

from . import __version__ as _pkg_version
from .errors import Ziglin3Error
from .fuchsian import build_fuchsian
from .loops import infinity_loop, keyhole_loop
from .masses import MassTriple
from .monodromy import (MonodromySet, generators, matching_distance,
                        spectral_analysis, theoretical_spectrum,
                        unipotent_certificate)
from .orbit import solve_parametrization
from .polyspace import invariant_dimension, invariant_dimension_mp
from .serialize import dumps
from .transport import transport_matrix
from .variational import NormalFrame


@dataclass
class RunConfig:
    """Pipeline settings; all tolerances are positive."""

    tol_transport: float = 1e-12
    tol_residue: float = 1e-8
    tol_rank: float = 1e-6
    max_degree: int = 4
    mp_oracle: bool = True
    samples: int = 100
    seed: int = 7
    workers: int = 0          # 0 = logical cores
    orientation: int = 1

    def __post_init__(self):
        if min(self.tol_transport, self.tol_residue, self.tol_rank) <= 0:
            raise ValueError("tolerances must be positive")
        if not (1 <= self.max_degree <= 4):
            raise ValueError("degree bound must be in 1..4")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")

    def to_json(self):
        return asdict(self)


@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: float
    tolerance: float
    note: str = ""

    def to_json(self):
        return {"name": self.name, "pass": self.passed,
                "residual": self.residual, "tolerance": self.tolerance,
                "note": self.note}


@dataclass
class Certificate:
    masses: MassTriple
    config: RunConfig
    checks: list = field(default_factory=list)
    invariant_dimensions: dict = field(default_factory=dict)
    digests: dict = field(default_factory=dict)
    conventions: dict = field(default_factory=dict)
    error: dict = None

    @property
    def verdict(self) -> str:
        if self.error:
            return "error"
        return "pass" if all(c.passed for c in self.checks) else "fail"

    def check(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self):
        out = {
            "schema_version": 1,
            "masses": self.masses.to_json(),
            "config": self.config.to_json(),
            "checks": [c.to_json() for c in self.checks],
            "invariant_dimensions": self.invariant_dimensions,
            "digests": self.digests,
            "conventions": self.conventions,
            "verdict": self.verdict,
            "environment": environment_stamp(),
        }
        if self.error:
            out["error"] = self.error
        return out


def environment_stamp():
    import numpy
    import scipy
    import sys
    return {
        "package": f"ziglin3 {_pkg_version}",
        "numpy": numpy.__version__,
        "scipy": scipy.__version__,
        "python": sys.version.split()[0],
    }


def analytic_guard(theta: float):
    """The window [13, 25) for 13 + sqrt(theta) contains no odd square,
    so e^{2 pi i lambda1} can never equal 1; returns (ok, floor)."""
    root = math.sqrt(max(theta, 0.0))
    window_ok = 13.0 <= 13.0 + root < 25.0
    odd_squares = [k * k for k in range(1, 7, 2)]
    no_square = all(not (13.0 <= s < 25.0) for s in odd_squares)
    lam1 = 1.5 + 0.5 * math.sqrt(13.0 + root)
    floor = abs(np.exp(2j * np.pi * lam1) - 1.0)
    return window_ok and no_square, float(floor)


def _not_all_ones_threshold(config: RunConfig) -> float:
    return max(1e-4, 10.0 * config.tol_transport)


def _evaluate_checks(m: MassTriple, fs, mset: MonodromySet,
                     config: RunConfig) -> list:
    checks = []
    eye = np.eye(4)

    t0_res = float(np.linalg.norm(mset.T0 - eye, 2))
    checks.append(CheckResult("T0_identity", t0_res < 1e-7, t0_res, 1e-7))

    for name, T in (("T1_unipotent", mset.T1), ("T2_unipotent", mset.T2)):
        sq, rank = unipotent_certificate(T, config.tol_rank)
        ok = sq < 1e-7 and rank == 2
        checks.append(CheckResult(name, ok, sq, 1e-7,
                                  note=f"rank(T - I) = {rank}, want 2"))

    prod_res = float(np.linalg.norm(mset.T1 @ mset.T2
                                    - np.linalg.inv(mset.Tinf)))
    checks.append(CheckResult("product_relation", prod_res < 1e-7,
                              prod_res, 1e-7))

    spec = np.linalg.eigvals(mset.Tinf)
    match = matching_distance(spec, theoretical_spectrum(m))
    checks.append(CheckResult("spectrum_match", match < 1e-6, match, 1e-6))

    ones = np.ones(4, dtype=complex)
    thr = _not_all_ones_threshold(config)
    d_inf = matching_distance(spec, ones)
    checks.append(CheckResult("spectrum_not_all_ones", d_inf > thr,
                              d_inf, thr,
                              note="residual is the distance; pass needs > tolerance"))
    d_prod = matching_distance(np.linalg.eigvals(mset.T1 @ mset.T2), ones)
    checks.append(CheckResult("product_spectrum_not_all_ones", d_prod > thr,
                              d_prod, thr,
                              note="residual is the distance; pass needs > tolerance"))

    guard_ok, floor = analytic_guard(m.theta)
    checks.append(CheckResult("analytic_guard", guard_ok and d_inf > 0.5 * floor,
                              floor, 0.0,
                              note="no odd square in [13, 25); residual is the "
                                   "spectral floor from lambda1"))
    return checks


def _invariant_dimension_report(mset: MonodromySet, config: RunConfig):
    dims = {}
    agree = True
    worst = 0
    for d in range(1, config.max_degree + 1):
        dim, _ = invariant_dimension([mset.T1, mset.T2], d, config.tol_rank)
        dims[str(d)] = dim
        if config.mp_oracle:
            dim_mp = invariant_dimension_mp([mset.T1, mset.T2], d,
                                            rel_tol=config.tol_rank)
            agree = agree and (dim_mp == dim)
            worst = max(worst, abs(dim_mp - dim))
    note = "checked against high-precision kernel" if config.mp_oracle else \
        "oracle disabled"
    return dims, CheckResult("invariant_dimensions", agree, float(worst), 0.0,
                             note=note)


def certify(m: MassTriple, config: RunConfig = None) -> Certificate:
    """Full pipeline for one mass triple."""
    config = config or RunConfig()
    cert = Certificate(m, config)
    stage = "orbit"
    try:
        param = solve_parametrization(m, orientation=config.orientation)
        cert.digests["orbit"] = param.to_json()
        stage = "fuchsian"
        fs = build_fuchsian(param, residue_tol=config.tol_residue)
        cert.digests["fuchsian"] = {
            "singular_points": [[p.real, p.imag] for p in fs.points],
            "diagnostics": fs.diagnostics,
        }
        stage = "monodromy"
        mset = generators(fs, tol=config.tol_transport)
        cert.checks = _evaluate_checks(m, fs, mset, config)
        # precision ladder: marginal failures get one retry at tol/100
        marginal = [c for c in cert.checks if not c.passed
                    and c.tolerance > 0
                    and c.residual < 10.0 * c.tolerance]
        if marginal:
            mset = generators(fs, tol=config.tol_transport / 100.0)
            cert.checks = _evaluate_checks(m, fs, mset, config)
        cert.digests["monodromy"] = {
            "transport_tol": mset.tol,
            "basepoint": [mset.basepoint.real, mset.basepoint.imag],
        }
        stage = "invariants"
        dims, inv_check = _invariant_dimension_report(mset, config)
        cert.invariant_dimensions = dims
        cert.checks.append(inv_check)
        cert.conventions = {
            "loop_composition": "right composition; T0*T1*T2*Tinf = I",
            "orientation": config.orientation,
            "chart": fs.chart,
        }
    except Ziglin3Error as ex:
        cert.error = {"stage": stage, "message": str(ex)}
    return cert


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

def sample_masses(n: int, seed: int, floor: float = 1e-3,
                  total: float = 3.0):
    """Uniform samples on the mass simplex m1+m2+m3 = total, rejection-
    sampled against the floor; deterministic for a fixed seed."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        v = total * rng.dirichlet([1.0, 1.0, 1.0])
        if v.min() >= floor:
            out.append(MassTriple(*map(float, v)))
    return out


def outer_spectrum(m: MassTriple, tol=1e-10, orientation=1):
    """Spectrum of the outer-loop monodromy from the exact normal system.

    Transports the balanced-frame coefficients directly, with no
    Fuchsian-model error; defined for every positive mass triple.
    """
    param = solve_parametrization(m, orientation=orientation)
    frame = NormalFrame(param)
    wp, wm = param.roots()
    wv = complex(param.vertex())
    pts = [wv, wp, wm]
    centroid = sum(pts) / 3.0
    mean_dist = (abs(wp - wm) + abs(wp - wv) + abs(wm - wv)) / 3.0
    base = complex(centroid.real + mean_dist, centroid.imag)
    loop = infinity_loop(base, pts)
    T = transport_matrix(frame.normal_matrix, 4, loop.waypoints, tol=tol)
    return np.linalg.eigvals(T)


def sweep_row(m: MassTriple, config: RunConfig):
    """One sample of the universal-obstruction sweep."""
    thr = _not_all_ones_threshold(config)
    row = {
        "m1": m.m1, "m2": m.m2, "m3": m.m3,
        "theta": m.theta, "lambda1": m.lambda1, "lambda2": m.lambda2,
    }
    try:
        spec = outer_spectrum(m, tol=min(config.tol_transport * 100, 1e-10),
                              orientation=config.orientation)
        ones = np.ones(4, dtype=complex)
        dist = matching_distance(spec, ones)
        guard_ok, _ = analytic_guard(m.theta)
        theory = matching_distance(spec, theoretical_spectrum(m))
        row["min_eigdist_to_one"] = dist
        row["verdict"] = "pass" if (dist > thr and guard_ok
                                    and theory < 1e-6) else "fail"
        row["error"] = ""
    except Ziglin3Error as ex:
        row["min_eigdist_to_one"] = float("nan")
        row["verdict"] = "error"
        row["error"] = str(ex)
    return row


SWEEP_COLUMNS = ["m1", "m2", "m3", "theta", "lambda1", "lambda2",
                 "min_eigdist_to_one", "verdict", "error"]


def _sweep_worker(args):
    i, mass_tuple, config_dict = args
    m = MassTriple(*mass_tuple)
    config = RunConfig(**config_dict)
    return i, sweep_row(m, config)


def sweep(config: RunConfig):
    """Run the mass-simplex sweep; returns rows in sample order."""
    triples = sample_masses(config.samples, config.seed)
    workers = config.workers or os.cpu_count() or 1
    jobs = [(i, t.as_tuple(), config.to_json()) for i, t in enumerate(triples)]
    rows = [None] * len(jobs)
    if workers > 1 and len(jobs) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as ex:
            for i, row in ex.map(_sweep_worker, jobs, chunksize=4):
                rows[i] = row
    else:
        for job in jobs:
            i, row = _sweep_worker(job)
            rows[i] = row
    return rows


def sweep_csv(rows) -> str:
    lines = [",".join(SWEEP_COLUMNS)]
    for row in rows:
        vals = []
        for col in SWEEP_COLUMNS:
            v = row[col]
            vals.append(repr(v) if isinstance(v, float) else str(v))
        lines.append(",".join(vals))
    return "\n".join(lines) + "\n"


def sweep_summary(rows) -> dict:
    dists = [r["min_eigdist_to_one"] for r in rows
             if isinstance(r["min_eigdist_to_one"], float)
             and not math.isnan(r["min_eigdist_to_one"])]
    return {
        "samples": len(rows),
        "passes": sum(1 for r in rows if r["verdict"] == "pass"),
        "failures": sum(1 for r in rows if r["verdict"] == "fail"),
        "errors": sum(1 for r in rows if r["verdict"] == "error"),
        "min_eigdist_to_one": min(dists) if dists else float("nan"),
    }


def certificate_json(cert: Certificate) -> str:
    return dumps(cert.to_json())
