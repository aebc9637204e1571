"""Command-line front end.

Subcommands: certify, sweep, orbit, fuchsian, monodromy.  Exit codes:
0 all checks passed, 1 a check failed, 2 pipeline error, 64 usage error.
Errors are reported to stderr as a single JSON object.  Tolerances may
also be set through environment variables (ZIGLIN3_TOL_TRANSPORT,
ZIGLIN3_TOL_RESIDUE, ZIGLIN3_TOL_RANK), with precedence
flags > config file > environment > defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .certify import (RunConfig, certificate_json, certify, sweep,
                      sweep_csv, sweep_summary)
from .errors import Ziglin3Error
from .fuchsian import build_fuchsian
from .masses import MassTriple
from .monodromy import generators, spectral_analysis, theoretical_spectrum
from .orbit import residual as orbit_residual
from .orbit import solve_parametrization
from .serialize import dumps

EXIT_PASS = 0
EXIT_CHECK_FAILED = 1
EXIT_PIPELINE_ERROR = 2
EXIT_USAGE = 64

ENV_PREFIX = "ZIGLIN3_"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit_error(kind, message):
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")


def _parse_masses(text) -> MassTriple:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"expected three comma-separated masses, got {text!r}")
    try:
        vals = [float(p) for p in parts]
    except ValueError as ex:
        raise UsageError(f"bad mass value: {ex}")
    try:
        return MassTriple(*vals)
    except ValueError as ex:
        raise UsageError(str(ex))


def _env_default(name, fallback):
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None:
        return fallback
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"bad value for {ENV_PREFIX}{name}: {raw!r}")


def _load_config_file(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as ex:
        raise UsageError(f"cannot read config file {path}: {ex}")


def _build_config(args) -> RunConfig:
    file_cfg = _load_config_file(args.config) if args.config else {}

    def pick(flag_value, key, env_key, default):
        if flag_value is not None:
            return flag_value
        if key in file_cfg:
            return file_cfg[key]
        return _env_default(env_key, default)

    try:
        cfg = RunConfig(
            tol_transport=float(pick(args.tol_transport, "tol_transport",
                                     "TOL_TRANSPORT", 1e-12)),
            tol_residue=float(pick(args.tol_residue, "tol_residue",
                                   "TOL_RESIDUE", 1e-8)),
            tol_rank=float(pick(args.tol_rank, "tol_rank", "TOL_RANK", 1e-6)),
            max_degree=int(pick(getattr(args, "degree", None), "max_degree",
                                "MAX_DEGREE", 4)),
            samples=int(pick(getattr(args, "samples", None), "samples",
                             "SAMPLES", 100)),
            seed=int(pick(getattr(args, "seed", None), "seed", "SEED", 7)),
            workers=int(pick(getattr(args, "workers", None), "workers",
                             "WORKERS", 0)),
            mp_oracle=bool(file_cfg.get("mp_oracle", True)),
        )
    except ValueError as ex:
        raise UsageError(str(ex))
    return cfg


def _write_or_print(text, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_common(p, with_masses=True):
    if with_masses:
        p.add_argument("--masses", required=True,
                       help="three comma-separated positive masses, e.g. 1,2,3")
    p.add_argument("--tol-transport", type=float, default=None)
    p.add_argument("--tol-residue", type=float, default=None)
    p.add_argument("--tol-rank", type=float, default=None)
    p.add_argument("--config", default=None, help="JSON config file")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--plot", action="store_true",
                   help="also emit a self-contained plot script")


def make_parser():
    p = _Parser(prog="ziglin3",
                description="numerical non-integrability certificates for "
                            "the planar three-body problem near the "
                            "parabolic Lagrange orbit")
    sub = p.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("certify", help="full obstruction certificate")
    _add_common(pc)
    pc.add_argument("--degree", type=int, default=None,
                    help="polynomial invariant search degree bound (1..4)")

    ps = sub.add_parser("sweep", help="mass-simplex spectral sweep")
    _add_common(ps, with_masses=False)
    ps.add_argument("--samples", type=int, default=None)
    ps.add_argument("--seed", type=int, default=None)
    ps.add_argument("--workers", type=int, default=None)
    ps.add_argument("--format", choices=["csv", "json"], default="csv")

    po = sub.add_parser("orbit", help="parabolic Lagrange orbit constants")
    _add_common(po)

    pf = sub.add_parser("fuchsian", help="Fuchsian form of the normal system")
    _add_common(pf)

    pm = sub.add_parser("monodromy", help="monodromy generators and spectra")
    _add_common(pm)

    return p


def cmd_certify(args) -> int:
    cfg = _build_config(args)
    m = _parse_masses(args.masses)
    cert = certify(m, cfg)
    _write_or_print(certificate_json(cert), args.out)
    if args.plot:
        _emit_plot_script(args, m, what="certificate")
    if cert.error:
        _emit_error("pipeline", f"stage '{cert.error['stage']}': "
                                f"{cert.error['message']}")
        return EXIT_PIPELINE_ERROR
    return EXIT_PASS if cert.verdict == "pass" else EXIT_CHECK_FAILED


def cmd_sweep(args) -> int:
    cfg = _build_config(args)
    rows = sweep(cfg)
    summary = sweep_summary(rows)
    if args.format == "csv":
        _write_or_print(sweep_csv(rows), args.out)
    else:
        _write_or_print(dumps({"rows": rows, "summary": summary,
                               "config": cfg.to_json()}), args.out)
    sys.stdout.write(
        f"# sweep summary: samples={summary['samples']} "
        f"passes={summary['passes']} failures={summary['failures']} "
        f"errors={summary['errors']} "
        f"min_eigdist_to_one={summary['min_eigdist_to_one']!r}\n")
    if summary["errors"]:
        return EXIT_PIPELINE_ERROR
    return EXIT_PASS if summary["failures"] == 0 else EXIT_CHECK_FAILED


def cmd_orbit(args) -> int:
    cfg = _build_config(args)
    m = _parse_masses(args.masses)
    param = solve_parametrization(m)
    grid = [0.4 + 0.1 * j + (0.3j if j % 2 else -0.2j) for j in range(32)]
    worst = max(orbit_residual(param, w) for w in grid)
    payload = param.to_json()
    payload["residual"] = worst
    payload["config"] = cfg.to_json()
    _write_or_print(dumps(payload), args.out)
    if args.plot:
        _emit_plot_script(args, m, what="orbit")
    return EXIT_PASS


def cmd_fuchsian(args) -> int:
    cfg = _build_config(args)
    m = _parse_masses(args.masses)
    fs = build_fuchsian(solve_parametrization(m), residue_tol=cfg.tol_residue)
    payload = fs.to_json()
    payload["config"] = cfg.to_json()
    _write_or_print(dumps(payload), args.out)
    if args.plot:
        _emit_plot_script(args, m, what="fuchsian")
    return EXIT_PASS


def cmd_monodromy(args) -> int:
    cfg = _build_config(args)
    m = _parse_masses(args.masses)
    fs = build_fuchsian(solve_parametrization(m), residue_tol=cfg.tol_residue)
    mset = generators(fs, tol=cfg.tol_transport)
    payload = mset.to_json()
    payload["spectral"] = {
        "Tinf": spectral_analysis(mset.Tinf, cfg.tol_rank).to_json(),
        "theoretical": [[z.real, z.imag] for z in theoretical_spectrum(m)],
    }
    payload["config"] = cfg.to_json()
    _write_or_print(dumps(payload), args.out)
    if args.plot:
        _emit_plot_script(args, m, what="monodromy")
    return EXIT_PASS


def _emit_plot_script(args, m: MassTriple, what: str):
    """Write a self-contained matplotlib script next to the output."""
    base = args.out or f"ziglin3_{what}"
    path = base + ".plot.py" if not base.endswith(".plot.py") else base
    param = solve_parametrization(m)
    ws = np.linspace(-4.0, 4.0, 241)
    pts = [param.state(w) for w in ws]
    q1 = [float(p[0].real) for p in pts]
    q3 = [float(p[2].real) for p in pts]
    wp, wm = param.roots()
    wv = complex(param.vertex())
    spec = [complex(z) for z in theoretical_spectrum(m)]
    lines = [
        "#!/usr/bin/env python3",
        '"""Self-contained diagnostic plots (orbit geometry, singularity',
        'layout, unit-circle spectrum); data inlined."""',
        "import matplotlib.pyplot as plt",
        "import numpy as np",
        f"q1 = {q1!r}",
        f"q3 = {q3!r}",
        f"sing = {[(wv.real, wv.imag), (wp.real, wp.imag), (wm.real, wm.imag)]!r}",
        f"spec = {[(z.real, z.imag) for z in spec]!r}",
        "fig, axes = plt.subplots(1, 3, figsize=(13, 4))",
        "axes[0].plot(q1, q3); axes[0].set_title('orbit size vs height')",
        "axes[0].set_xlabel('q1'); axes[0].set_ylabel('q3')",
        "xs, ys = zip(*sing)",
        "axes[1].scatter(xs, ys, marker='x', c='red')",
        "axes[1].set_title('singular points (w chart)'); axes[1].axis('equal')",
        "th = np.linspace(0, 2*np.pi, 256)",
        "axes[2].plot(np.cos(th), np.sin(th), lw=0.5, c='gray')",
        "sx, sy = zip(*spec)",
        "axes[2].scatter(sx, sy, c='blue')",
        "axes[2].set_title('outer-loop spectrum on the unit circle')",
        "axes[2].axis('equal')",
        "plt.tight_layout(); plt.savefig('ziglin3_plots.png', dpi=150)",
        "print('wrote ziglin3_plots.png')",
    ]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as ex:
        _emit_error("usage", str(ex))
        return EXIT_USAGE
    handlers = {
        "certify": cmd_certify,
        "sweep": cmd_sweep,
        "orbit": cmd_orbit,
        "fuchsian": cmd_fuchsian,
        "monodromy": cmd_monodromy,
    }
    try:
        return handlers[args.command](args)
    except UsageError as ex:
        _emit_error("usage", str(ex))
        return EXIT_USAGE
    except Ziglin3Error as ex:
        _emit_error(type(ex).__name__, str(ex))
        return EXIT_PIPELINE_ERROR


if __name__ == "__main__":
    sys.exit(main())
