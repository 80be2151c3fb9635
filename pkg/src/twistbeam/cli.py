"""Command-line interface.

Lengths given on the command line (impact parameter, rho, z) are in photon
wavelengths; the conversion to Bohr radii is recorded in a leading ``#``
comment line of every CSV.  Values from ``--config FILE`` (JSON, keys as
the long flag names with underscores) are overridden by explicit flags.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields

import numpy as np

from . import beam as bm
from . import forces as fc
from . import photoexcite as pe
from . import verify as vf
from .mathcore import LYMAN_ALPHA_K, InvalidQuantumNumbers, QuadratureError, QuadratureSpec

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_QUADRATURE = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str = ""
    m_gamma: int = 0
    helicity: int = 1
    pitch: float = 0.2
    k: float = LYMAN_ALPHA_K
    e0: float = 1.0
    nf: int = 2
    lf: int = 1
    mf: list = field(default_factory=lambda: [-1, 0, 1])
    b_max: float = 3.0
    n_points: int = 64
    n_radial: int = 96
    n_angular: int = 48
    no_mass_ratio: bool = False
    rho_max: float = 3.0
    report_negative: bool = False
    rho: float = 0.0
    phi: float = 0.0
    z: float = 0.0
    alpha_re: float = 1.0
    alpha_im: float = 1.0
    decompose: bool = False
    fd_step: float = 1e-4
    pitches: list = field(default_factory=lambda: [0.05, 0.2, 0.5, 1.0])
    suite: str = "all"
    output: str | None = None
    format: str = "csv"

    def beam(self) -> bm.BeamParams:
        return bm.BeamParams.from_pitch(self.pitch, self.m_gamma, self.helicity, k=self.k, e0=self.e0)

    def quad(self) -> QuadratureSpec:
        return QuadratureSpec(self.n_radial, self.n_angular)

    def atom(self) -> pe.AtomConfig:
        return pe.AtomConfig(include_mass_ratio=not self.no_mass_ratio)


def merge_config(flags: dict, config_file: dict | None = None) -> RunConfig:
    known = {f.name for f in fields(RunConfig)}
    values = {}
    for source in (config_file or {}, flags):
        for key, val in source.items():
            key = key.replace("-", "_")
            if key == "lambda":
                key = "helicity"
            if key not in known:
                raise ValueError(f"unknown configuration key {key!r}")
            values[key] = val
    cfg = RunConfig(**values)
    cfg.beam()  # re-check physical invariants after the merge
    return cfg


# ---------------------------------------------------------------------------
# number formatting
# ---------------------------------------------------------------------------

def fmt(x) -> str:
    """Decimal text with 17 significant digits."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".16e")


def to_json(obj) -> str:
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {to_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    if isinstance(obj, complex):
        return to_json([obj.real, obj.imag])
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    return fmt(obj)


def _thread_count() -> int:
    env = os.environ.get("TWISTBEAM_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output:
        with open(cfg.output, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _provenance(cfg: RunConfig, beam: bm.BeamParams) -> str:
    return (f"# m_gamma={beam.m_gamma} lambda={beam.helicity} pitch={fmt(beam.theta_k)} "
            f"k={fmt(beam.k)} wavelength_a0={fmt(beam.wavelength)}\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_scan_amplitude(cfg: RunConfig) -> int:
    beam = cfg.beam()
    atom, quad = cfg.atom(), cfg.quad()
    for m_f in cfg.mf:
        pe.AtomicOrbital(cfg.nf, cfg.lf, m_f)
    b_grid = np.linspace(0.0, cfg.b_max, cfg.n_points)

    def one(m_f):
        return pe.scan_amplitudes(beam, atom, cfg.nf, cfg.lf, [m_f], b_grid, quad)

    with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        chunks = list(pool.map(one, cfg.mf))
    records = [r for chunk in chunks for r in chunk]
    if cfg.format == "json":
        rows = [{"b_over_lambda": r.b, "m_f": r.m_f, "re_amp": r.value.real, "im_amp": r.value.imag,
                 "abs_amp": abs(r.value)} for r in records]
        _emit(cfg, to_json({"wavelength_a0": beam.wavelength, "rows": rows}) + "\n")
        return EXIT_OK
    lines = [_provenance(cfg, beam), "b_over_lambda,m_f,re_amp,im_amp,abs_amp\n"]
    for r in records:
        lines.append(f"{fmt(r.b)},{r.m_f},{fmt(r.value.real)},{fmt(r.value.imag)},{fmt(abs(r.value))}\n")
    _emit(cfg, "".join(lines))
    return EXIT_OK


def negative_sz_intervals(beam: bm.BeamParams, rho_max: float, n: int = 2000):
    """Intervals of rho/lambda in [0, rho_max] where the closed-form S_z < 0."""
    from scipy.optimize import brentq

    lam = beam.wavelength
    sz = lambda r: float(bm.poynting_closed(beam, r * lam)[2])
    grid = np.linspace(0.0, rho_max, n)
    vals = bm.poynting_closed(beam, grid * lam)[2]
    tiny = 1e-14 * np.max(np.abs(vals))
    neg = vals < -tiny
    out = []
    i = 0
    while i < n:
        if not neg[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and neg[j + 1]:
            j += 1
        lo = grid[i] if i == 0 else brentq(sz, grid[i - 1], grid[i], xtol=1e-12) if vals[i - 1] > 0 else grid[i]
        hi = grid[j] if j == n - 1 else brentq(sz, grid[j], grid[j + 1], xtol=1e-12) if vals[j + 1] > 0 else grid[j]
        out.append((float(lo), float(hi)))
        i = j + 1
    return out


def cmd_poynting_map(cfg: RunConfig) -> int:
    beam = cfg.beam()
    grid = np.linspace(0.0, cfg.rho_max, cfg.n_points)
    s_rho, s_phi, s_z = bm.poynting_closed(beam, grid * beam.wavelength)
    if cfg.format == "json":
        rows = [{"rho_over_lambda": r, "s_rho": a, "s_phi": b, "s_z": c} for r, a, b, c in zip(grid, s_rho, s_phi, s_z)]
        _emit(cfg, to_json({"rows": rows}) + "\n")
    else:
        lines = [_provenance(cfg, beam), "rho_over_lambda,s_rho,s_phi,s_z\n"]
        lines += [f"{fmt(r)},{fmt(a)},{fmt(b)},{fmt(c)}\n" for r, a, b, c in zip(grid, s_rho, s_phi, s_z)]
        _emit(cfg, "".join(lines))
    if cfg.report_negative:
        intervals = negative_sz_intervals(beam, cfg.rho_max)
        sys.stderr.write(to_json({"negative_s_z_intervals": [list(iv) for iv in intervals]}) + "\n")
    return EXIT_OK


def cmd_field_sample(cfg: RunConfig) -> int:
    beam = cfg.beam()
    lam = beam.wavelength
    fs = bm.field_sample(beam, cfg.rho * lam, cfg.phi, cfg.z * lam)

    def vec(v):
        return [[complex(c).real, complex(c).imag] for c in v.components]

    out = {"rho_over_lambda": cfg.rho, "phi": cfg.phi, "z_over_lambda": cfg.z, "basis": "cartesian",
           "A0": vec(fs.A0), "E0": vec(fs.E0), "B0": vec(fs.B0)}
    _emit(cfg, to_json(out) + "\n")
    return EXIT_OK


def cmd_force(cfg: RunConfig) -> int:
    if cfg.alpha_im < 0:
        raise ValueError("Im(alpha) must be non-negative")
    beam = cfg.beam()
    part = fc.ParticleResponse(complex(cfg.alpha_re, cfg.alpha_im))
    lam = beam.wavelength
    args = (beam, part, cfg.rho * lam, cfg.phi, cfg.z * lam, cfg.fd_step)
    if cfg.decompose:
        fb = fc.force_decomposition(*args)
        out = {"basis": "cylindrical", "total": fb.total, "gradient": fb.gradient,
               "poynting": fb.poynting, "spin_curl": fb.spin_curl}
    else:
        out = {"basis": "cylindrical", "total": fc.force_dipole(*args)}
    _emit(cfg, to_json(out) + "\n")
    return EXIT_OK


def cmd_tractor_check(cfg: RunConfig) -> int:
    part = fc.ParticleResponse(complex(cfg.alpha_re, cfg.alpha_im))
    rows = []
    for th in cfg.pitches:
        beam = bm.BeamParams.from_pitch(th, -cfg.helicity, cfg.helicity, k=cfg.k, e0=cfg.e0)
        row = vf.tractor_row(beam, part)
        row["passed"] = bool(row["s_z"] < 0 < row["f_z"] and abs(row["f_z_ratio"] - math.cos(th)) <= 1e-6)
        rows.append(row)
    passed = all(r["passed"] for r in rows)
    _emit(cfg, to_json({"rows": rows, "passed": passed}) + "\n")
    return EXIT_OK if passed else EXIT_FAIL


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.suite not in vf.SUITES + ("all",):
        print(f"twistbeam: unknown suite {cfg.suite!r}", file=sys.stderr)
        return EXIT_USAGE
    report = vf.run_suite(cfg.suite)
    _emit(cfg, to_json(report) + "\n")
    return EXIT_OK if report["passed"] else EXIT_FAIL


COMMANDS = {
    "scan-amplitude": cmd_scan_amplitude,
    "poynting-map": cmd_poynting_map,
    "field-sample": cmd_field_sample,
    "force": cmd_force,
    "tractor-check": cmd_tractor_check,
    "verify": cmd_verify,
}


def _beam_flags(p):
    p.add_argument("--m-gamma", type=int)
    p.add_argument("--lambda", dest="helicity", type=int, choices=(1, -1))
    p.add_argument("--pitch", type=float, help="pitch angle theta_k in radians")
    p.add_argument("--k", type=float, help="photon wavenumber in 1/a0 (default: 1S-2P)")
    p.add_argument("--e0", type=float)


def _common(p):
    p.add_argument("--config", help="JSON file with default values")
    p.add_argument("--output", "-o")
    p.add_argument("--format", choices=("csv", "json"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twistbeam", argument_default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan-amplitude", argument_default=argparse.SUPPRESS,
                       help="1S -> n_f l_f m_f amplitudes versus impact parameter")
    _common(p)
    _beam_flags(p)
    p.add_argument("--nf", type=int)
    p.add_argument("--lf", type=int)
    p.add_argument("--mf", type=int, action="append")
    p.add_argument("--b-max", type=float, help="largest impact parameter, wavelengths")
    p.add_argument("--n-points", type=int)
    p.add_argument("--n-radial", type=int)
    p.add_argument("--n-angular", type=int)
    p.add_argument("--no-mass-ratio", action="store_true", help="set the m_p/M factors to 1")

    p = sub.add_parser("poynting-map", argument_default=argparse.SUPPRESS, help="closed-form S versus rho")
    _common(p)
    _beam_flags(p)
    p.add_argument("--rho-max", type=float)
    p.add_argument("--n-points", type=int)
    p.add_argument("--report-negative", action="store_true")

    p = sub.add_parser("field-sample", argument_default=argparse.SUPPRESS, help="A0, E0, B0 at one point")
    _common(p)
    _beam_flags(p)
    for name in ("--rho", "--phi", "--z"):
        p.add_argument(name, type=float)

    p = sub.add_parser("force", argument_default=argparse.SUPPRESS, help="dipole force on a small particle")
    _common(p)
    _beam_flags(p)
    for name in ("--rho", "--phi", "--z", "--alpha-re", "--alpha-im", "--fd-step"):
        p.add_argument(name, type=float)
    p.add_argument("--decompose", action="store_true")

    p = sub.add_parser("tractor-check", argument_default=argparse.SUPPRESS,
                       help="on-axis S_z and F_z for m_gamma = -Lambda")
    _common(p)
    p.add_argument("--lambda", dest="helicity", type=int, choices=(1, -1))
    p.add_argument("--k", type=float)
    p.add_argument("--pitches", type=float, nargs="+")
    p.add_argument("--alpha-re", type=float)
    p.add_argument("--alpha-im", type=float)

    p = sub.add_parser("verify", argument_default=argparse.SUPPRESS, help="run an invariant suite")
    _common(p)
    p.add_argument("--suite", help="one of " + ", ".join(vf.SUITES + ("all",)))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = vars(parser.parse_args(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    command = ns.pop("command")
    config_path = ns.pop("config", None)
    try:
        file_values = {}
        if config_path:
            with open(config_path) as fh:
                file_values = json.load(fh)
            file_values.pop("command", None)
        cfg = merge_config(dict(ns, command=command), file_values)
        return COMMANDS[command](cfg)
    except QuadratureError as exc:
        print(f"twistbeam: quadrature failure: {exc}", file=sys.stderr)
        return EXIT_QUADRATURE
    except (InvalidQuantumNumbers, ValueError, TypeError, OSError) as exc:
        print(f"twistbeam: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
