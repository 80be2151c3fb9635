"""Self-verification suites run by ``twistbeam verify``.

Each suite returns a list of check dicts: name, value, tolerance, passed.
"""
from __future__ import annotations

import math

import numpy as np

from . import beam as bm
from . import forces as fc
from . import photoexcite as pe

SUITES = ("basis", "fields", "dipole", "forces")


def _check(name, value, tol):
    value = float(value)
    return {"name": name, "value": value, "tolerance": tol, "passed": bool(value <= tol)}


def _random_points(beam, rng, n, rho_max=3.0):
    lam = beam.wavelength
    return (rng.uniform(0, rho_max * lam, n), rng.uniform(0, 2 * math.pi, n), rng.uniform(-lam, lam, n))


def _rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b)) / np.max(np.abs(b)))


def suite_basis(seed=0, n_points=100, tol=1e-12):
    rng = np.random.default_rng(seed)
    worst_te = worst_tm = worst_inv = worst_long = 0.0
    for m in (-2, -1, 0, 1, 3):
        beam = bm.BeamParams.from_pitch(rng.uniform(0.05, 1.2), m, 1, e0=rng.uniform(0.5, 2.0))
        unit = {lam: bm.BeamParams(beam.kappa, beam.k_z, m, lam, 1.0) for lam in (1, -1)}
        pts = _random_points(beam, rng, n_points)
        a_p = bm.vector_potential_closed(unit[1], *pts).components
        a_m = bm.vector_potential_closed(unit[-1], *pts).components
        scale = beam.e0 / beam.k_z * math.sqrt(math.pi / beam.kappa)
        te = bm.te_mode(beam, *pts)
        tm = bm.tm_mode(beam, *pts)
        worst_te = max(worst_te, _rel(te.components, scale * (a_p + a_m)))
        worst_tm = max(worst_tm, _rel(tm.components, -1j * scale * (a_p - a_m)))
        worst_long = max(worst_long, float(np.max(np.abs(te.to_helicity().components[2]))))
        rp, rm = bm.helicity_from_te_tm(beam, te, tm)
        worst_inv = max(worst_inv, _rel(rp.components, a_p), _rel(rm.components, a_m))
    return [
        _check("te_equals_helicity_sum", worst_te, tol),
        _check("tm_equals_helicity_difference", worst_tm, tol),
        _check("te_has_no_longitudinal_part", worst_long, tol),
        _check("relations_invert", worst_inv, tol),
    ]


def suite_fields(seed=0, tol_potential=1e-10, tol_curl=1e-6):
    rng = np.random.default_rng(seed)
    worst_pot = worst_curl = worst_div = 0.0
    for m, lam in ((0, 1), (1, 1), (-1, 1), (2, -1)):
        beam = bm.BeamParams.from_pitch(rng.uniform(0.1, 1.0), m, lam)
        pts = _random_points(beam, rng, 50)
        a = bm.vector_potential_closed(beam, *pts).components
        ai = bm.vector_potential_integral(beam, *pts, n_phi=512).components
        worst_pot = max(worst_pot, float(np.max(np.abs(a - ai)) / beam.norm))
        b = bm.magnetic_field(beam, *pts).components
        bf = bm.curl_fd(beam, *pts, h=1e-4 * beam.wavelength)
        worst_curl = max(worst_curl, float(np.max(np.abs(b - bf) / np.linalg.norm(b, axis=0))))
        div = bm.divergence_E(beam, *pts)
        worst_div = max(worst_div, float(np.max(np.abs(div)) / (beam.omega * beam.norm * beam.k)))
    return [
        _check("closed_vs_plane_wave_sum", worst_pot, tol_potential),
        _check("analytic_vs_fd_curl", worst_curl, tol_curl),
        _check("transversality", worst_div, 1e-8),
    ]


def suite_dipole(tol=1e-6):
    atom = pe.AtomConfig()
    out = []
    for scale, tol_here, name in ((1.0, 1e-4, "physical_k"), (0.1, tol, "k_over_10")):
        beam = bm.BeamParams.from_pitch(0.2, 0, 1, k=bm.LYMAN_ALPHA_K * scale)
        g0 = pe.atomic_factor_g(pe.AtomicOrbital(2, 1, 0), 0, beam, atom).real
        g1 = pe.atomic_factor_g(pe.AtomicOrbital(2, 1, 1), 1, beam, atom).real
        if scale == 1.0:
            out.append(_check("g2100_vs_closed_form", abs(g0 - pe.dipole_g_21()), tol_here))
            out.append(_check("g2111_vs_closed_form", abs(g1 - pe.dipole_g_21()), tol_here))
        else:
            out.append(_check("g_ratio_" + name, abs(g0 / g1 - 1), tol_here))
    return out


def suite_forces(seed=0, n_points=200, tol=1e-9):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_points):
        beam = bm.BeamParams.from_pitch(rng.uniform(0.1, 1.2), int(rng.integers(-3, 4)), int(rng.choice([-1, 1])))
        part = fc.ParticleResponse(complex(rng.normal(), rng.uniform(0.01, 1.0)))
        lam = beam.wavelength
        fb = fc.force_decomposition(beam, part, rng.uniform(0.05, 3.0) * lam, rng.uniform(0, 2 * math.pi),
                                    rng.uniform(-1, 1) * lam)
        worst = max(worst, float(np.linalg.norm(fb.residual) / np.linalg.norm(fb.total)))
    checks = [_check("decomposition_identity", worst, tol)]
    checks.extend(tractor_checks())
    return checks


def tractor_checks(pitches=(0.05, 0.2, 0.5, 1.0), helicity=1, tol=1e-6):
    out = []
    part = fc.ParticleResponse(0.3 + 0.7j)
    for th in pitches:
        beam = bm.BeamParams.from_pitch(th, -helicity, helicity)
        row = tractor_row(beam, part)
        out.append({"name": f"S_z<0 at pitch {th}", "value": row["s_z"], "tolerance": 0.0,
                    "passed": row["s_z"] < 0})
        out.append({"name": f"F_z>0 at pitch {th}", "value": row["f_z"], "tolerance": 0.0,
                    "passed": row["f_z"] > 0})
        out.append(_check(f"F_z/(sigma I)=cos at pitch {th}", abs(row["f_z_ratio"] - math.cos(th)), tol))
        out.append(_check(f"poynting term at pitch {th}", abs(row["poynting_ratio"] + 1), tol))
        out.append(_check(f"spin-curl term at pitch {th}",
                          abs(row["spin_curl_ratio"] - 2 * math.cos(th / 2) ** 2), tol))
    return out


def tractor_row(beam, part):
    fb = fc.force_decomposition(beam, part, 0.0, 0.0, 0.0)
    si = part.sigma(beam) * fc.on_axis_intensity(beam)
    return {
        "pitch": beam.theta_k,
        "s_z": float(bm.poynting_closed(beam, 0.0)[2]),
        "s_z_fields": float(bm.poynting_fields(beam, 0.0, 0.0, 0.0)[2]),
        "f_z": float(fb.total[2]),
        "f_z_ratio": float(fb.total[2] / si),
        "poynting_ratio": float(fb.poynting[2] / si),
        "spin_curl_ratio": float(fb.spin_curl[2] / si),
    }


def run_suite(name: str) -> dict:
    funcs = {"basis": suite_basis, "fields": suite_fields, "dipole": suite_dipole, "forces": suite_forces}
    names = SUITES if name == "all" else (name,)
    if any(n not in funcs for n in names):
        raise KeyError(name)
    report = {"suite": name, "results": {}}
    for n in names:
        checks = funcs[n]()
        report["results"][n] = {"passed": all(c["passed"] for c in checks), "checks": checks}
    report["passed"] = all(r["passed"] for r in report["results"].values())
    return report
