"""Acceptance criteria. Each test prints one ``CRITERION n: PASS|FAIL`` line.

Run directly (``python tests/test_acceptance.py``) for the summary alone.
"""
import contextlib
import io
import math
import time

import numpy as np
import pytest

from twistbeam import beam as bm
from twistbeam import cli
from twistbeam import forces as fc
from twistbeam import photoexcite as pe
from twistbeam import verify as vf

ATOM = pe.AtomConfig()


@pytest.fixture
def report(capsys):
    def _report(n, title, ok, detail=""):
        line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'} {title}" + (f" [{detail}]" if detail else "")
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
    return _report


def criterion_1():
    pe.atomic_factor_g.cache_clear()
    t0 = time.perf_counter()
    beam = bm.BeamParams.from_pitch(0.2, 0, 1)
    argv = ["scan-amplitude", "--m-gamma", "0", "--lambda", "1", "--pitch", "0.2", "--nf", "2", "--lf", "1",
            "--mf", "-1", "--mf", "0", "--mf", "1", "--b-max", "3", "--n-points", "64"]
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli.main(argv)
    rows = [r.split(",") for r in buf.getvalue().splitlines()[2:]]
    m0 = [abs(float(r[4])) for r in rows if int(r[1]) == 0]
    b0_peak, v0 = pe.locate_peak(beam, ATOM, pe.AtomicOrbital(2, 1, 0))
    zero = pe.locate_first_zero(beam, ATOM, pe.AtomicOrbital(2, 1, 0))
    at_origin_1 = abs(pe.amplitude_localized(beam, ATOM, pe.AtomicOrbital(2, 1, 1), 0.0).value)
    b1_peak, v1 = pe.locate_peak(beam, ATOM, pe.AtomicOrbital(2, 1, 1))
    ratio = v0 / v1
    elapsed = time.perf_counter() - t0
    ok = (code == 0 and len(rows) == 192 and int(np.argmax(m0)) == 0 and b0_peak == 0.0
          and abs(zero - 1.927) <= 0.02 and at_origin_1 == 0.0 and abs(b1_peak - 1.475) <= 0.02
          and abs(ratio - 0.2439) <= 1e-3 and elapsed < 10)
    detail = f"zero={zero:.4f} peak1={b1_peak:.4f} ratio={ratio:.6f} t={elapsed:.2f}s"
    return ok, detail


def criterion_2():
    beam = bm.BeamParams.from_pitch(0.2, 1, 1)
    final = pe.AtomicOrbital(2, 1, 1)
    b_peak, v_peak = pe.locate_peak(beam, ATOM, final)
    g = pe.atomic_factor_g(final, 1, beam, ATOM)
    plane = abs(pe._rel_prefactor(beam, ATOM) * math.cos(0.1) ** 2 * g)
    dev = abs(v_peak / plane - 1)
    return b_peak == 0.0 and dev <= 0.02, f"peak at b={b_peak}, |M|/plane-wave={v_peak / plane:.8f}"


def criterion_3():
    res = vf.suite_dipole()
    vals = {c["name"]: c["value"] for c in res}
    return all(c["passed"] for c in res), ", ".join(f"{k}={v:.2e}" for k, v in vals.items())


def criterion_4(seed=2024):
    rng = np.random.default_rng(seed)
    zeros = 0
    n = 0
    while n < 50:
        m_r, m_r2, m_g, m_f = (int(rng.integers(-4, 5)), int(rng.integers(-4, 5)),
                               int(rng.integers(-3, 4)), int(rng.integers(-1, 2)))
        if m_r2 - m_r == m_g - m_f:
            continue
        n += 1
        beam = bm.BeamParams.from_pitch(float(rng.uniform(0.1, 1.0)), m_g, int(rng.choice([-1, 1])))
        lam = beam.wavelength
        ci = pe.gaussian_ring(0.7 * lam, 0.02 * lam, m_R=m_r)
        cf = pe.gaussian_ring(0.7 * lam, 0.02 * lam, m_R=m_r2)
        zeros += pe.amplitude_lz(beam, ATOM, pe.AtomicOrbital(2, 1, m_f), ci, cf).value == 0j
    worst = 0.0
    for m_g, m_f in ((0, 0), (0, 1), (0, -1), (1, 1), (1, 0)):
        beam = bm.BeamParams.from_pitch(0.2, m_g, 1)
        lam = beam.wavelength
        final = pe.AtomicOrbital(2, 1, m_f)
        for bl in (0.3, 0.9, 1.5):
            ci = pe.gaussian_ring(bl * lam, 0.02 * lam)
            cf = pe.gaussian_ring(bl * lam, 0.02 * lam, m_R=m_g - m_f)
            lz = abs(pe.amplitude_lz(beam, ATOM, final, ci, cf).value)
            loc = abs(pe.amplitude_localized(beam, ATOM, final, bl * lam).value)
            worst = max(worst, abs(lz - loc) / loc)
    return zeros == 50 and worst <= 1e-3, f"exact zeros {zeros}/50, worst localized deviation {worst:.2e}"


def criterion_5():
    res = vf.suite_basis()
    return all(c["passed"] for c in res), ", ".join(f"{c['name']}={c['value']:.1e}" for c in res)


def criterion_6():
    worst_pot = 0.0
    for m, lam, th in ((0, 1, 0.2), (1, 1, 0.6), (-2, -1, 1.1)):
        beam = bm.BeamParams.from_pitch(th, m, lam)
        L = beam.wavelength
        r, p, z = np.meshgrid(np.linspace(0, 3 * L, 10), np.linspace(0, 2 * math.pi, 10, endpoint=False),
                              np.linspace(-L, L, 10), indexing="ij")
        pts = (r.ravel(), p.ravel(), z.ravel())
        a = bm.vector_potential_closed(beam, *pts).components
        ai = bm.vector_potential_integral(beam, *pts, n_phi=512).components
        worst_pot = max(worst_pot, float(np.max(np.abs(a - ai)) / np.max(np.abs(a))))
    curl = [c for c in vf.suite_fields() if c["name"] == "analytic_vs_fd_curl"][0]
    ok = worst_pot <= 1e-10 and curl["passed"]
    return ok, f"potential {worst_pot:.1e}, curl {curl['value']:.1e}"


def criterion_7():
    checks = []
    for lam in (1, -1):
        checks += vf.tractor_checks(helicity=lam)
    failed = [c["name"] for c in checks if not c["passed"]]
    worst = max(c["value"] for c in checks if c["tolerance"] > 0)
    return not failed, f"{len(checks)} checks, worst ratio deviation {worst:.1e}" + (f", failed {failed}" if failed else "")


def criterion_8():
    res = vf.suite_forces()
    ident = res[0]
    return ident["passed"], f"worst relative residual {ident['value']:.1e} over 200 points"


def criterion_9():
    lines = []
    ok = True
    for m_g in (-1, 1):
        beam = bm.BeamParams.from_pitch(0.3, m_g, 1)
        L = beam.wavelength
        ratios = []
        for frac in (0.001, 0.0025, 0.005, 0.01):
            disk = fc.DiskGeometry(frac * L)
            f = fc.force_absorptive_disk(beam, disk)
            ok &= f > 0
            ratios.append(f / (disk.area * fc.on_axis_intensity(beam)))
        spread = max(abs(r / ratios[0] - 1) for r in ratios)
        ok &= spread <= 1e-2 and ratios[0] > 0
        lines.append(f"m={m_g}: F/(area I)={ratios[0]:.6e} spread {spread:.1e}")
    return bool(ok), "; ".join(lines)


def criterion_10():
    worst = 0.0
    scaling = []
    for mass_ratio in (pe.PROTON_ELECTRON_MASS_RATIO, pe.PROTON_ELECTRON_MASS_RATIO / 2):
        atom = pe.AtomConfig(mass_ratio=mass_ratio)
        for m_g in (0, 1):
            beam = bm.BeamParams.from_pitch(0.2, m_g, 1)
            L = beam.wavelength
            for m_f in (-1, 0, 1):
                final = pe.AtomicOrbital(2, 1, m_f)
                for width in (0.1, 0.3, 1.0):
                    ci = pe.gaussian_ring(0.8 * L, width * L)
                    cf = pe.gaussian_ring(0.8 * L, width * L, m_R=m_g - m_f)
                    rel = pe.amplitude_lz(beam, atom, final, ci, cf).value
                    cm = pe.amplitude_cm(beam, atom, final, ci, cf).value
                    ratio = abs(cm / rel)
                    worst = max(worst, ratio)
                    if m_g == 0 and m_f == -1 and width == 0.3:
                        scaling.append(ratio * atom.M)
    consistent = abs(scaling[0] / scaling[1] - 1) < 1e-2
    return worst < 1e-2 and consistent, f"max |M_cm/M_rel|={worst:.2e}, ratio*M constant to {abs(scaling[0] / scaling[1] - 1):.1e}"


CRITERIA = {
    1: ("m_gamma=0 amplitude curve features", criterion_1),
    2: ("m_gamma=1 peak matches plane-wave bracket", criterion_2),
    3: ("dipole-limit atomic factor", criterion_3),
    4: ("L_Z selection rule and localized limit", criterion_4),
    5: ("TE/TM and helicity-mode equivalence", criterion_5),
    6: ("closed vs plane-wave-sum potential, curl", criterion_6),
    7: ("on-axis tractor resolution", criterion_7),
    8: ("force decomposition identity", criterion_8),
    9: ("small absorptive disk", criterion_9),
    10: ("CM-derivative term is small", criterion_10),
}


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, report):
    title, func = CRITERIA[n]
    ok, detail = func()
    report(n, title, ok, detail)


if __name__ == "__main__":
    failures = 0
    for n in sorted(CRITERIA):
        title, func = CRITERIA[n]
        ok, detail = func()
        failures += not ok
        print(f"CRITERION {n}: {'PASS' if ok else 'FAIL'} {title} [{detail}]")
    raise SystemExit(1 if failures else 0)
