import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistbeam import beam as bm
from twistbeam import photoexcite as pe
from twistbeam.mathcore import (
    InvalidQuantumNumbers,
    QuadratureError,
    QuadratureSpec,
    gauss_legendre,
    gauss_legendre_interval,
    hydrogen_radial,
    hydrogen_radial_deriv,
)

ATOM = pe.AtomConfig()
BEAM_M0 = bm.BeamParams.from_pitch(0.2, 0, 1)


def _y1(m, theta, phi):
    # explicit l = 1 harmonics, kept independent of the library's Legendre recursion
    if m == 0:
        return math.sqrt(3 / (4 * math.pi)) * np.cos(theta) + 0j * phi
    return -m * math.sqrt(3 / (8 * math.pi)) * np.sin(theta) * np.exp(1j * m * phi)


def direct_amplitude(beam, atom, final, b, phi_b=0.0, nr=96, nt=48, nphi=64):
    """-e1 <f| A(R_cm + (m_p/M) r) . p |1S> by brute-force 3-D quadrature."""
    r, wr = gauss_legendre_interval(nr, 0.0, 80.0)
    u, wu = gauss_legendre(nt)
    ph = np.arange(nphi) * 2 * math.pi / nphi
    R, U, P = np.meshgrid(r, u, ph, indexing="ij")
    W = wr[:, None, None] * wu[None, :, None] * (2 * math.pi / nphi) * R**2
    S = np.sqrt(1 - U**2)
    rhat = np.stack([S * np.cos(P), S * np.sin(P), U])
    q = atom.ratio_pM
    x = b * math.cos(phi_b + math.pi) + q * R * rhat[0]
    y = b * math.sin(phi_b + math.pi) + q * R * rhat[1]
    A = bm.vector_potential_closed(beam, np.hypot(x, y), np.arctan2(y, x), q * R * rhat[2]).components
    grad_i = hydrogen_radial_deriv(1, 0, R) / math.sqrt(4 * math.pi) * rhat
    psi_f = hydrogen_radial(final.n, 1, R) * _y1(final.m, np.arccos(U), P)
    overlap = np.sum(W * np.conj(psi_f) * np.sum(A * grad_i, axis=0))
    return -atom.e1 * (-1j) * overlap


def test_orbital_validation():
    with pytest.raises(InvalidQuantumNumbers):
        pe.AtomicOrbital(2, 1, 2)
    with pytest.raises(InvalidQuantumNumbers):
        pe.AtomicOrbital(7, 0, 0)
    with pytest.raises(InvalidQuantumNumbers):
        pe.AtomicOrbital(2, 2, 0)


def test_mass_ratio():
    assert ATOM.ratio_pM == pytest.approx(0.9994557, abs=1e-7)
    assert pe.AtomConfig(include_mass_ratio=False).ratio_pM == 1.0


def test_dipole_closed_form():
    assert pe.dipole_g_21() == pytest.approx(0.0770071, abs=1e-7)


def test_g_factors_physical_k():
    g0 = pe.atomic_factor_g(pe.AtomicOrbital(2, 1, 0), 0, BEAM_M0, ATOM)
    g1 = pe.atomic_factor_g(pe.AtomicOrbital(2, 1, 1), 1, BEAM_M0, ATOM)
    assert abs(g0 - pe.dipole_g_21()) <= 1e-4
    assert abs(g1 - pe.dipole_g_21()) <= 1e-4
    # frozen from a doubled-grid run
    assert g0.real == pytest.approx(0.0770056, abs=2e-7)
    assert g1.real == pytest.approx(0.0770066, abs=2e-7)


def test_g_ratio_dipole_limit():
    beam = bm.BeamParams.from_pitch(0.2, 0, 1, k=bm.LYMAN_ALPHA_K / 10)
    g0 = pe.atomic_factor_g(pe.AtomicOrbital(2, 1, 0), 0, beam, ATOM)
    g1 = pe.atomic_factor_g(pe.AtomicOrbital(2, 1, 1), 1, beam, ATOM)
    assert abs(g0 / g1 - 1) <= 1e-6


def test_off_diagonal_g_small():
    g = pe.atomic_factor_g(pe.AtomicOrbital(2, 1, 0), 1, BEAM_M0, ATOM)
    assert abs(g) < 1e-5 * pe.dipole_g_21()


def test_quadrature_doubling_convergence():
    final = pe.AtomicOrbital(2, 1, 1)
    q = QuadratureSpec()
    a = pe.atomic_factor_g(final, 1, BEAM_M0, ATOM, q, check=False)
    b = pe.atomic_factor_g(final, 1, BEAM_M0, ATOM, q.doubled(), check=False)
    assert abs(a - b) <= 1e-9 * abs(b)


def test_quadrature_failure_detected():
    with pytest.raises(QuadratureError):
        pe.atomic_factor_g(pe.AtomicOrbital(2, 1, 1), 1, BEAM_M0, ATOM, QuadratureSpec(8, 8))


@pytest.mark.parametrize("m_gamma,m_f,b_over_lambda", [(0, 0, 0.5), (0, 1, 0.5), (1, 1, 0.0), (1, -1, 1.3), (-1, 0, 0.9)])
def test_direct_integral_oracle(m_gamma, m_f, b_over_lambda):
    beam = bm.BeamParams.from_pitch(0.2, m_gamma, 1)
    final = pe.AtomicOrbital(2, 1, m_f)
    b = b_over_lambda * beam.wavelength
    ours = pe.amplitude_localized(beam, ATOM, final, b).value
    ref = direct_amplitude(beam, ATOM, final, b)
    assert abs(ours - ref) <= 1e-3 * abs(ref)


def test_selection_pattern_at_origin():
    # J_{m_f - m_gamma}(0) vanishes unless m_f = m_gamma
    for m_gamma in (0, 1):
        beam = bm.BeamParams.from_pitch(0.2, m_gamma, 1)
        for m_f in (-1, 0, 1):
            v = pe.amplitude_localized(beam, ATOM, pe.AtomicOrbital(2, 1, m_f), 0.0).value
            assert (v != 0) == (m_f == m_gamma)


@settings(max_examples=25, deadline=None)
@given(st.integers(-2, 2), st.integers(-1, 1), st.floats(0.0, 2.0), st.floats(0, 6.2), st.floats(-3, 3))
def test_phase_covariance(m_gamma, m_f, b_over_lambda, phi_b, delta):
    beam = bm.BeamParams.from_pitch(0.3, m_gamma, 1)
    final = pe.AtomicOrbital(2, 1, m_f)
    b = b_over_lambda * beam.wavelength
    a0 = pe.amplitude_localized(beam, ATOM, final, b, phi_b).value
    a1 = pe.amplitude_localized(beam, ATOM, final, b, phi_b + delta).value
    assert abs(a1 - np.exp(1j * (m_gamma - m_f) * delta) * a0) <= 1e-12 * max(abs(a0), 1e-300)


@pytest.mark.parametrize("m_gamma", [-1, 0, 1, 2])
@pytest.mark.parametrize("m_f", [-1, 0, 1])
def test_mirror_symmetry(m_gamma, m_f):
    for lam in (1, -1):
        beam = bm.BeamParams.from_pitch(0.35, m_gamma, lam)
        mirror = bm.BeamParams.from_pitch(0.35, -m_gamma, -lam)
        for b_over_lambda in (0.0, 0.4, 1.7):
            b = b_over_lambda * beam.wavelength
            a = abs(pe.amplitude_localized(beam, ATOM, pe.AtomicOrbital(2, 1, m_f), b).value)
            am = abs(pe.amplitude_localized(mirror, ATOM, pe.AtomicOrbital(2, 1, -m_f), b).value)
            assert abs(a - am) <= 1e-10 * max(a, am, 1e-300)


def test_m_gamma0_curve_features():
    b0 = pe.AtomicOrbital(2, 1, 0)
    b1 = pe.AtomicOrbital(2, 1, 1)
    peak_b, _ = pe.locate_peak(BEAM_M0, ATOM, b0)
    assert peak_b == 0.0
    zero = pe.locate_first_zero(BEAM_M0, ATOM, b0)
    assert zero == pytest.approx(2.404825557695773 / (2 * math.pi * math.sin(0.2)), abs=1e-8)
    assert pe.amplitude_localized(BEAM_M0, ATOM, b1, 0.0).value == 0
    peak_b1, peak_v1 = pe.locate_peak(BEAM_M0, ATOM, b1)
    # first maximum of J_1 at x = 1.8411837813
    assert peak_b1 == pytest.approx(1.8411837813406593 / (2 * math.pi * math.sin(0.2)), abs=1e-6)


def test_scan_ordering_and_units():
    grid = np.linspace(0, 3, 5)
    recs = pe.scan_amplitudes(BEAM_M0, ATOM, 2, 1, [1, -1], grid)
    assert [r.m_f for r in recs] == [1] * 5 + [-1] * 5
    assert [r.b for r in recs[:5]] == list(grid)
    assert recs[2].meta["b_a0"] == pytest.approx(1.5 * BEAM_M0.wavelength)


# ---------------------------------------------------------------------------
# CM eigenstates of L_Z
# ---------------------------------------------------------------------------

def test_ring_normalisation():
    lam = BEAM_M0.wavelength
    ring = pe.gaussian_ring(0.5 * lam, 0.05 * lam)
    r, w = ring.nodes()
    assert np.sum(w * r * (ring.radial(r) / ring.norm) ** 2) == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(ValueError):
        pe.gaussian_ring(1.0, 0.0)


def test_g_tilde_limits():
    lam = BEAM_M0.wavelength
    b = 0.7 * lam
    for dm in (0, 1, -2):
        narrow = pe.G_tilde_FI(pe.gaussian_ring(b, 1e-3 * lam), pe.gaussian_ring(b, 1e-3 * lam, m_R=dm), BEAM_M0, dm)
        assert narrow == pytest.approx(pe.bessel_j(dm, BEAM_M0.kappa * b), abs=1e-6)


def test_delta_state_rejected():
    ring = pe.gaussian_ring(100.0, 10.0)
    with pytest.raises(TypeError):
        pe.amplitude_lz(BEAM_M0, ATOM, pe.AtomicOrbital(2, 1, 0), pe.DeltaLocalized(100.0), ring)


@settings(max_examples=50, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-2, 2), st.integers(-1, 1))
def test_selection_rule_exact(m_r, m_r2, m_gamma, m_f):
    beam = bm.BeamParams.from_pitch(0.2, m_gamma, 1)
    lam = beam.wavelength
    ci = pe.gaussian_ring(0.5 * lam, 0.05 * lam, m_R=m_r)
    cf = pe.gaussian_ring(0.5 * lam, 0.05 * lam, m_R=m_r2)
    final = pe.AtomicOrbital(2, 1, m_f)
    rec = pe.amplitude_lz(beam, ATOM, final, ci, cf)
    cm = pe.amplitude_cm(beam, ATOM, final, ci, cf)
    if m_r2 - m_r != m_gamma - m_f:
        assert rec.value == 0j and cm.value == 0j
    else:
        assert m_r2 - m_r + m_f - m_gamma == 0
        assert rec.m_R == m_r and rec.m_R_prime == m_r2


@pytest.mark.parametrize("m_gamma,m_f", [(0, 0), (0, 1), (1, 1), (1, 0)])
def test_lz_matches_localized(m_gamma, m_f):
    beam = bm.BeamParams.from_pitch(0.2, m_gamma, 1)
    lam = beam.wavelength
    final = pe.AtomicOrbital(2, 1, m_f)
    for b_over_lambda in (0.3, 0.9, 1.5):
        b = b_over_lambda * lam
        ci = pe.gaussian_ring(b, 0.02 * lam)
        cf = pe.gaussian_ring(b, 0.02 * lam, m_R=m_gamma - m_f)
        lz = abs(pe.amplitude_lz(beam, ATOM, final, ci, cf).value)
        loc = abs(pe.amplitude_localized(beam, ATOM, final, b).value)
        assert abs(lz - loc) <= 1e-3 * loc


def test_cm_term_small():
    for m_gamma in (0, 1):
        beam = bm.BeamParams.from_pitch(0.2, m_gamma, 1)
        lam = beam.wavelength
        for m_f in (-1, 0, 1):
            final = pe.AtomicOrbital(2, 1, m_f)
            for width in (0.1, 0.3):
                ci = pe.gaussian_ring(0.8 * lam, width * lam)
                cf = pe.gaussian_ring(0.8 * lam, width * lam, m_R=m_gamma - m_f)
                rel = pe.amplitude_lz(beam, ATOM, final, ci, cf).value
                cm = pe.amplitude_cm(beam, ATOM, final, ci, cf).value
                assert abs(cm) < 1e-2 * abs(rel)


def test_thick_profile_z_factor():
    # overlapping equal Gaussians: Z0 = exp(-k_z^2 t^2 / 2)
    z0, _ = pe._z_factors(3.0, 3.0, 0.1)
    assert z0 == pytest.approx(math.exp(-0.5 * 0.01 * 9.0), rel=1e-14)
    with pytest.raises(ValueError):
        pe._z_factors(0.0, 3.0, 0.1)
