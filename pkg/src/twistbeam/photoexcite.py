"""Hydrogen 1S photoexcitation by twisted photons.

Amplitudes are in natural units with e/(m_e a0) = 1.  CM lengths (impact
parameter, ring radius and width) are in Bohr radii unless a function says
otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .beam import BeamParams
from .mathcore import (
    InvalidQuantumNumbers,
    QuadratureError,
    QuadratureSpec,
    bessel_j,
    gauss_legendre,
    gauss_legendre_interval,
    hydrogen_radial,
    hydrogen_radial_deriv,
    sph_harm_phi0,
)

PROTON_ELECTRON_MASS_RATIO = 1836.15267
CONVERGENCE_RTOL = 1e-9


@dataclass(frozen=True)
class AtomicOrbital:
    n: int
    l: int
    m: int

    def __post_init__(self):
        if not 1 <= self.n <= 6:
            raise InvalidQuantumNumbers(f"n must be in 1..6, got {self.n}")
        if not 0 <= self.l < self.n:
            raise InvalidQuantumNumbers(f"need 0 <= l < n, got n={self.n}, l={self.l}")
        if abs(self.m) > self.l:
            raise InvalidQuantumNumbers(f"need |m| <= l, got l={self.l}, m={self.m}")


@dataclass(frozen=True)
class AtomConfig:
    """Mass and charge constants in atomic units.

    With ``include_mass_ratio=False`` the near-unity m_p/M factors inside
    the relative-coordinate integrals are set to 1.
    """

    mass_ratio: float = PROTON_ELECTRON_MASS_RATIO
    include_mass_ratio: bool = True
    m_e: float = 1.0
    a0: float = 1.0
    e1: float = -1.0

    @property
    def m_p(self) -> float:
        return self.mass_ratio * self.m_e

    @property
    def M(self) -> float:
        return self.m_e + self.m_p

    @property
    def ratio_pM(self) -> float:
        return self.m_p / self.M if self.include_mass_ratio else 1.0


# ---------------------------------------------------------------------------
# Centre-of-mass wave functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DeltaLocalized:
    """CM sharply localised at distance b from the beam axis, azimuth phi_b."""

    b: float
    phi_b: float = 0.0


@dataclass(frozen=True)
class LzEigenstate:
    """CM state exp(i m_R phi_R)/sqrt(2 pi) * f(R_perp) * g(Z).

    ``radial`` is f (any normalisation; it is normalised by quadrature),
    ``radial_deriv`` its derivative, ``r_range`` the interval carrying f.
    g is a Gaussian whose probability density has standard deviation
    ``thickness``; ``thickness=0`` is the planar limit Z = 0.
    """

    m_R: int
    radial: Callable
    radial_deriv: Callable
    r_range: tuple
    thickness: float = 0.0
    n_nodes: int = 160

    def __post_init__(self):
        if self.thickness < 0:
            raise ValueError("thickness must be non-negative")

    def nodes(self):
        return gauss_legendre_interval(self.n_nodes, *self.r_range)

    @property
    def norm(self) -> float:
        return _profile_norm(self)


@lru_cache(maxsize=512)
def _profile_norm(state: LzEigenstate) -> float:
    r, w = state.nodes()
    return math.sqrt(float(np.sum(w * r * state.radial(r) ** 2)))


@dataclass(frozen=True)
class _GaussianProfile:
    # f = exp(-(R-b)^2 / 4w^2) / sqrt(R), so the radial density R |f|^2 is a Gaussian
    b: float
    width: float

    def __call__(self, r):
        return np.exp(-((r - self.b) ** 2) / (4 * self.width**2)) / np.sqrt(r)

    def deriv(self, r):
        return (-(r - self.b) / (2 * self.width**2) - 0.5 / r) * self(r)


def gaussian_ring(b: float, width: float, m_R: int = 0, thickness: float = 0.0, n_nodes: int = 160) -> LzEigenstate:
    """Ring of radius b around the beam axis.

    The radial probability density R |f(R)|^2 is a Gaussian of mean b and
    standard deviation ``width`` (truncated at 12 widths and at R = 0).
    """
    if not width > 0:
        raise ValueError("ring width must be positive")
    prof = _GaussianProfile(float(b), float(width))
    lo = max(0.0, b - 12 * width)
    return LzEigenstate(m_R, prof, prof.deriv, (lo, b + 12 * width), thickness, n_nodes)


def _z_factors(thick_f: float, thick_i: float, k_z: float):
    """(int g_F g_I e^{i k_z Z} dZ, int g_F e^{i k_z Z} dg_I/dZ dZ) for Gaussian g."""
    if thick_f == 0 and thick_i == 0:
        return 1.0 + 0j, -0.5j * k_z
    if thick_f == 0 or thick_i == 0:
        raise ValueError("cannot overlap a planar CM profile with a Gaussian one")
    a = 1 / (4 * thick_f**2) + 1 / (4 * thick_i**2)
    base = math.sqrt(math.pi / a) * math.exp(-(k_z**2) / (4 * a)) / math.sqrt(2 * math.pi * thick_f * thick_i)
    z0 = base + 0j
    z1 = -(1 / (2 * thick_i**2)) * (1j * k_z / (2 * a)) * base
    return z0, z1


def _require_lz(*states):
    for s in states:
        if isinstance(s, DeltaLocalized):
            raise TypeError("delta-localised CM state has no overlap integral; use amplitude_localized")
        if not isinstance(s, LzEigenstate):
            raise TypeError(f"unsupported CM model {type(s).__name__}")


def _shared_nodes(cm_i: LzEigenstate, cm_f: LzEigenstate):
    lo = max(cm_i.r_range[0], cm_f.r_range[0])
    hi = min(cm_i.r_range[1], cm_f.r_range[1])
    if hi <= lo:
        return None
    return gauss_legendre_interval(max(cm_i.n_nodes, cm_f.n_nodes), lo, hi)


def G_tilde_FI(cm_initial, cm_final, beam: BeamParams, delta_m: int) -> complex:
    """CM overlap  int R_perp dR_perp dZ  Y_F* Y_I J_dm(kappa R_perp) e^{i k_z Z}."""
    _require_lz(cm_initial, cm_final)
    nodes = _shared_nodes(cm_initial, cm_final)
    if nodes is None:
        return 0j
    r, w = nodes
    f = cm_final.radial(r) * cm_initial.radial(r) / (cm_final.norm * cm_initial.norm)
    radial = np.sum(w * r * f * bessel_j(delta_m, beam.kappa * r))
    z0, _ = _z_factors(cm_final.thickness, cm_initial.thickness, beam.k_z)
    return complex(radial * z0)


def G_FI_lambda(cm_initial, cm_final, beam: BeamParams, lam: int, atom: AtomConfig = AtomConfig()) -> complex:
    """Derivative overlap with the polarization-component operator d_{R lambda}."""
    _require_lz(cm_initial, cm_final)
    nodes = _shared_nodes(cm_initial, cm_final)
    if nodes is None:
        return 0j
    r, w = nodes
    norm = cm_final.norm * cm_initial.norm
    order = cm_final.m_R - cm_initial.m_R - lam
    bes = bessel_j(order, beam.kappa * r)
    z0, z1 = _z_factors(cm_final.thickness, cm_initial.thickness, beam.k_z)
    f_f = cm_final.radial(r)
    if lam == 0:
        radial = np.sum(w * r * f_f * bes * cm_initial.radial(r)) / norm
        return complex(-atom.a0 * radial * z1)
    d = (-lam * cm_initial.radial_deriv(r) + cm_initial.m_R * cm_initial.radial(r) / r) / math.sqrt(2)
    radial = np.sum(w * r * f_f * bes * d) / norm
    return complex(-atom.a0 * radial * z0)


# ---------------------------------------------------------------------------
# Relative-coordinate atomic factors
# ---------------------------------------------------------------------------

def default_r_max(final: AtomicOrbital) -> float:
    # integrands always carry R_10 ~ e^{-r}, so the tail falls like e^{-r(1 + 1/n)}
    return 40.0 * final.n


def _angular_grid(final: AtomicOrbital, quad: QuadratureSpec):
    r_max = quad.r_max if quad.r_max is not None else default_r_max(final)
    x, wx = gauss_legendre(quad.n_radial)
    r = 0.5 * r_max * (x + 1)
    wr = 0.5 * r_max * wx
    u, wu = gauss_legendre(quad.n_angular)
    return r[:, None], wr[:, None], u[None, :], wu[None, :]


def _g_integral(final, lam, beam, atom, quad, kind):
    r, wr, u, wu = _angular_grid(final, quad)
    theta = np.arccos(u)
    sin_t = np.sqrt(1 - u**2)
    q = atom.ratio_pM
    plane = np.exp(1j * q * beam.k_z * r * u)
    rf = hydrogen_radial(final.n, final.l, r)
    yf = sph_harm_phi0(final.l, final.m, theta)
    if kind == "rel":
        bes = bessel_j(final.m - lam, q * beam.kappa * r * sin_t)
        integrand = rf * hydrogen_radial_deriv(1, 0, r) * bes * yf * sph_harm_phi0(1, lam, theta) * plane
        return complex(-atom.a0 * np.sum(wr * wu * r**2 * integrand))
    bes = bessel_j(final.m, q * beam.kappa * r * sin_t)
    integrand = rf * hydrogen_radial(1, 0, r) * bes * yf * plane
    return complex(np.sum(wr * wu * r**2 * integrand))


def _converged(compute, quad: QuadratureSpec, check: bool):
    val = compute(quad)
    if check:
        val2 = compute(quad.doubled())
        if abs(val2 - val) > CONVERGENCE_RTOL * abs(val2) + 1e-15:
            raise QuadratureError(
                f"quadrature not converged: {val!r} vs doubled grid {val2!r}"
            )
    return val


@lru_cache(maxsize=4096)
def atomic_factor_g(final: AtomicOrbital, lambda_pol: int, beam: BeamParams,
                    atom: AtomConfig = AtomConfig(), quad: QuadratureSpec = QuadratureSpec(),
                    check: bool = True) -> complex:
    """Relative-coordinate factor g_{f lambda} coupling 1S to ``final``.

    With ``check`` the result is recomputed on a doubled grid and a
    :class:`QuadratureError` is raised if they disagree beyond 1e-9 relative.
    """
    if lambda_pol not in (-1, 0, 1):
        raise ValueError("lambda_pol must be -1, 0 or +1")
    return _converged(lambda q: _g_integral(final, lambda_pol, beam, atom, q, "rel"), quad, check)


@lru_cache(maxsize=1024)
def atomic_factor_g_fi(final: AtomicOrbital, beam: BeamParams, atom: AtomConfig = AtomConfig(),
                       quad: QuadratureSpec = QuadratureSpec(), check: bool = True) -> complex:
    """Non-derivative overlap g_fi used by the CM-derivative amplitude."""
    return _converged(lambda q: _g_integral(final, 0, beam, atom, q, "fi"), quad, check)


def dipole_g_21() -> float:
    """Dipole-limit value of g_{21 lambda lambda}: (2/3)^{7/2} / pi."""
    return (2.0 / 3.0) ** 3.5 / math.pi


# ---------------------------------------------------------------------------
# Amplitudes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AmplitudeRecord:
    value: complex
    m_gamma: int
    helicity: int
    n_f: int
    l_f: int
    m_f: int
    b: float
    theta_k: float
    contribution: str = "rel"
    m_R: int | None = None
    m_R_prime: int | None = None
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise ValueError("amplitude is not finite")


def _bracket(beam: BeamParams, factor: Callable[[int], complex]) -> complex:
    lam, th = beam.helicity, beam.theta_k
    c2, s2 = math.cos(th / 2) ** 2, math.sin(th / 2) ** 2
    return c2 * factor(lam) + 1j / math.sqrt(2) * math.sin(th) * factor(0) - s2 * factor(-lam)


def g_bracket(beam, atom, final, quad=QuadratureSpec(), check=True) -> complex:
    return _bracket(beam, lambda lam: atomic_factor_g(final, lam, beam, atom, quad, check))


def _rel_prefactor(beam: BeamParams, atom: AtomConfig) -> float:
    # -e1 Lambda / (m_e a0) * sqrt(2 pi kappa / 3), in units e/(m_e a0) = 1
    return -atom.e1 * beam.helicity / (atom.m_e * atom.a0) * math.sqrt(2 * math.pi * beam.kappa / 3)


def amplitude_localized(beam: BeamParams, atom: AtomConfig, final: AtomicOrbital, b: float,
                        phi_b: float = 0.0, quad: QuadratureSpec = QuadratureSpec(),
                        check: bool = True) -> AmplitudeRecord:
    """Relative-momentum amplitude for a CM sharply localised at impact parameter b.

    ``phi_b`` is the azimuth of the direction from the atom towards the beam
    axis, i.e. the CM sits at azimuth phi_b + pi.  Recoil is neglected.
    """
    if b < 0:
        raise ValueError("impact parameter must be non-negative")
    dm = beam.m_gamma - final.m
    value = (
        _rel_prefactor(beam, atom)
        * np.exp(1j * dm * phi_b)
        * bessel_j(final.m - beam.m_gamma, beam.kappa * b)
        * g_bracket(beam, atom, final, quad, check)
    )
    return AmplitudeRecord(complex(value), beam.m_gamma, beam.helicity, final.n, final.l, final.m,
                           float(b), beam.theta_k, "rel")


def amplitude_lz(beam: BeamParams, atom: AtomConfig, final: AtomicOrbital, cm_initial: LzEigenstate,
                 cm_final: LzEigenstate, quad: QuadratureSpec = QuadratureSpec(),
                 check: bool = True) -> AmplitudeRecord:
    """Relative-momentum amplitude between CM states of definite L_Z.

    Exactly zero unless m'_R - m_R = m_gamma - m_f.
    """
    _require_lz(cm_initial, cm_final)
    dm = cm_final.m_R - cm_initial.m_R
    rec = dict(m_gamma=beam.m_gamma, helicity=beam.helicity, n_f=final.n, l_f=final.l, m_f=final.m,
               b=float("nan"), theta_k=beam.theta_k, contribution="rel",
               m_R=cm_initial.m_R, m_R_prime=cm_final.m_R)
    if dm != beam.m_gamma - final.m:
        return AmplitudeRecord(0j, **rec)
    # -e1 = e for the electron, so the sign matches the localised form
    value = _rel_prefactor(beam, atom) * G_tilde_FI(cm_initial, cm_final, beam, dm) \
        * g_bracket(beam, atom, final, quad, check)
    return AmplitudeRecord(complex(value), **rec)


def amplitude_cm(beam: BeamParams, atom: AtomConfig, final: AtomicOrbital, cm_initial: LzEigenstate,
                 cm_final: LzEigenstate, quad: QuadratureSpec = QuadratureSpec(),
                 check: bool = True) -> AmplitudeRecord:
    """Amplitude from the electron momentum's CM-derivative part.

    Profiles are unit normalised here, which absorbs the 2 pi of the
    prefactor 2 pi e Lambda / (M a0) sqrt(kappa/2).
    """
    _require_lz(cm_initial, cm_final)
    dm = cm_final.m_R - cm_initial.m_R
    rec = dict(m_gamma=beam.m_gamma, helicity=beam.helicity, n_f=final.n, l_f=final.l, m_f=final.m,
               b=float("nan"), theta_k=beam.theta_k, contribution="cm",
               m_R=cm_initial.m_R, m_R_prime=cm_final.m_R)
    if dm != beam.m_gamma - final.m:
        return AmplitudeRecord(0j, **rec)
    pref = -atom.e1 * beam.helicity * atom.m_e / (atom.M * atom.a0) * math.sqrt(beam.kappa / 2)
    g_fi = atomic_factor_g_fi(final, beam, atom, quad, check)
    bracket = _bracket(beam, lambda lam: G_FI_lambda(cm_initial, cm_final, beam, lam, atom))
    return AmplitudeRecord(complex(pref * g_fi * bracket), **rec)


def kappa_b(beam: BeamParams, b_over_lambda):
    """kappa * b for b measured in photon wavelengths: 2 pi sin(theta_k) b/lambda."""
    return 2 * math.pi * math.sin(beam.theta_k) * np.asarray(b_over_lambda, dtype=float)


def scan_amplitudes(beam: BeamParams, atom: AtomConfig, n_f: int, l_f: int, m_f_list, b_grid,
                    quad: QuadratureSpec = QuadratureSpec(), check: bool = True):
    """Localised amplitudes for each m_f over impact parameters given in wavelengths.

    Rows are ordered by (m_f as given, b).  Each record's ``b`` is in
    wavelengths; ``meta`` carries the value in Bohr radii.
    """
    b_grid = [float(b) for b in b_grid]
    out = []
    for m_f in m_f_list:
        final = AtomicOrbital(n_f, l_f, m_f)
        for b in b_grid:
            rec = amplitude_localized(beam, atom, final, b * beam.wavelength, 0.0, quad, check)
            out.append(AmplitudeRecord(rec.value, rec.m_gamma, rec.helicity, n_f, l_f, m_f, b,
                                       rec.theta_k, "rel", meta={"b_a0": b * beam.wavelength}))
    return out


# ---------------------------------------------------------------------------
# Curve features
# ---------------------------------------------------------------------------

def _abs_amp(beam, atom, final, quad):
    def f(b_over_lambda):
        return abs(amplitude_localized(beam, atom, final, b_over_lambda * beam.wavelength, 0.0, quad).value)
    return f


def locate_peak(beam, atom, final, b_max: float = 3.0, n_grid: int = 64, quad=QuadratureSpec()):
    """First local maximum of |amplitude| in b/lambda, refined by golden section."""
    from scipy.optimize import minimize_scalar

    f = _abs_amp(beam, atom, final, quad)
    grid = np.linspace(0, b_max, n_grid)
    vals = np.array([f(b) for b in grid])
    i = 0
    while i + 1 < len(vals) and vals[i + 1] >= vals[i]:
        i += 1
    if i == 0:
        return 0.0, float(vals[0])
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    res = minimize_scalar(lambda b: -f(b), bounds=(lo, hi), method="bounded", options={"xatol": 1e-9})
    return float(res.x), float(-res.fun)


def locate_first_zero(beam, atom, final, b_max: float = 3.0, n_grid: int = 64, quad=QuadratureSpec()):
    """First b/lambda > 0 where the signed Bessel factor of the amplitude changes sign."""
    from scipy.optimize import brentq

    order = final.m - beam.m_gamma
    g = lambda b: bessel_j(order, float(kappa_b(beam, b)))
    grid = np.linspace(0, b_max, n_grid)[1:]
    vals = [g(b) for b in grid]
    for a, b, va, vb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if va == 0:
            return float(a)
        if va * vb < 0:
            return float(brentq(g, a, b, xtol=1e-12))
    return None
