"""Bessel-mode twisted photons: potentials, fields, Poynting vector, TE/TM basis.

Conventions
-----------
Spatial envelopes multiply ``exp(-i omega t)``; time averages are
``<X Y> = Re(X0 Y0*) / 2``.  Helicity-basis components are taken with respect
to ``eta_{+1} = (-1, -i, 0)/sqrt2``, ``eta_{-1} = (1, -i, 0)/sqrt2``,
``eta_0 = z``.  Fields follow ``E0 = i omega A0`` and ``B0 = curl A0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .mathcore import LYMAN_ALPHA_K, SPEED_OF_LIGHT, bessel_j

SQRT2 = math.sqrt(2.0)

ETA = {
    +1: np.array([-1.0, -1.0j, 0.0]) / SQRT2,
    -1: np.array([1.0, -1.0j, 0.0]) / SQRT2,
    0: np.array([0.0, 0.0, 1.0], dtype=complex),
}


@dataclass(frozen=True)
class BeamParams:
    """A twisted-photon Bessel mode.

    ``helicity`` is the plane-wave helicity Lambda; ``m_gamma`` the total
    angular momentum projection.  Wavenumbers are in inverse Bohr radii.
    """

    kappa: float
    k_z: float
    m_gamma: int
    helicity: int = 1
    e0: float = 1.0

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError("kappa must be positive")
        if not self.k_z > 0:
            raise ValueError("k_z must be positive")
        if self.helicity not in (1, -1):
            raise ValueError("helicity must be +1 or -1")
        if not self.e0 > 0:
            raise ValueError("e0 must be positive")
        object.__setattr__(self, "m_gamma", int(self.m_gamma))

    @classmethod
    def from_pitch(cls, theta_k, m_gamma, helicity=1, k=LYMAN_ALPHA_K, e0=1.0):
        if not 0 < theta_k < math.pi / 2:
            raise ValueError("pitch angle must lie in (0, pi/2)")
        return cls(k * math.sin(theta_k), k * math.cos(theta_k), m_gamma, helicity, e0)

    @property
    def k(self) -> float:
        return math.hypot(self.kappa, self.k_z)

    @property
    def omega(self) -> float:
        return SPEED_OF_LIGHT * self.k

    @property
    def theta_k(self) -> float:
        return math.atan2(self.kappa, self.k_z)

    @property
    def wavelength(self) -> float:
        return 2 * math.pi / self.k

    @property
    def norm(self) -> float:
        return math.sqrt(self.kappa / (2 * math.pi)) * self.e0


@dataclass(frozen=True)
class ComplexVec3:
    """Complex 3-vector (or a stack of them along trailing axes)."""

    components: np.ndarray
    basis: str = "cartesian"

    def __post_init__(self):
        if self.basis not in ("cartesian", "helicity"):
            raise ValueError(f"unknown basis {self.basis!r}")
        object.__setattr__(self, "components", np.asarray(self.components, dtype=complex))

    def to_cartesian(self) -> "ComplexVec3":
        if self.basis == "cartesian":
            return self
        a_p, a_m, a_0 = self.components
        return ComplexVec3(np.stack([(a_m - a_p) / SQRT2, -1j * (a_p + a_m) / SQRT2, a_0]), "cartesian")

    def to_helicity(self) -> "ComplexVec3":
        if self.basis == "helicity":
            return self
        x, y, z = self.components
        return ComplexVec3(np.stack([(-x + 1j * y) / SQRT2, (x + 1j * y) / SQRT2, z]), "helicity")

    def norm(self):
        return np.sqrt(np.sum(np.abs(self.components) ** 2, axis=0))

    def __getitem__(self, i):
        return self.components[i]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.components, dtype=dtype)


@dataclass(frozen=True)
class FieldSample:
    rho: float
    phi: float
    z: float
    A0: ComplexVec3
    E0: ComplexVec3
    B0: ComplexVec3


def _half_angles(theta_k):
    return math.cos(theta_k / 2) ** 2, math.sin(theta_k / 2) ** 2


def polarization_vector(theta_k, phi_k, helicity):
    """Plane-wave polarization for a wave vector at polar angle theta_k, azimuth phi_k."""
    if not 0 <= theta_k < math.pi / 2:
        raise ValueError("theta_k must lie in [0, pi/2)")
    if helicity not in (1, -1):
        raise ValueError("helicity must be +1 or -1")
    c2, s2 = _half_angles(theta_k)
    h = np.array([0j, 0j, 0j])
    h[0 if helicity == 1 else 1] += np.exp(-1j * helicity * phi_k) * c2
    h[1 if helicity == 1 else 0] += np.exp(1j * helicity * phi_k) * s2
    h[2] = helicity * math.sin(theta_k) / SQRT2
    return ComplexVec3(h, "helicity")


# ---------------------------------------------------------------------------
# Closed Bessel form
# ---------------------------------------------------------------------------
# A0 = exp(i k_z z) * sum_t coeff_t * psi_{n_t}(rho, phi),  psi_n = J_n(kappa rho) e^{i n phi}

@lru_cache(maxsize=256)
def _helicity_terms(beam: BeamParams):
    """(helicity label, Bessel index, scalar coefficient) triples."""
    lam, m = beam.helicity, beam.m_gamma
    c2, s2 = _half_angles(beam.theta_k)
    pref = beam.norm * lam / 1j
    return (
        (lam, m - lam, pref * c2),
        (0, m, pref * 1j * math.sin(beam.theta_k) / SQRT2),
        (-lam, m + lam, -pref * s2),
    )


def _cartesian_terms(beam: BeamParams):
    return [(n, c * ETA[h]) for h, n, c in _helicity_terms(beam)]


def _psi(n, kappa, rho, phi):
    return bessel_j(n, kappa * rho) * np.exp(1j * n * phi)


def _to_cyl(x, y):
    return np.hypot(x, y), np.arctan2(y, x)


def potential_and_jacobian(beam: BeamParams, x, y, z):
    """A0 and its Jacobian ``d[i, j] = d A0_j / d x_i`` at Cartesian points.

    Transverse derivatives use the Bessel ladder relations
    ``(d_x +- i d_y) psi_n = -+ kappa psi_{n+-1}``.
    """
    x, y, z = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x, y, z)))
    rho, phi = _to_cyl(x, y)
    kap = beam.kappa
    phase = np.exp(1j * beam.k_z * z)
    shape = x.shape
    A = np.zeros((3,) + shape, dtype=complex)
    dA = np.zeros((3, 3) + shape, dtype=complex)
    cache = {}

    def psi(n):
        if n not in cache:
            cache[n] = _psi(n, kap, rho, phi)
        return cache[n]

    for n, vec in _cartesian_terms(beam):
        p, p_lo, p_hi = psi(n), psi(n - 1), psi(n + 1)
        dx = 0.5 * kap * (p_lo - p_hi)
        dy = 0.5j * kap * (p_lo + p_hi)
        for j in range(3):
            if vec[j] == 0:
                continue
            A[j] += vec[j] * p
            dA[0, j] += vec[j] * dx
            dA[1, j] += vec[j] * dy
    A *= phase
    dA[0] *= phase
    dA[1] *= phase
    dA[2] = 1j * beam.k_z * A
    return A, dA


def _curl(dA):
    return np.stack([dA[1, 2] - dA[2, 1], dA[2, 0] - dA[0, 2], dA[0, 1] - dA[1, 0]])


def _cyl_to_xyz(rho, phi):
    return rho * np.cos(phi), rho * np.sin(phi)


def vector_potential_closed(beam: BeamParams, rho, phi, z) -> ComplexVec3:
    """Spatial envelope A0 of the Bessel mode (Cartesian components)."""
    x, y = _cyl_to_xyz(np.asarray(rho, float), np.asarray(phi, float))
    A, _ = potential_and_jacobian(beam, x, y, z)
    return ComplexVec3(A)


def vector_potential_integral(beam: BeamParams, rho, phi, z, n_phi: int = 256) -> ComplexVec3:
    """A0 by trapezoidal summation of the plane-wave cone.

    Independent of the Bessel expansion; used to cross-check
    :func:`vector_potential_closed`.
    """
    if n_phi < 64:
        raise ValueError("n_phi must be >= 64")
    rho, phi, z = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (rho, phi, z)))
    x, y = _cyl_to_xyz(rho, phi)
    phik = 2 * math.pi * np.arange(n_phi) / n_phi
    out = np.zeros((3,) + rho.shape, dtype=complex)
    m = beam.m_gamma
    weight = (-1j) ** m / n_phi
    for pk in phik:
        eps = polarization_vector(beam.theta_k, pk, beam.helicity).to_cartesian().components
        kx, ky = beam.kappa * math.cos(pk), beam.kappa * math.sin(pk)
        wave = np.exp(1j * (kx * x + ky * y + beam.k_z * z)) * (weight * np.exp(1j * m * pk))
        out += np.multiply.outer(eps, wave)
    return ComplexVec3(beam.norm * out)


def electric_field(beam: BeamParams, rho, phi, z) -> ComplexVec3:
    return ComplexVec3(1j * beam.omega * vector_potential_closed(beam, rho, phi, z).components)


def magnetic_field(beam: BeamParams, rho, phi, z) -> ComplexVec3:
    x, y = _cyl_to_xyz(np.asarray(rho, float), np.asarray(phi, float))
    _, dA = potential_and_jacobian(beam, x, y, z)
    return ComplexVec3(_curl(dA))


def field_sample(beam: BeamParams, rho, phi, z) -> FieldSample:
    x, y = _cyl_to_xyz(np.asarray(rho, float), np.asarray(phi, float))
    A, dA = potential_and_jacobian(beam, x, y, z)
    return FieldSample(rho, phi, z, ComplexVec3(A), ComplexVec3(1j * beam.omega * A), ComplexVec3(_curl(dA)))


def divergence_E(beam: BeamParams, rho, phi, z):
    x, y = _cyl_to_xyz(np.asarray(rho, float), np.asarray(phi, float))
    _, dA = potential_and_jacobian(beam, x, y, z)
    return 1j * beam.omega * (dA[0, 0] + dA[1, 1] + dA[2, 2])


def curl_fd(beam: BeamParams, rho, phi, z, h: float):
    """Central-difference curl of A0, steps h and h/2 combined by one Richardson step (h in a0)."""
    x, y = _cyl_to_xyz(np.asarray(rho, float), np.asarray(phi, float))
    z = np.asarray(z, float)

    def a(dx=0.0, dy=0.0, dz=0.0):
        return potential_and_jacobian(beam, x + dx, y + dy, z + dz)[0]

    def jac(s):
        return np.stack([(a(dx=s) - a(dx=-s)) / (2 * s), (a(dy=s) - a(dy=-s)) / (2 * s),
                         (a(dz=s) - a(dz=-s)) / (2 * s)])

    return _curl((4 * jac(h / 2) - jac(h)) / 3)


def to_cylindrical(vec, phi):
    """Project Cartesian components onto (rho, phi, z) unit vectors at azimuth phi."""
    vx, vy, vz = vec
    c, s = np.cos(phi), np.sin(phi)
    return np.stack([c * vx + s * vy, -s * vx + c * vy, vz])


def poynting_fields(beam: BeamParams, rho, phi, z):
    """Time-averaged (S_rho, S_phi, S_z) = Re(E0 x B0*)/2 from the fields."""
    fs = field_sample(beam, rho, phi, z)
    s = 0.5 * np.real(np.cross(fs.E0.components, np.conj(fs.B0.components), axis=0))
    return to_cylindrical(s, np.asarray(phi, float))


def poynting_closed(beam: BeamParams, rho):
    """Closed-form Bessel-mode Poynting components (S_rho, S_phi, S_z).

    Prefactor ``kappa omega^2 / 4 pi * e0^2``; relates to
    :func:`poynting_fields` by the single constant :func:`poynting_calibration`.
    """
    rho = np.asarray(rho, dtype=float)
    m, lam, th = beam.m_gamma, beam.helicity, beam.theta_k
    c2, s2 = _half_angles(th)
    x = beam.kappa * rho
    j_m = bessel_j(m, x)
    j_lo = bessel_j(m - lam, x)
    j_hi = bessel_j(m + lam, x)
    pref = beam.kappa * beam.omega**2 / (4 * math.pi) * beam.e0**2
    s_rho = np.zeros_like(x)
    s_phi = pref * math.sin(th) * j_m * (c2 * j_lo + s2 * j_hi)
    s_z = pref * (c2**2 * j_lo**2 - s2**2 * j_hi**2)
    return s_rho, s_phi, s_z


_REFERENCE_BEAM = BeamParams.from_pitch(0.3, 1, 1)


@lru_cache(maxsize=1)
def poynting_calibration() -> float:
    """Ratio Re(E0 x B0*)/2 over the closed-form S_z, fixed at a reference point."""
    s_field = poynting_fields(_REFERENCE_BEAM, 0.0, 0.0, 0.0)[2]
    s_closed = poynting_closed(_REFERENCE_BEAM, 0.0)[2]
    return float(s_field / s_closed)


# ---------------------------------------------------------------------------
# TE / TM basis
# ---------------------------------------------------------------------------

def _bessel_combo(beam, rho, phi, z, coeffs):
    # coeffs: {helicity label: (bessel index, scalar)}
    rho, phi, z = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (rho, phi, z)))
    h = np.zeros((3,) + rho.shape, dtype=complex)
    slot = {1: 0, -1: 1, 0: 2}
    for label, (n, c) in coeffs.items():
        h[slot[label]] += c * _psi(n, beam.kappa, rho, phi)
    return ComplexVec3(h * np.exp(1j * beam.k_z * z), "helicity").to_cartesian()


def te_mode(beam: BeamParams, rho, phi, z) -> ComplexVec3:
    """Transverse-electric Bessel envelope with amplitude ``beam.e0``.

    The overall phase is fixed so that TE = (e0/k_z) sqrt(pi/kappa) (A_{+1} + A_{-1})
    with A_{+-1} the unit-amplitude helicity modes.
    """
    m = beam.m_gamma
    pref = -1j * beam.e0 / (beam.k_z * SQRT2)
    return _bessel_combo(beam, rho, phi, z, {1: (m - 1, pref), -1: (m + 1, -pref)})


def tm_mode(beam: BeamParams, rho, phi, z) -> ComplexVec3:
    """Transverse-magnetic Bessel envelope with amplitude ``beam.e0``."""
    m = beam.m_gamma
    pref = -beam.e0 / (beam.k * SQRT2)
    return _bessel_combo(
        beam, rho, phi, z,
        {1: (m - 1, pref), -1: (m + 1, pref), 0: (m, pref * 1j * SQRT2 * math.tan(beam.theta_k))},
    )


def helicity_from_te_tm(beam: BeamParams, te: ComplexVec3, tm: ComplexVec3):
    """Invert the TE/TM relations: returns the unit-amplitude (A_{+1}, A_{-1})."""
    scale = beam.e0 / beam.k_z * math.sqrt(math.pi / beam.kappa)
    s = te.to_cartesian().components / scale
    d = tm.to_cartesian().components / (-1j * scale)
    return ComplexVec3(0.5 * (s + d)), ComplexVec3(0.5 * (s - d))
