"""Radiation forces on small particles in Bessel beams.

Forces are returned as (rho, phi, z) components at the sample point.  The
"intensity" used to express on-axis results is ``(|k|/omega) |E0|^2 / 2``,
the Poynting flux of a plane wave with envelope E0 in the field
conventions of :mod:`twistbeam.beam`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .beam import (
    BeamParams,
    _curl,
    _cyl_to_xyz,
    poynting_calibration,
    poynting_closed,
    potential_and_jacobian,
    to_cylindrical,
)
from .mathcore import QuadratureError, gauss_legendre_interval

FD_RTOL = 1e-6


@dataclass(frozen=True)
class ParticleResponse:
    """Small particle with complex polarizability alpha (p0 = alpha E0)."""

    alpha: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        if self.alpha.imag < 0:
            raise ValueError("Im(alpha) must be non-negative")

    def sigma(self, beam: BeamParams) -> float:
        return beam.omega * self.alpha.imag


@dataclass(frozen=True)
class ForceBreakdown:
    total: np.ndarray
    gradient: np.ndarray
    poynting: np.ndarray
    spin_curl: np.ndarray

    @property
    def residual(self) -> np.ndarray:
        return self.total - (self.gradient + self.poynting + self.spin_curl)


@dataclass(frozen=True)
class DiskGeometry:
    """Thin totally absorbing disk on the beam axis, normal +z."""

    radius: float
    z: float = 0.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("disk radius must be positive")

    @property
    def area(self) -> float:
        return math.pi * self.radius**2


def intensity(beam: BeamParams, e0_sq) -> float:
    return 0.5 * beam.k / beam.omega * e0_sq


def _efield_xyz(beam, x, y, z):
    A, _ = potential_and_jacobian(beam, x, y, z)
    return 1j * beam.omega * A


def _fd_gradient_force(beam, alpha, x, y, z, h):
    e = _efield_xyz(beam, x, y, z)
    out = []
    for axis in range(3):
        d = [0.0, 0.0, 0.0]
        d[axis] = h
        ep = _efield_xyz(beam, x + d[0], y + d[1], z + d[2])
        em = _efield_xyz(beam, x - d[0], y - d[1], z - d[2])
        de = (ep - em) / (2 * h)
        out.append(0.5 * np.real(alpha * np.sum(e * np.conj(de), axis=0)))
    return np.stack(out)


def fd_step_length(beam: BeamParams, fd_step: float) -> float:
    """Finite-difference step in a0 for a step given in wavelengths."""
    return fd_step * beam.wavelength


def force_dipole(beam: BeamParams, particle: ParticleResponse, rho, phi, z, fd_step: float = 1e-4):
    """Time-averaged dipole force Re(alpha E0 . grad E0*)/2, cylindrical components.

    Gradients are central differences with one Richardson step.  The
    estimate from steps (h, h/2) must agree with the one from (2h, h)
    to ``FD_RTOL`` or a :class:`QuadratureError` is raised.
    """
    if not fd_step > 0:
        raise ValueError("fd_step must be positive")
    x, y = _cyl_to_xyz(np.asarray(rho, float), np.asarray(phi, float))
    z = np.asarray(z, float)
    h = fd_step_length(beam, fd_step)
    d2h, dh, dh2 = (_fd_gradient_force(beam, particle.alpha, x, y, z, s) for s in (2 * h, h, h / 2))
    fine = (4 * dh2 - dh) / 3
    coarse = (4 * dh - d2h) / 3
    scale = np.max(np.abs(fine)) + 1e-300
    if particle.alpha != 0 and np.max(np.abs(fine - coarse)) > FD_RTOL * scale:
        raise QuadratureError("finite-difference force did not converge")
    return to_cylindrical(fine, np.asarray(phi, float))


def _analytic_terms(beam, alpha, x, y, z):
    A, dA = potential_and_jacobian(beam, x, y, z)
    w = beam.omega
    e = 1j * w * A
    de = 1j * w * dA
    grad_e2 = 2 * np.real(np.sum(np.conj(e)[None] * de, axis=1))
    # d_i (E x E*) = d_iE x E* + E x d_iE*
    d_spin = np.stack([np.cross(de[i], np.conj(e), axis=0) + np.cross(e, np.conj(de[i]), axis=0) for i in range(3)])
    curl_spin = _curl(d_spin)
    return e, grad_e2, curl_spin


def gradient_force_analytic(beam: BeamParams, particle: ParticleResponse, rho, phi, z):
    """Re(alpha)/4 grad|E0|^2 from the Bessel-derivative path."""
    x, y = _cyl_to_xyz(np.asarray(rho, float), np.asarray(phi, float))
    _, grad_e2, _ = _analytic_terms(beam, particle.alpha, x, y, np.asarray(z, float))
    return to_cylindrical(0.25 * particle.alpha.real * grad_e2, np.asarray(phi, float))


def force_decomposition(beam: BeamParams, particle: ParticleResponse, rho, phi, z,
                        fd_step: float = 1e-4) -> ForceBreakdown:
    """Gradient + Poynting + spin-curl split of the dipole force.

    ``total`` comes from :func:`force_dipole`; the three terms use analytic
    derivatives and the closed-form Poynting vector.
    """
    phi_a = np.asarray(phi, float)
    x, y = _cyl_to_xyz(np.asarray(rho, float), phi_a)
    _, grad_e2, curl_spin = _analytic_terms(beam, particle.alpha, x, y, np.asarray(z, float))
    sigma = particle.sigma(beam)
    gradient = to_cylindrical(0.25 * particle.alpha.real * grad_e2, phi_a)
    spin = to_cylindrical(np.real(sigma / (4j * beam.omega) * curl_spin), phi_a)
    s = np.stack(np.broadcast_arrays(*poynting_closed(beam, rho)))
    poynting = sigma * poynting_calibration() * s
    total = force_dipole(beam, particle, rho, phi, z, fd_step)
    return ForceBreakdown(total, gradient, poynting, spin)


def on_axis_intensity(beam: BeamParams) -> float:
    e = _efield_xyz(beam, 0.0, 0.0, 0.0)
    return intensity(beam, float(np.sum(np.abs(e) ** 2)))


def stress_tensor_avg(beam: BeamParams, rho, phi, z) -> np.ndarray:
    """Time-averaged Maxwell stress tensor (Cartesian, Gaussian units without 1/4pi).

    E is taken as ``E0 |k| / omega`` so that E and B share units.
    """
    x, y = _cyl_to_xyz(np.asarray(rho, float), np.asarray(phi, float))
    A, dA = potential_and_jacobian(beam, x, y, np.asarray(z, float))
    e = 1j * beam.k * A
    b = _curl(dA)
    ee = 0.5 * np.real(np.einsum("i...,j...->ij...", e, np.conj(e)))
    bb = 0.5 * np.real(np.einsum("i...,j...->ij...", b, np.conj(b)))
    eye = np.eye(3).reshape((3, 3) + (1,) * (ee.ndim - 2))
    tr_e = np.trace(ee)
    tr_b = np.trace(bb)
    t = ee - 0.5 * eye * tr_e + bb - 0.5 * eye * tr_b
    return 0.5 * (t + np.swapaxes(t, 0, 1))


def _disk_force(beam, disk, n):
    r, w = gauss_legendre_interval(n, 0.0, disk.radius)
    tzz = stress_tensor_avg(beam, r, 0.0, disk.z)[2, 2]
    # T_zz does not depend on phi for a Bessel mode
    return -2 * math.pi * float(np.sum(w * r * tzz))


def force_absorptive_disk(beam: BeamParams, disk: DiskGeometry, n_radial_quad: int = 32) -> float:
    """F_z on a totally absorbing on-axis disk: minus the front-face integral of <T_zz>."""
    f = _disk_force(beam, disk, n_radial_quad)
    f2 = _disk_force(beam, disk, 2 * n_radial_quad)
    if abs(f - f2) > 1e-10 * abs(f2) + 1e-300:
        raise QuadratureError("disk force quadrature did not converge")
    return f2
