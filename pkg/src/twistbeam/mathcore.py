"""Special functions and quadrature rules.

Everything here works in Hartree atomic units (a0 = hbar = m_e = 1).
Functions accept scalars or numpy arrays and broadcast like ufuncs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

SPEED_OF_LIGHT = 137.035999
# 1S -> 2P photon: omega = 3/8 Hartree
LYMAN_ALPHA_K = 0.375 / SPEED_OF_LIGHT

SERIES_CUTOFF = 8.0
_MAX_ARG = 1e6
_RESCALE = 1e250


class DomainError(ValueError):
    """Argument outside the range a routine supports."""


class InvalidQuantumNumbers(ValueError):
    pass


class QuadratureError(RuntimeError):
    """A quadrature or finite-difference estimate failed its convergence check."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Node counts for the (r, cos theta) grid used by the atomic integrals.

    ``r_max=None`` lets the caller pick a cutoff suited to the orbitals involved.
    """

    n_radial: int = 96
    n_angular: int = 48
    r_max: float | None = None

    def __post_init__(self):
        if self.n_radial < 8 or self.n_angular < 8:
            raise ValueError("quadrature needs at least 8 nodes per axis")
        if self.r_max is not None and not self.r_max > 0:
            raise ValueError("r_max must be positive")

    def doubled(self) -> "QuadratureSpec":
        return QuadratureSpec(2 * self.n_radial, 2 * self.n_angular, self.r_max)


# ---------------------------------------------------------------------------
# Bessel functions of the first kind, integer order
# ---------------------------------------------------------------------------

def _bessel_series(n: int, x: np.ndarray) -> np.ndarray:
    # ascending series, n >= 0, x >= 0
    half = 0.5 * x
    if n == 0:
        term = np.ones_like(x)
    else:
        with np.errstate(divide="ignore"):
            term = np.where(x > 0, np.exp(n * np.log(np.where(x > 0, half, 1.0)) - math.lgamma(n + 1)), 0.0)
    total = term.copy()
    q = -half * half
    for k in range(1, 80):
        term = term * q / (k * (k + n))
        total += term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return total


def _bessel_miller(n: int, x: np.ndarray) -> np.ndarray:
    # backward recurrence normalised with J_0 + 2 sum J_2k = 1; x > 0
    top = max(n, float(np.max(x)))
    start = 2 * ((int(top) + 20 + int(math.sqrt(60.0 * top))) // 2)
    j_next = np.zeros_like(x)
    j_cur = np.full_like(x, 1e-30)
    norm = np.zeros_like(x)
    result = np.zeros_like(x)
    for k in range(start, 0, -1):
        j_prev = (2.0 * k / x) * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        # j_cur now holds the (unnormalised) order k-1 value
        if k - 1 == n:
            result = j_cur.copy()
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * j_cur
        big = np.abs(j_cur) > _RESCALE
        if np.any(big):
            scale = np.where(big, 1.0 / _RESCALE, 1.0)
            j_cur *= scale
            j_next *= scale
            norm *= scale
            result *= scale
    norm += j_cur
    return result / norm


def bessel_j(order: int, x):
    """Cylindrical Bessel function J_order(x) for integer order.

    Ascending series below ``SERIES_CUTOFF``, Miller's backward recurrence
    above it. Negative orders and arguments use the parity relations.
    """
    order = int(order)
    xa = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(xa)) or np.any(np.abs(xa) >= _MAX_ARG):
        raise DomainError(f"bessel_j argument must satisfy |x| < {_MAX_ARG:g}")
    n = abs(order)
    sign = np.where((xa < 0) & (n % 2 == 1), -1.0, 1.0)
    if order < 0 and n % 2 == 1:
        sign = -sign
    ax = np.abs(xa).ravel()
    out = np.empty_like(ax)
    small = ax < SERIES_CUTOFF
    if np.any(small):
        out[small] = _bessel_series(n, ax[small])
    if np.any(~small):
        out[~small] = _bessel_miller(n, ax[~small])
    out = sign * out.reshape(xa.shape)
    return float(out) if out.ndim == 0 else out


def bessel_j_deriv(order: int, x):
    """d/dx J_order(x) = (J_{order-1} - J_{order+1}) / 2."""
    return 0.5 * (np.asarray(bessel_j(order - 1, x)) - np.asarray(bessel_j(order + 1, x)))


# ---------------------------------------------------------------------------
# Spherical harmonics at azimuth zero
# ---------------------------------------------------------------------------

def _assoc_legendre(l: int, m: int, x: np.ndarray) -> np.ndarray:
    # P_l^m(x) for m >= 0 with the Condon-Shortley phase included
    pmm = np.ones_like(x)
    if m > 0:
        somx2 = np.sqrt(np.clip((1.0 - x) * (1.0 + x), 0.0, None))
        fact = 1.0
        for _ in range(m):
            pmm = -pmm * fact * somx2
            fact += 2.0
    if l == m:
        return pmm
    pmmp1 = x * (2 * m + 1) * pmm
    if l == m + 1:
        return pmmp1
    for ll in range(m + 2, l + 1):
        pll = (x * (2 * ll - 1) * pmmp1 - (ll + m - 1) * pmm) / (ll - m)
        pmm, pmmp1 = pmmp1, pll
    return pmmp1


def sph_harm_phi0(l: int, m: int, theta):
    """Y_lm(theta, phi=0), Condon-Shortley convention. Real-valued."""
    if l < 0 or abs(m) > l:
        raise InvalidQuantumNumbers(f"need 0 <= |m| <= l, got l={l}, m={m}")
    th = np.asarray(theta, dtype=float)
    am = abs(m)
    norm = math.sqrt((2 * l + 1) / (4 * math.pi) * math.factorial(l - am) / math.factorial(l + am))
    val = norm * _assoc_legendre(l, am, np.cos(th))
    if m < 0 and am % 2 == 1:
        val = -val
    return float(val) if val.ndim == 0 else val


# ---------------------------------------------------------------------------
# Hydrogen radial functions
# ---------------------------------------------------------------------------

def _check_nl(n: int, l: int) -> None:
    if not 1 <= n <= 6:
        raise InvalidQuantumNumbers(f"n must be in 1..6, got {n}")
    if not 0 <= l < n:
        raise InvalidQuantumNumbers(f"need 0 <= l < n, got n={n}, l={l}")


def _laguerre(k: int, alpha: float, x: np.ndarray) -> np.ndarray:
    if k < 0:
        return np.zeros_like(x)
    prev = np.ones_like(x)
    if k == 0:
        return prev
    cur = 1.0 + alpha - x
    for j in range(2, k + 1):
        prev, cur = cur, ((2 * j - 1 + alpha - x) * cur - (j - 1 + alpha) * prev) / j
    return cur


def _radial_norm(n: int, l: int) -> float:
    return math.sqrt((2.0 / n) ** 3 * math.factorial(n - l - 1) / (2 * n * math.factorial(n + l)))


def hydrogen_radial(n: int, l: int, r):
    """Normalised hydrogen radial function R_nl(r), r in units of a0."""
    _check_nl(n, l)
    r = np.asarray(r, dtype=float)
    rho = 2.0 * r / n
    val = _radial_norm(n, l) * np.exp(-rho / 2) * rho**l * _laguerre(n - l - 1, 2 * l + 1, rho)
    return float(val) if val.ndim == 0 else val


def hydrogen_radial_deriv(n: int, l: int, r):
    """Analytic dR_nl/dr."""
    _check_nl(n, l)
    r = np.asarray(r, dtype=float)
    rho = 2.0 * r / n
    lag = _laguerre(n - l - 1, 2 * l + 1, rho)
    dlag = -_laguerre(n - l - 2, 2 * l + 2, rho)
    inner = rho**l * (dlag - 0.5 * lag)
    if l > 0:
        inner = inner + l * rho ** (l - 1) * lag
    val = (2.0 / n) * _radial_norm(n, l) * np.exp(-rho / 2) * inner
    return float(val) if val.ndim == 0 else val


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _leggauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def gauss_legendre(n: int):
    """Gauss-Legendre nodes and weights on [-1, 1]. Arrays are read-only."""
    if n < 2:
        raise ValueError("Gauss-Legendre rule needs n >= 2")
    return _leggauss(int(n))


def gauss_legendre_interval(n: int, a: float, b: float):
    x, w = gauss_legendre(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w
