"""Complex and real spherical harmonics on fixed, orthonormal (N3D) conventions.

Complex harmonics carry the Condon-Shortley phase ``(-1)^m`` in their
definition while the associated Legendre functions used here do not; the
real harmonics are phase-free and follow the ACN/N3D convention common in
Ambisonics.  Linear indexing is 0-based ACN throughout: ``q = n^2 + n + m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

TWO_PI = 2.0 * math.pi


def acn_index(n: int, m: int) -> int:
    """0-based ACN channel index of order ``n`` and degree ``m``."""
    if n < 0 or abs(m) > n:
        raise ValueError(f"invalid order/degree pair ({n}, {m})")
    return n * n + n + m


def acn_order_degree(q: int) -> tuple[int, int]:
    """Inverse of :func:`acn_index`."""
    if q < 0:
        raise ValueError("ACN index must be non-negative")
    n = math.isqrt(q)
    return n, q - n * n - n


def num_coeffs(n_max: int) -> int:
    return (n_max + 1) ** 2


def max_order(n_coeffs: int) -> int:
    """Max order of a coefficient vector of the given length."""
    n = math.isqrt(n_coeffs) - 1
    if (n + 1) ** 2 != n_coeffs:
        raise ValueError(f"{n_coeffs} is not a square coefficient count")
    return n


@dataclass(frozen=True)
class Direction:
    """Direction on the unit sphere: inclination ``theta`` in [0, pi] and
    azimuth ``phi`` reduced to [0, 2*pi)."""

    theta: float
    phi: float

    def __post_init__(self):
        theta = float(self.theta)
        if not 0.0 <= theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {theta}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", float(self.phi) % TWO_PI)

    @classmethod
    def from_vector(cls, v) -> "Direction":
        """Direction of a 3-vector; the zero vector maps to +z."""
        v = np.asarray(v, dtype=float)
        r = float(np.linalg.norm(v))
        if r == 0.0:
            return cls(0.0, 0.0)
        theta = math.acos(min(1.0, max(-1.0, v[2] / r)))
        return cls(theta, math.atan2(v[1], v[0]))

    @property
    def unit_vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi),
                         st * math.sin(self.phi),
                         math.cos(self.theta)])


def assoc_legendre(n: int, m: int, x: float) -> float:
    """Unnormalized associated Legendre function P_{n,m}(x), 0 <= m <= n.

    No Condon-Shortley factor.  Evaluated by the three-term recursion in
    the order, which is stable for increasing ``n`` at fixed ``m``.
    """
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got n={n}, m={m}")
    if abs(x) > 1.0:
        raise ValueError(f"argument must lie in [-1, 1], got {x}")
    somx2 = math.sqrt((1.0 - x) * (1.0 + x))
    pmm = 1.0
    for k in range(1, m + 1):
        pmm *= (2 * k - 1) * somx2
    if n == m:
        return pmm
    pnm = x * (2 * m + 1) * pmm
    if n == m + 1:
        return pnm
    for nn in range(m + 2, n + 1):
        pmm, pnm = pnm, (x * (2 * nn - 1) * pnm - (nn + m - 1) * pmm) / (nn - m)
    return pnm


@lru_cache(maxsize=None)
def _sh_norm(n: int, m: int) -> float:
    # sqrt((2n+1)(n-m)! / (4 pi (n+m)!)) with the rational part exact
    rad = Fraction((2 * n + 1) * math.factorial(n - m), math.factorial(n + m))
    return math.sqrt(float(rad)) / math.sqrt(4.0 * math.pi)


def sh_complex(n: int, m: int, theta: float, phi: float) -> complex:
    """Complex spherical harmonic Y_{n,m}, Condon-Shortley phase included."""
    if abs(m) > n:
        raise ValueError(f"invalid order/degree pair ({n}, {m})")
    if m < 0:
        # Y_{n,-|m|} = (-1)^{|m|} conj(Y_{n,|m|})
        return ((-1) ** (-m)) * sh_complex(n, -m, theta, phi).conjugate()
    amp = ((-1) ** m) * _sh_norm(n, m) * assoc_legendre(n, m, math.cos(theta))
    return complex(amp * math.cos(m * phi), amp * math.sin(m * phi))


def sh_real(n: int, m: int, theta: float, phi: float) -> float:
    """Real spherical harmonic R_{n,m} (orthonormal, no Condon-Shortley)."""
    if abs(m) > n:
        raise ValueError(f"invalid order/degree pair ({n}, {m})")
    am = abs(m)
    amp = _sh_norm(n, am) * assoc_legendre(n, am, math.cos(theta))
    if m > 0:
        return amp * math.sqrt(2.0) * math.cos(m * phi)
    if m < 0:
        return amp * math.sqrt(2.0) * math.sin(am * phi)
    return amp


def _legendre_table(n_max: int, x: np.ndarray) -> np.ndarray:
    """P_{n,m}(x) for all 0 <= m <= n <= n_max, shape (n_max+1, n_max+1, Q)."""
    x = np.asarray(x, dtype=float)
    P = np.zeros((n_max + 1, n_max + 1) + x.shape)
    somx2 = np.sqrt(np.maximum(0.0, (1.0 - x) * (1.0 + x)))
    P[0, 0] = 1.0
    for m in range(1, n_max + 1):
        P[m, m] = (2 * m - 1) * somx2 * P[m - 1, m - 1]
    for m in range(n_max):
        P[m + 1, m] = (2 * m + 1) * x * P[m, m]
    for m in range(n_max + 1):
        for n in range(m + 2, n_max + 1):
            P[n, m] = (x * (2 * n - 1) * P[n - 1, m] - (n + m - 1) * P[n - 2, m]) / (n - m)
    return P


def sh_matrix(basis: str, n_max: int, theta, phi) -> np.ndarray:
    """Evaluate all spherical harmonics up to ``n_max`` at given angles.

    Parameters
    ----------
    basis : 'complex' or 'real'
    n_max : int
        Maximum order.
    theta, phi : array_like, shape (Q,)
        Inclination and azimuth in radians.

    Returns
    -------
    ndarray, shape (Q, (n_max+1)**2)
        Columns in ACN order; complex dtype for the complex basis.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    if theta.shape != phi.shape:
        raise ValueError("theta and phi must have the same shape")
    P = _legendre_table(n_max, np.cos(theta))
    q_count = num_coeffs(n_max)
    if basis == "complex":
        out = np.zeros((theta.size, q_count), dtype=complex)
        for n in range(n_max + 1):
            for m in range(n + 1):
                col = ((-1) ** m) * _sh_norm(n, m) * P[n, m] * np.exp(1j * m * phi)
                out[:, acn_index(n, m)] = col
                if m > 0:
                    out[:, acn_index(n, -m)] = ((-1) ** m) * np.conj(col)
        return out
    if basis == "real":
        out = np.zeros((theta.size, q_count))
        sq2 = math.sqrt(2.0)
        for n in range(n_max + 1):
            out[:, acn_index(n, 0)] = _sh_norm(n, 0) * P[n, 0]
            for m in range(1, n + 1):
                amp = sq2 * _sh_norm(n, m) * P[n, m]
                out[:, acn_index(n, m)] = amp * np.cos(m * phi)
                out[:, acn_index(n, -m)] = amp * np.sin(m * phi)
        return out
    raise ValueError(f"unknown basis {basis!r}")


def sh_vector(basis: str, n_max: int, theta: float, phi: float) -> np.ndarray:
    """All spherical harmonics up to ``n_max`` at one direction, ACN order."""
    return sh_matrix(basis, n_max, [theta], [phi])[0]
