"""Sphere quadrature and the discrete spherical harmonic transform.

Grids are Gauss-Legendre in cos(theta) crossed with equally spaced azimuth
nodes, exact for spherical polynomials up to the grid degree.  The forward
transform on such a grid is the brute-force oracle used to validate every
closed-form coupling identity in this package.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .basis import CoeffVector, build_T
from .sh import sh_matrix


@dataclass(frozen=True)
class QuadratureGrid:
    """Sampling nodes (theta, phi) and positive weights summing to 4*pi;
    integrates spherical polynomials of degree <= ``degree`` exactly."""

    theta: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    degree: int

    def __post_init__(self):
        for name in ("theta", "phi", "weights"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_nodes(self) -> int:
        return self.theta.size

    def integrate(self, values):
        """Weighted sum of samples taken at the grid nodes."""
        return np.sum(self.weights * np.asarray(values))


def build_grid(max_band: int) -> QuadratureGrid:
    """Product quadrature grid exact through spherical degree ``max_band``.

    Uses ceil((max_band+1)/2) Gauss-Legendre nodes in cos(theta) and
    max_band+1 uniform azimuth nodes with equal weights 2*pi/count.
    """
    if max_band < 0:
        raise ValueError("max_band must be non-negative")
    n_polar = (max_band + 2) // 2
    n_azi = max_band + 1
    x, w = np.polynomial.legendre.leggauss(n_polar)
    theta = np.arccos(x)
    phi = 2.0 * np.pi * np.arange(n_azi) / n_azi
    return QuadratureGrid(
        theta=np.repeat(theta, n_azi),
        phi=np.tile(phi, n_polar),
        weights=np.repeat(w * (2.0 * np.pi / n_azi), n_azi),
        degree=max_band,
    )


def forward_sht(grid: QuadratureGrid, values, basis: str, n_max: int) -> CoeffVector:
    """Project samples of a function at the grid nodes onto the harmonics.

    Exact when the sampled function is band-limited and ``grid.degree`` is
    at least the function band plus ``n_max``; aliasing on under-resolved
    grids is the caller's responsibility.
    """
    values = np.asarray(values)
    if values.shape != grid.theta.shape:
        raise ValueError("sample count does not match the grid")
    B = sh_matrix(basis, n_max, grid.theta, grid.phi)
    weighted = grid.weights * values
    if basis == "complex":
        return CoeffVector("complex", np.conj(B).T @ weighted)
    out = B.T @ weighted
    return CoeffVector("real", out)


def inverse_sht(v: CoeffVector, theta, phi) -> np.ndarray:
    """Synthesize the function values at the given angles."""
    B = sh_matrix(v.basis, v.n_max, theta, phi)
    return B @ v.data


def grid_function(grid: QuadratureGrid, v: CoeffVector) -> np.ndarray:
    """Function values of a coefficient vector at the grid nodes."""
    return inverse_sht(v, grid.theta, grid.phi)


def inner_products(f: CoeffVector, g: CoeffVector) -> tuple[complex, complex]:
    """Closed-form sphere inner products of two band-limited functions.

    Returns ``(hermitian, plain)`` where ``hermitian`` is the integral of
    conj(f)*g and ``plain`` the integral of f*g.
    """
    if f.basis != g.basis:
        raise ValueError("coefficient vectors use different bases")
    if f.n_max != g.n_max:
        raise ValueError("coefficient vectors have different orders")
    hermitian = np.vdot(f.data, g.data)
    if f.basis == "real":
        plain = f.data @ g.data
    else:
        plain = f.data @ (build_T(f.n_max).matrix @ g.data)
    return complex(hermitian), complex(plain)
