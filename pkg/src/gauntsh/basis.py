"""Conversion between the complex and real spherical-harmonic bases.

The two bases are connected by block-diagonal unitary matrices (one block
per order); conjugation of a complex-basis vector is a signed anti-diagonal
permutation per order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .sh import max_order, num_coeffs

#: relative imaginary residue allowed when real coefficients are expected
REAL_RESIDUE_RTOL = 1e-10

_SQRT1_2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class CoeffVector:
    """Spherical-harmonic coefficient vector in ACN order.

    ``basis`` is ``'complex'`` or ``'real'`` and names the basis functions
    the coefficients multiply; real-basis vectors of complex-valued
    functions legitimately carry complex data.
    """

    basis: str
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.basis not in ("complex", "real"):
            raise ValueError(f"unknown basis {self.basis!r}")
        data = np.array(self.data, copy=True)
        if data.ndim != 1:
            raise ValueError("coefficient data must be one-dimensional")
        max_order(data.size)  # validates the square length
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def n_max(self) -> int:
        return max_order(self.data.size)

    def __len__(self) -> int:
        return self.data.size


def _u_block(n: int) -> np.ndarray:
    """Unitary (2n+1)x(2n+1) block mapping complex to real harmonics of
    order n: rows indexed by the real degree, columns by the complex one."""
    dim = 2 * n + 1
    blk = np.zeros((dim, dim), dtype=complex)
    for m in range(-n, n + 1):
        r = m + n
        if m == 0:
            blk[r, n] = 1.0
        elif m > 0:
            blk[r, n - m] = _SQRT1_2
            blk[r, n + m] = _SQRT1_2 * ((-1) ** m)
        else:
            blk[r, n + m] = 1j * _SQRT1_2
            blk[r, n - m] = -1j * _SQRT1_2 * ((-1) ** m)
    return blk


@dataclass(frozen=True)
class BasisMap:
    """Block-diagonal unitary complex-to-real change of basis up to order
    ``n_max``; ``matrix`` applied to a stacked complex-harmonic vector
    yields the real-harmonic vector."""

    n_max: int
    blocks: tuple = field(repr=False)

    @cached_property
    def matrix(self) -> np.ndarray:
        full = np.zeros((num_coeffs(self.n_max),) * 2, dtype=complex)
        at = 0
        for blk in self.blocks:
            d = blk.shape[0]
            full[at:at + d, at:at + d] = blk
            at += d
        full.setflags(write=False)
        return full


@dataclass(frozen=True)
class ConjugationMap:
    """Per-order symmetric anti-diagonal sign maps sending a complex-basis
    harmonic vector to its conjugate."""

    n_max: int
    signs: tuple = field(repr=False)  # per order, entries along the anti-diagonal

    @cached_property
    def matrix(self) -> np.ndarray:
        full = np.zeros((num_coeffs(self.n_max),) * 2)
        at = 0
        for sgn in self.signs:
            d = sgn.size
            full[at:at + d, at:at + d] = np.fliplr(np.diag(sgn))
            at += d
        full.setflags(write=False)
        return full


@lru_cache(maxsize=None)
def build_U(n_max: int) -> BasisMap:
    """Complex-to-real change-of-basis map up to order ``n_max``."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    blocks = tuple(_u_block(n) for n in range(n_max + 1))
    return BasisMap(n_max, blocks)


@lru_cache(maxsize=None)
def build_T(n_max: int) -> ConjugationMap:
    """Conjugation map: entry (m, -m) of each order block is (-1)^m."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    # anti-diagonal read top-to-bottom touches degrees m = -n ... n; the
    # entry on row m sits at column -m and carries (-1)^m
    signs = tuple(np.array([(-1.0) ** m for m in range(-n, n + 1)])
                  for n in range(n_max + 1))
    return ConjugationMap(n_max, signs)


def convert_coeffs(v: CoeffVector, target: str) -> CoeffVector:
    """Convert a coefficient vector between the complex and real bases.

    Converting to the real basis asserts that the represented function is
    real-valued (imaginary residue below ``REAL_RESIDUE_RTOL`` relative to
    the vector norm) and drops the residue.
    """
    if target not in ("complex", "real"):
        raise ValueError(f"unknown basis {target!r}")
    if v.basis == target:
        return v
    U = build_U(v.n_max).matrix
    if target == "complex":
        # f^T = fhat^T U
        return CoeffVector("complex", U.T @ v.data.astype(complex))
    # fhat^T = f^T U^H
    out = np.conj(U) @ v.data
    scale = float(np.linalg.norm(out))
    resid = float(np.max(np.abs(out.imag)))
    if scale > 0.0 and resid > REAL_RESIDUE_RTOL * scale:
        raise ValueError(
            "coefficients do not describe a real-valued function "
            f"(imaginary residue {resid:.3e})")
    return CoeffVector("real", out.real)


def conjugate_coeffs(v: CoeffVector) -> CoeffVector:
    """Coefficients of the pointwise-conjugated function."""
    if v.basis == "real":
        return CoeffVector("real", np.conj(v.data))
    T = build_T(v.n_max).matrix
    return CoeffVector("complex", T @ np.conj(v.data))
