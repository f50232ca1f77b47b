"""Gaunt coupling coefficients and coefficient-domain spherical multiplication.

A Gaunt coefficient is the sphere integral of a product of three spherical
harmonics; arranged into matrices over ACN-indexed factor pairs, one matrix
per target harmonic, they turn pointwise multiplication of band-limited
spherical functions into bilinear forms of their coefficient vectors.

Complex-basis coefficients are evaluated by the direct formula through a
pair of Wigner 3-j symbols; real-basis ones by the unitary change of basis
applied to the complex matrices.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .basis import CoeffVector, build_U
from .quadrature import QuadratureGrid
from .sh import acn_index, acn_order_degree, num_coeffs, sh_matrix
from .wigner import wigner3j

_SQRT1_2 = 1.0 / math.sqrt(2.0)

#: largest imaginary residue tolerated when real-basis matrices are formed
IMAG_RESIDUE_ATOL = 1e-13


def _cruzan(n1, m1, n2, m2, n, m, fast):
    pref = ((-1) ** m) * math.sqrt(
        (2 * n + 1) * (2 * n1 + 1) * (2 * n2 + 1) / (4.0 * math.pi))
    return (pref * wigner3j(n, n1, n2, 0, 0, 0, fast=fast)
            * wigner3j(n, n1, n2, -m, m1, m2, fast=fast))


def gaunt_complex(n1: int, m1: int, n2: int, m2: int, n: int, m: int,
                  fast: bool = False) -> float:
    """Coupling coefficient of complex harmonics (n1,m1) and (n2,m2) onto
    the target harmonic (n,m).

    Structurally zero entries (degree sum, triangle or parity violation)
    return exactly 0.0 without evaluating the formula.
    """
    if abs(m1) > n1 or abs(m2) > n2 or abs(m) > n:
        raise ValueError("degree exceeds order")
    if m != m1 + m2:
        return 0.0
    if n < abs(n1 - n2) or n > n1 + n2:
        return 0.0
    if (n + n1 + n2) & 1:
        return 0.0
    return _cruzan(n1, m1, n2, m2, n, m, fast)


def _u_row(m: int):
    """Nonzero entries of the real-from-complex combination for degree m,
    as (complex degree, coefficient) pairs."""
    if m == 0:
        return ((0, 1.0),)
    if m > 0:
        return ((-m, _SQRT1_2), (m, _SQRT1_2 * ((-1) ** m)))
    return ((m, 1j * _SQRT1_2), (-m, -1j * _SQRT1_2 * ((-1) ** m)))


def gaunt_real(n1: int, m1: int, n2: int, m2: int, n: int, m: int,
               fast: bool = False) -> float:
    """Coupling coefficient of real harmonics, via the complex ones.

    Expands each real harmonic into at most two complex ones, so the value
    is a combination of at most eight complex coefficients.
    """
    if abs(m1) > n1 or abs(m2) > n2 or abs(m) > n:
        raise ValueError("degree exceeds order")
    if n < abs(n1 - n2) or n > n1 + n2 or (n + n1 + n2) & 1:
        return 0.0
    total = 0.0 + 0.0j
    for mu1, c1 in _u_row(m1):
        for mu2, c2 in _u_row(m2):
            for mu, c in _u_row(m):
                if mu1 + mu2 != -mu:  # degree rule of the complex entry
                    continue
                g = gaunt_complex(n1, mu1, n2, mu2, n, -mu, fast=fast)
                if g:
                    total += c1 * c2 * c * ((-1) ** mu) * g
    if abs(total.imag) > IMAG_RESIDUE_ATOL * max(1.0, abs(total.real)):
        raise ArithmeticError(
            f"real coupling coefficient has imaginary residue {total.imag:.3e}")
    return total.real


def gaunt_real_oracle(n1: int, m1: int, n2: int, m2: int, n: int, m: int,
                      grid: QuadratureGrid) -> float:
    """Brute-force quadrature of the triple product of real harmonics.

    Exists solely to validate the closed-form path; the grid degree must
    cover the product band n1 + n2 + n.
    """
    if grid.degree < n1 + n2 + n:
        raise ValueError(
            f"grid degree {grid.degree} under-resolves product band {n1 + n2 + n}")
    cols = []
    for nn, mm in ((n1, m1), (n2, m2), (n, m)):
        cols.append(sh_matrix("real", nn, grid.theta, grid.phi)[:, acn_index(nn, mm)])
    return float(np.sum(grid.weights * cols[0] * cols[1] * cols[2]))


@dataclass(frozen=True)
class GauntMatrix:
    """Coupling matrix for one target harmonic (n, m): entry (q, l) couples
    the ACN-q harmonic of the first factor with the ACN-l harmonic of the
    second."""

    basis: str
    n1: int
    n2: int
    n: int
    m: int
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        data = np.asarray(self.data)
        data.setflags(write=False)
        object.__setattr__(self, "data", data)


@dataclass(frozen=True)
class GauntTable:
    """Stack of coupling matrices for every target (n, m) with
    n <= n1 + n2, in ACN order."""

    basis: str
    n1: int
    n2: int
    matrices: tuple = field(repr=False)

    def __post_init__(self):
        if len(self.matrices) != num_coeffs(self.n1 + self.n2):
            raise ValueError("matrix stack has the wrong length")

    def matrix(self, n: int, m: int) -> GauntMatrix:
        if n > self.n1 + self.n2:
            raise ValueError(f"target order {n} outside table range")
        return self.matrices[acn_index(n, m)]

    def stack(self) -> np.ndarray:
        """All matrices as one array, target index first."""
        return np.stack([g.data for g in self.matrices])

    @property
    def n_targets(self) -> int:
        return len(self.matrices)


def _complex_block(n1, n2, n, m, fast):
    out = np.zeros((num_coeffs(n1), num_coeffs(n2)))
    if abs(m) > n:
        return out
    for np1 in range(n1 + 1):
        lo = abs(n - np1)
        for mp1 in range(-np1, np1 + 1):
            mp2 = m - mp1
            q = acn_index(np1, mp1)
            start = max(lo, abs(mp2))
            # keep n + np1 + np2 even
            if (n + np1 + start) & 1:
                start += 1
            for np2 in range(start, min(n2, n + np1) + 1, 2):
                out[q, acn_index(np2, mp2)] = _cruzan(np1, mp1, np2, mp2, n, m, fast)
    return out


def _real_block(n1, n2, n, m, fast, block_of=None):
    """Real-basis block for target (n, m) from the complex blocks of the
    literal degrees m and -m."""
    if block_of is None:
        def block_of(mm):
            return _complex_block(n1, n2, n, mm, fast)
    if m == 0:
        mid = block_of(0).astype(complex)
        coef = 1.0
    elif m > 0:
        mid = block_of(-m) + ((-1) ** m) * block_of(m)
        coef = _SQRT1_2
    else:
        mid = block_of(m) - ((-1) ** m) * block_of(-m)
        coef = -1j * _SQRT1_2  # 1/(i sqrt 2)
    u1 = build_U(n1).matrix
    u2 = build_U(n2).matrix
    out = coef * (u1 @ mid @ u2.T)
    scale = max(1.0, float(np.max(np.abs(out.real))))
    resid = float(np.max(np.abs(out.imag)))
    if resid > IMAG_RESIDUE_ATOL * scale:
        raise ArithmeticError(
            f"real coupling matrix ({n},{m}) has imaginary residue {resid:.3e}")
    return np.ascontiguousarray(out.real)


def gaunt_matrix(basis: str, n1: int, n2: int, n: int, m: int,
                 fast: bool = False) -> GauntMatrix:
    """Coupling matrix of factor orders (n1, n2) for target harmonic (n, m)."""
    if basis not in ("complex", "real"):
        raise ValueError(f"unknown basis {basis!r}")
    if not (0 <= n <= n1 + n2) or abs(m) > n:
        raise ValueError(f"target ({n},{m}) out of range for orders ({n1},{n2})")
    if basis == "complex":
        data = _complex_block(n1, n2, n, m, fast)
    else:
        data = _real_block(n1, n2, n, m, fast)
    return GauntMatrix(basis, n1, n2, n, m, data)


def _block_job(args):
    n1, n2, n, m, fast = args
    return _complex_block(n1, n2, n, m, fast)


def _resolve_workers(workers):
    if workers is None:
        env = os.environ.get("GSHT_THREADS")
        if env is None:
            return 1
        workers = int(env)
    if workers == 0:
        return os.cpu_count() or 1
    return max(1, int(workers))


def _complex_stack(n1, n2, fast, workers):
    targets = [acn_order_degree(t) for t in range(num_coeffs(n1 + n2))]
    jobs = [(n1, n2, n, m, fast) for n, m in targets]
    if workers > 1 and len(jobs) > 8:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_block_job, jobs, chunksize=8))
    return [_block_job(j) for j in jobs]


def build_table(basis: str, n1: int, n2: int, fast: bool = False,
                workers: int | None = None) -> GauntTable:
    """Build the full stack of coupling matrices for factor orders (n1, n2).

    Parameters
    ----------
    basis : 'complex' or 'real'
    n1, n2 : int
        Maximum orders of the two factors.
    fast : bool
        Use the log-factorial path for the underlying 3-j symbols.
    workers : int, optional
        Process count for the per-target fill; ``None`` reads the
        GSHT_THREADS environment variable (unset means serial, 0 means one
        worker per CPU).  The output is identical for any worker count.
    """
    if basis not in ("complex", "real"):
        raise ValueError(f"unknown basis {basis!r}")
    if n1 < 0 or n2 < 0:
        raise ValueError("factor orders must be non-negative")
    workers = _resolve_workers(workers)
    blocks = _complex_stack(n1, n2, fast, workers)
    matrices = []
    for t, blk in enumerate(blocks):
        n, m = acn_order_degree(t)
        if basis == "complex":
            matrices.append(GauntMatrix(basis, n1, n2, n, m, blk))
        else:
            data = _real_block(n1, n2, n, m, fast,
                               block_of=lambda mm, n=n: blocks[acn_index(n, mm)])
            matrices.append(GauntMatrix(basis, n1, n2, n, m, data))
    return GauntTable(basis, n1, n2, tuple(matrices))


def multiply_spherical(f: CoeffVector, g: CoeffVector,
                       table: GauntTable) -> CoeffVector:
    """Coefficients of the pointwise product of two band-limited functions.

    The product of factors of orders (Nf, Ng) is band-limited to Nf + Ng;
    the table must cover the factor orders in the matching basis.
    """
    if f.basis != g.basis:
        raise ValueError("factors use different bases")
    if f.basis != table.basis:
        raise ValueError("table basis does not match the factors")
    if f.n_max > table.n1 or g.n_max > table.n2:
        raise ValueError(
            f"table of orders ({table.n1},{table.n2}) too small for factors "
            f"({f.n_max},{g.n_max})")
    fv = np.zeros(num_coeffs(table.n1), dtype=f.data.dtype)
    gv = np.zeros(num_coeffs(table.n2), dtype=g.data.dtype)
    fv[:f.data.size] = f.data
    gv[:g.data.size] = g.data
    n_out = f.n_max + g.n_max
    out = np.empty(num_coeffs(n_out), dtype=np.result_type(fv, gv))
    for t in range(out.size):
        out[t] = fv @ table.matrices[t].data @ gv
    return CoeffVector(f.basis, out)
