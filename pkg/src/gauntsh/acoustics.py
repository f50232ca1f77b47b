"""Coefficient-domain operators for spherical acoustics and Ambisonics.

Everything here works on real-basis ACN coefficient vectors of a
plane-wave amplitude density (complex dtype allowed, the density is a
complex function in general): evaluation of pressure and particle
velocity away from the origin, translation of the expansion origin,
intensity and energy vectors, directional windowing and masking, binaural
beamforming, array transfer-function modeling with least-squares encoders,
and diffuse-field covariance models.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import spherical_jn

from .gaunt import GauntTable, build_table
from .quadrature import build_grid
from .sh import Direction, acn_order_degree, max_order, num_coeffs, sh_matrix, sh_vector

DEFAULT_SOUND_SPEED = 343.0  # m/s
DEFAULT_AIR_DENSITY = 1.2    # kg/m^3


@lru_cache(maxsize=16)
def _cached_table(basis, n1, n2) -> GauntTable:
    return build_table(basis, n1, n2)


def _as_direction(u) -> Direction:
    if isinstance(u, Direction):
        return u
    return Direction.from_vector(u)


def _split_position(x):
    x = np.asarray(x, dtype=float)
    if x.shape != (3,):
        raise ValueError("position must be a 3-vector")
    return float(np.linalg.norm(x)), Direction.from_vector(x)


def recommended_expansion_order(kd: float) -> int:
    """Truncation order for the plane-wave expansion at wavenumber-distance
    kd, with a safety margin of two orders."""
    return math.ceil(math.e * kd / 2.0) + 2


@dataclass(frozen=True)
class RadialDiag:
    """Diagonal radial factor of the interior field expansion: entry q
    holds 4*pi i^n j_n(k d) for the ACN order n of q."""

    n_max: int
    k: float
    d: float
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        entries = np.asarray(self.entries)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.entries)


def radial_diag(n_max: int, k: float, d: float) -> RadialDiag:
    """Radial weights 4*pi i^n j_n(kd) on the ACN diagonal."""
    if k < 0 or d < 0:
        raise ValueError("wavenumber and distance must be non-negative")
    orders = np.arange(n_max + 1)
    jn = spherical_jn(orders, k * d)
    per_order = 4.0 * np.pi * (1j ** orders) * jn
    entries = np.repeat(per_order, 2 * orders + 1)
    return RadialDiag(n_max, k, d, entries)


def plane_wave_coeffs(u, k: float, x, n_exp: int):
    """Factorized truncated expansion of exp(i k u.x).

    Returns the pair ``(r_u, jr_x)`` whose dot product approximates the
    plane-wave phase term: the harmonic vector at the incidence direction
    ``u`` and the radially weighted harmonic vector at the direction of the
    evaluation point ``x``.
    """
    u = _as_direction(u)
    d, xdir = _split_position(x)
    r_u = sh_vector("real", n_exp, u.theta, u.phi)
    jr_x = radial_diag(n_exp, k, d).entries * sh_vector(
        "real", n_exp, xdir.theta, xdir.phi)
    return r_u, jr_x


def pressure_at(a, k: float, x) -> complex:
    """Acoustic pressure of the amplitude density ``a`` at position ``x``."""
    a = np.asarray(a)
    n = max_order(a.size)
    d, xdir = _split_position(x)
    jr = radial_diag(n, k, d).entries * sh_vector("real", n, xdir.theta, xdir.phi)
    return complex(a @ jr)


def velocity_at(a, k: float, x, n_exp: int | None = None,
                c: float = DEFAULT_SOUND_SPEED,
                rho0: float = DEFAULT_AIR_DENSITY) -> np.ndarray:
    """Particle velocity vector (x, y, z components) at position ``x``.

    The expansion order ``n_exp`` of the phase term defaults to one more
    than the density order, which makes the closed form exact.
    """
    a = np.asarray(a)
    n = max_order(a.size)
    d, xdir = _split_position(x)
    if n_exp is None:
        n_exp = max(n + 1, recommended_expansion_order(k * d))
    jr = radial_diag(n_exp, k, d).entries * sh_vector(
        "real", n_exp, xdir.theta, xdir.phi)
    table = _cached_table("real", n, n_exp)
    pref = -math.sqrt(4.0 * math.pi / 3.0) / (c * rho0)
    return pref * np.array([a @ table.matrix(1, mm).data @ jr
                            for mm in (1, -1, 0)])


def intensity_at(a, k: float, x, n_exp: int | None = None,
                 c: float = DEFAULT_SOUND_SPEED,
                 rho0: float = DEFAULT_AIR_DENSITY) -> np.ndarray:
    """Complex acoustic intensity vector at ``x``: half the conjugate
    pressure times the particle velocity.  Take the real part for the
    active intensity."""
    p = pressure_at(a, k, x)
    v = velocity_at(a, k, x, n_exp=n_exp, c=c, rho0=rho0)
    return 0.5 * np.conj(p) * v


def energy_vector(a) -> np.ndarray:
    """Power-weighted mean direction of the amplitude density.

    Real 3-vector with magnitude below one for any spread density; used as
    a localization proxy for Ambisonic decoders.
    """
    a = np.asarray(a)
    norm2 = float(np.vdot(a, a).real)
    if norm2 == 0.0:
        raise ValueError("energy vector of a zero-energy density")
    n = max_order(a.size)
    table = _cached_table("real", n, n)
    comps = np.array([np.vdot(a, table.matrix(1, mm).data @ a)
                      for mm in (1, -1, 0)])
    return math.sqrt(4.0 * math.pi / 3.0) * comps.real / norm2


def translate_coeffs(a, k: float, x, n_exp: int,
                     table: GauntTable | None = None) -> np.ndarray:
    """Density coefficients seen from an origin translated by ``x``.

    The translated density is the original times the plane-wave phase term,
    band-limited to the density order plus ``n_exp``.  Output is complex in
    the real basis.
    """
    a = np.asarray(a)
    n = max_order(a.size)
    if table is None:
        table = _cached_table("real", n, n_exp)
    if table.basis != "real":
        raise ValueError("translation needs a real-basis table")
    if table.n1 < n or table.n2 < n_exp:
        raise ValueError(
            f"table of orders ({table.n1},{table.n2}) too small for "
            f"density order {n} and expansion order {n_exp}")
    d, xdir = _split_position(x)
    jr = np.zeros(num_coeffs(table.n2), dtype=complex)
    jr[:num_coeffs(n_exp)] = radial_diag(n_exp, k, d).entries * sh_vector(
        "real", n_exp, xdir.theta, xdir.phi)
    av = np.zeros(num_coeffs(table.n1), dtype=complex)
    av[:a.size] = a
    out = np.array([av @ table.matrices[t].data @ jr
                    for t in range(num_coeffs(n + n_exp))])
    return out


def window_matrix(w, n_in: int, table: GauntTable | None = None,
                  truncate: bool = False) -> np.ndarray:
    """Matrix applying a directional weighting in the coefficient domain.

    ``w`` holds the real-basis coefficients of the weighting function.  The
    returned matrix W satisfies ``a_out = W.T @ a_in`` with the output
    order being the sum of the input and window orders; ``truncate`` keeps
    the output at the input order instead (inexact but common practice).
    """
    w = np.asarray(w)
    n_w = max_order(w.size)
    if table is None:
        table = _cached_table("real", n_in, n_w)
    if table.n1 < n_in or table.n2 < n_w:
        raise ValueError("table too small for the requested orders")
    wv = np.zeros(num_coeffs(table.n2), dtype=w.dtype)
    wv[:w.size] = w
    n_out = n_in if truncate else n_in + n_w
    cols = [table.matrices[t].data[:num_coeffs(n_in)] @ wv
            for t in range(num_coeffs(n_out))]
    return np.stack(cols, axis=1)


def steer_axisymmetric(per_order, u0) -> np.ndarray:
    """Coefficients of an axisymmetric pattern re-centered on ``u0``.

    ``per_order`` holds the zonal coefficients (degree-zero column) of the
    pattern aligned with +z.
    """
    per_order = np.asarray(per_order)
    n = per_order.size - 1
    u0 = _as_direction(u0)
    r = sh_vector("real", n, u0.theta, u0.phi)
    out = np.empty(num_coeffs(n), dtype=np.result_type(per_order, float))
    for q in range(out.size):
        nn, _ = acn_order_degree(q)
        out[q] = per_order[nn] * math.sqrt(4.0 * math.pi / (2 * nn + 1)) * r[q]
    return out


def binaural_beam_matrices(hrtf_coeffs, n_field: int,
                           table: GauntTable | None = None) -> np.ndarray:
    """Precomputed per-target contraction of HRTF coefficients with the
    coupling matrices.

    ``hrtf_coeffs`` is the 2 x (N'+1)^2 matrix of left/right HRTF
    coefficients.  Returns an array of shape (targets, 2, (n_field+1)^2)
    for targets up to ``n_field``.
    """
    H = np.asarray(hrtf_coeffs)
    if H.ndim != 2 or H.shape[0] != 2:
        raise ValueError("HRTF coefficients must have shape (2, (N'+1)^2)")
    n_h = max_order(H.shape[1])
    if table is None:
        table = _cached_table("real", n_h, n_field)
    if table.n1 < n_h or table.n2 < n_field:
        raise ValueError("table too small for the requested orders")
    d_field = num_coeffs(n_field)
    return np.stack([H @ table.matrices[t].data[:H.shape[1], :d_field]
                     for t in range(d_field)])


def binaural_beamform(beam_matrices: np.ndarray, a, w) -> np.ndarray:
    """Left/right signals of a beamformed binaural decode: the density
    ``a`` is weighted by the beam pattern ``w`` and rendered through the
    precomputed HRTF contraction."""
    a = np.asarray(a)
    w = np.asarray(w)
    if beam_matrices.shape[0] != a.size or beam_matrices.shape[2] != w.size:
        raise ValueError("beam matrices do not match the input orders")
    return np.einsum("t,tij,j->i", a, beam_matrices, w)


def binaural_beam_weights(beam_matrices: np.ndarray, w) -> np.ndarray:
    """2 x (N+1)^2 matrix mapping density coefficients directly to the
    left/right outputs for a fixed beam pattern ``w``."""
    return np.einsum("tij,j->it", beam_matrices, np.asarray(w))


def sh_rotation_matrix(rotation, n_max: int) -> np.ndarray:
    """Block-diagonal matrix rotating real-basis harmonic vectors:
    ``r(R u) = M r(u)``.

    Built by quadrature projection of the rotated harmonics, exact for the
    grid degree used; blocks are orthogonal.
    """
    R = np.asarray(rotation, dtype=float)
    if R.shape != (3, 3) or np.max(np.abs(R @ R.T - np.eye(3))) > 1e-10 \
            or abs(np.linalg.det(R) - 1.0) > 1e-10:
        raise ValueError("not a proper rotation matrix")
    grid = build_grid(2 * n_max)
    st = np.sin(grid.theta)
    vecs = np.stack([st * np.cos(grid.phi), st * np.sin(grid.phi),
                     np.cos(grid.theta)], axis=1)
    rot = vecs @ R.T
    theta_r = np.arccos(np.clip(rot[:, 2], -1.0, 1.0))
    phi_r = np.arctan2(rot[:, 1], rot[:, 0])
    base = sh_matrix("real", n_max, grid.theta, grid.phi)
    rotated = sh_matrix("real", n_max, theta_r, phi_r)
    full = rotated.T @ (grid.weights[:, None] * base)
    out = np.zeros_like(full)
    for n in range(n_max + 1):
        lo, hi = n * n, (n + 1) ** 2
        out[lo:hi, lo:hi] = full[lo:hi, lo:hi]
    return out


@dataclass(frozen=True)
class Sensor:
    """One array element: position, orientation, and the real-basis
    coefficients of its directivity in its own coordinate frame."""

    position: np.ndarray
    rotation: np.ndarray
    directivity: np.ndarray

    def __post_init__(self):
        pos = np.asarray(self.position, dtype=float)
        rot = np.asarray(self.rotation, dtype=float)
        drv = np.asarray(self.directivity)
        if pos.shape != (3,):
            raise ValueError("sensor position must be a 3-vector")
        if rot.shape != (3, 3) or np.max(np.abs(rot @ rot.T - np.eye(3))) > 1e-10 \
                or abs(np.linalg.det(rot) - 1.0) > 1e-10:
            raise ValueError("sensor orientation is not a proper rotation")
        max_order(drv.size)
        for name, val in (("position", pos), ("rotation", rot),
                          ("directivity", drv)):
            val.setflags(write=False)
            object.__setattr__(self, name, val)


@dataclass(frozen=True)
class ArrayModel:
    """A microphone array as a tuple of sensors."""

    sensors: tuple

    def __post_init__(self):
        object.__setattr__(self, "sensors", tuple(self.sensors))

    def __len__(self) -> int:
        return len(self.sensors)


def array_sensor_coeffs(model: ArrayModel, q: int, k: float, n_exp: int,
                        n_out: int | None = None,
                        table: GauntTable | None = None) -> np.ndarray:
    """Harmonic coefficients of one sensor's far-field response in the
    array frame: the rotated directivity times the spacing phase term."""
    s = model.sensors[q]
    n_dir = max_order(s.directivity.size)
    if n_out is None:
        n_out = n_dir + n_exp
    if n_out > n_dir + n_exp:
        raise ValueError("output order exceeds the expansion band")
    if table is None:
        table = _cached_table("real", n_dir, n_exp)
    if table.n1 < n_dir or table.n2 < n_exp:
        raise ValueError("table too small for the requested orders")
    rot_coeffs = sh_rotation_matrix(s.rotation, n_dir) @ s.directivity
    d, xdir = _split_position(s.position)
    jr = np.zeros(num_coeffs(table.n2), dtype=complex)
    jr[:num_coeffs(n_exp)] = radial_diag(n_exp, k, d).entries * sh_vector(
        "real", n_exp, xdir.theta, xdir.phi)
    dv = np.zeros(num_coeffs(table.n1), dtype=complex)
    dv[:rot_coeffs.size] = rot_coeffs
    return np.array([dv @ table.matrices[t].data @ jr
                     for t in range(num_coeffs(n_out))])


def array_atf_matrix(model: ArrayModel, k: float, n_exp: int,
                     n_out: int) -> np.ndarray:
    """Stacked sensor coefficients: rows are sensors, columns ACN."""
    return np.stack([array_sensor_coeffs(model, q, k, n_exp, n_out)
                     for q in range(len(model))])


def encoding_filters_ls(atf_coeffs, target_order: int,
                        reg: float = 0.0) -> np.ndarray:
    """Regularized least-squares encoder from measured array coefficients.

    Solves for the matrix turning sensor signals into harmonic signals of
    ``target_order``, with ridge regularization ``reg``; an unregularized
    ill-conditioned system raises.
    """
    H = np.asarray(atf_coeffs)
    n = max_order(H.shape[1])
    if target_order > n:
        raise ValueError("target order exceeds the coefficient order")
    if reg < 0:
        raise ValueError("regularization must be non-negative")
    S = H @ np.conj(H).T + (reg ** 2) * np.eye(H.shape[0])
    if reg == 0.0 and np.linalg.cond(S) > 1e12:
        raise np.linalg.LinAlgError(
            "unregularized encoding system is numerically singular")
    X = np.linalg.solve(S, H[:, :num_coeffs(target_order)])
    return np.conj(X).T


@dataclass(frozen=True)
class DirectionalPSD:
    """Real-basis coefficients of a directional power spectral density.

    Construction checks non-negativity of the reconstructed density on a
    dense grid and warns (not errs) on undershoot, which band limitation
    can cause legitimately.
    """

    coeffs: np.ndarray
    k: float | None = None

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=float)
        n = max_order(coeffs.size)
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        grid = build_grid(max(8, 2 * n))
        vals = sh_matrix("real", n, grid.theta, grid.phi) @ coeffs
        floor = float(vals.min())
        if floor < -1e-10 * max(1.0, float(np.abs(vals).max())):
            warnings.warn(
                f"directional power density dips to {floor:.3e} on the "
                "validation grid", stacklevel=2)

    @property
    def n_max(self) -> int:
        return max_order(self.coeffs.size)


def _psd_coeffs(p) -> np.ndarray:
    if isinstance(p, DirectionalPSD):
        return p.coeffs
    return np.asarray(p)


def scm_isotropic_field(p_d: float, n_max: int) -> np.ndarray:
    """Covariance of the field coefficients in an isotropic diffuse field:
    the power density times the identity."""
    return p_d * np.eye(num_coeffs(n_max))


def scm_array_isotropic(atf_coeffs, p_d: float) -> np.ndarray:
    """Covariance of array signals in an isotropic diffuse field."""
    H = np.asarray(atf_coeffs)
    return p_d * (H @ np.conj(H).T)


def scm_anisotropic_field(p, n_max: int,
                          table: GauntTable | None = None) -> np.ndarray:
    """Covariance of the field coefficients under a direction-dependent
    power density given by real-basis coefficients ``p``.

    Density terms beyond twice the field order do not couple and drop out.
    """
    pc = _psd_coeffs(p)
    if table is None:
        table = _cached_table("real", n_max, n_max)
    if table.n1 < n_max or table.n2 < n_max:
        raise ValueError("table too small for the field order")
    dim = num_coeffs(n_max)
    out = np.zeros((dim, dim))
    for t in range(min(pc.size, table.n_targets)):
        if pc[t]:
            out += pc[t] * table.matrices[t].data[:dim, :dim]
    return out


def scm_array_anisotropic(atf_coeffs, p,
                          table: GauntTable | None = None) -> np.ndarray:
    """Covariance of array signals under an anisotropic diffuse field."""
    H = np.asarray(atf_coeffs)
    scm = scm_anisotropic_field(p, max_order(H.shape[1]), table=table)
    return H @ scm @ np.conj(H).T


def scm_spaced_isotropic(p_d: float, k: float, x, n_max: int,
                         n_exp: int,
                         table: GauntTable | None = None) -> np.ndarray:
    """Covariance between field coefficients captured at the origin and at
    position ``x`` in an isotropic diffuse field.

    Expansion terms beyond twice the field order vanish identically, so
    ``n_exp`` past that point changes nothing.
    """
    d, _ = _split_position(x)
    neg_dir = Direction.from_vector(-np.asarray(x, dtype=float))
    if table is None:
        table = _cached_table("real", n_max, n_max)
    if table.n1 < n_max or table.n2 < n_max:
        raise ValueError("table too small for the field order")
    n_terms = min(n_exp, table.n1 + table.n2)
    rv = sh_vector("real", n_terms, neg_dir.theta, neg_dir.phi)
    orders = np.arange(n_terms + 1)
    radial = (1j ** orders) * spherical_jn(orders, k * d)
    dim = num_coeffs(n_max)
    out = np.zeros((dim, dim), dtype=complex)
    for t in range(num_coeffs(n_terms)):
        nn, _ = acn_order_degree(t)
        w = radial[nn] * rv[t]
        if w:
            out += w * table.matrices[t].data[:dim, :dim]
    return 4.0 * np.pi * p_d * out


def scm_spaced_anisotropic(p, k: float, x, n_max: int,
                           n_exp: int | None = None,
                           field_table: GauntTable | None = None,
                           coupling_table: GauntTable | None = None) -> np.ndarray:
    """Covariance between field coefficients at the origin and at ``x``
    under an anisotropic diffuse field.

    The phase term and the density are multiplied in the coefficient
    domain (a product of four harmonics overall), contracting scalar
    coupling coefficients of the expansion and density orders with the
    field coupling matrices.
    """
    pc = _psd_coeffs(p)
    n_p = max_order(pc.size)
    if n_exp is None:
        n_exp = 2 * n_max + n_p
    d, _ = _split_position(x)
    neg_dir = Direction.from_vector(-np.asarray(x, dtype=float))
    if coupling_table is None:
        coupling_table = _cached_table("real", n_exp, n_p)
    if field_table is None:
        field_table = _cached_table("real", n_max, n_max)
    if coupling_table.n1 < n_exp or coupling_table.n2 < n_p:
        raise ValueError("coupling table too small")
    if field_table.n1 < n_max or field_table.n2 < n_max:
        raise ValueError("field table too small")
    rv = sh_vector("real", n_exp, neg_dir.theta, neg_dir.phi)
    orders = np.arange(n_exp + 1)
    radial = (1j ** orders) * spherical_jn(orders, k * d)
    vec1 = np.zeros(num_coeffs(coupling_table.n1), dtype=complex)
    for q in range(num_coeffs(n_exp)):
        nn, _ = acn_order_degree(q)
        vec1[q] = radial[nn] * rv[q]
    vec2 = np.zeros(num_coeffs(coupling_table.n2))
    vec2[:pc.size] = pc
    dim = num_coeffs(n_max)
    out = np.zeros((dim, dim), dtype=complex)
    for t in range(min(field_table.n_targets, coupling_table.n_targets)):
        w = vec1 @ coupling_table.matrices[t].data @ vec2
        if w:
            out += w * field_table.matrices[t].data[:dim, :dim]
    return 4.0 * np.pi * out
