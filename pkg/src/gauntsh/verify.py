"""Verification sweeps pitting every closed-form path against brute force.

Each suite returns its worst-case error; the command-line ``verify``
subcommand runs them against a configured tolerance.  The quadrature grid
is the only oracle: it is validated first (unitarity/orthonormality), then
everything else is checked against integrals on it.
"""

from __future__ import annotations

import math
from itertools import permutations

import numpy as np

from .acoustics import (
    binaural_beam_matrices,
    binaural_beamform,
    energy_vector,
    intensity_at,
    pressure_at,
    radial_diag,
    scm_anisotropic_field,
    scm_spaced_anisotropic,
    scm_spaced_isotropic,
    sh_rotation_matrix,
    translate_coeffs,
    velocity_at,
    window_matrix,
)
from .basis import CoeffVector, build_T, build_U
from .gaunt import build_table
from .quadrature import build_grid, forward_sht, inverse_sht
from .sh import acn_order_degree, num_coeffs, sh_matrix, sh_vector


def gaunt_table_oracle(basis: str, n1: int, n2: int, grid=None) -> np.ndarray:
    """Quadrature integrals of all triple products, stacked like a table:
    shape (targets, (n1+1)^2, (n2+1)^2)."""
    n_out = n1 + n2
    if grid is None:
        grid = build_grid(2 * (n1 + n2))
    if grid.degree < 2 * (n1 + n2):
        raise ValueError("grid under-resolves the largest triple product")
    b1 = sh_matrix(basis, n1, grid.theta, grid.phi)
    b2 = sh_matrix(basis, n2, grid.theta, grid.phi)
    bt = sh_matrix(basis, n_out, grid.theta, grid.phi)
    if basis == "complex":
        bt = np.conj(bt)
    return np.einsum("q,qa,qb,qc->cab", grid.weights, b1, b2, bt, optimize=True)


def suite_unitarity(n1: int, n2: int = 0, **_) -> float:
    """Basis maps: unitarity, conjugation involution, and agreement of the
    mapped harmonics with the directly evaluated real ones."""
    n = max(n1, n2)
    U = build_U(n).matrix
    T = build_T(n).matrix
    dim = num_coeffs(n)
    err = np.linalg.norm(U @ np.conj(U).T - np.eye(dim), np.inf)
    err = max(err, float(np.max(np.abs(T @ T - np.eye(dim)))))
    rng = np.random.default_rng(0)
    theta = rng.uniform(0, np.pi, 200)
    phi = rng.uniform(0, 2 * np.pi, 200)
    y = sh_matrix("complex", n, theta, phi)
    r = sh_matrix("real", n, theta, phi)
    err = max(err, float(np.max(np.abs(y @ U.T - r))))
    err = max(err, float(np.max(np.abs(y @ T.T - np.conj(y)))))
    return err


def suite_selection_rules(n1: int, n2: int, fast: bool = False, **_) -> float:
    """Structural zeros of the complex matrices must be exact; real-basis
    entries outside the degree support must be negligible."""
    ctab = build_table("complex", n1, n2, fast=fast)
    rtab = build_table("real", n1, n2, fast=fast)
    worst = 0.0
    d1, d2 = num_coeffs(n1), num_coeffs(n2)
    pairs = [(acn_order_degree(q), acn_order_degree(l))
             for q in range(d1) for l in range(d2)]
    for mat in ctab.matrices:
        for idx, ((np1, mp1), (np2, mp2)) in enumerate(pairs):
            q, l = divmod(idx, d2)
            structural = (mat.m != mp1 + mp2
                          or mat.n < abs(np1 - np2) or mat.n > np1 + np2
                          or (mat.n + np1 + np2) & 1)
            if structural:
                worst = max(worst, abs(mat.data[q, l]))
    for mat in rtab.matrices:
        for idx, ((np1, mp1), (np2, mp2)) in enumerate(pairs):
            q, l = divmod(idx, d2)
            if abs(mat.m) not in (abs(mp1 + mp2), abs(mp1 - mp2)):
                worst = max(worst, abs(mat.data[q, l]))
    return worst


def suite_symmetry(n1: int, n2: int, **_) -> float:
    """Transpose symmetry of the complex matrices and full permutation
    symmetry of the real coefficients over the three index pairs."""
    n = min(n1, n2)
    ctab = build_table("complex", n, n)
    worst = max(float(np.max(np.abs(m.data - m.data.T))) for m in ctab.matrices)
    rtab = build_table("real", n, n)
    dim = num_coeffs(n)
    tensor = np.stack([rtab.matrices[t].data for t in range(dim)])
    for perm in permutations(range(3)):
        worst = max(worst, float(np.max(np.abs(tensor - tensor.transpose(perm)))))
    return worst


def suite_gaunt_oracle(n1: int, n2: int, grid_band: int | None = None,
                       fast: bool = False, **_) -> float:
    """Closed-form coupling matrices against quadrature, both bases."""
    grid = build_grid(grid_band if grid_band is not None else 3 * (n1 + n2))
    worst = 0.0
    for basis in ("complex", "real"):
        table = build_table(basis, n1, n2, fast=fast)
        oracle = gaunt_table_oracle(basis, n1, n2, grid)
        worst = max(worst, float(np.max(np.abs(table.stack() - oracle))))
    return worst


def suite_apps(n1: int = 2, n2: int = 2, seed: int = 0, **_) -> float:
    """Every application formula against quadrature of the same
    band-limited objects (phase terms enter through their truncated
    expansions, so agreement is at rounding level)."""
    rng = np.random.default_rng(seed)
    n = min(max(n1, 1), 3)
    n_exp = n + 2
    k = 1.0
    a = rng.standard_normal(num_coeffs(n))
    x = rng.standard_normal(3)
    x *= 1.0 / (k * np.linalg.norm(x))  # kd = 1
    # band covering the largest oracle integrand below (the spaced
    # anisotropic covariance with its two density factors)
    band = max(2 * (n + n_exp), 4 * n + 2 * n2, 2 * (n + n2)) + 2
    grid = build_grid(band)

    def vals(coeffs):
        return inverse_sht(CoeffVector("real", np.asarray(coeffs)),
                           grid.theta, grid.phi)

    d = float(np.linalg.norm(x))
    from .sh import Direction
    xdir = Direction.from_vector(x)
    jr = radial_diag(n_exp, k, d).entries * sh_vector(
        "real", n_exp, xdir.theta, xdir.phi)
    pw = vals(jr)  # truncated plane-wave phase term on the grid
    av = vals(a)
    uvec = np.stack([np.sin(grid.theta) * np.cos(grid.phi),
                     np.sin(grid.theta) * np.sin(grid.phi),
                     np.cos(grid.theta)], axis=1)
    worst = 0.0

    # translation
    closed = translate_coeffs(a, k, x, n_exp)
    oracle = forward_sht(grid, av * pw, "real", n + n_exp).data
    worst = max(worst, float(np.max(np.abs(closed - oracle))))

    # pressure, velocity, intensity
    p_ref = complex(np.sum(grid.weights * av * pw))
    worst = max(worst, abs(pressure_at(a, k, x) - p_ref))
    c_snd, rho = 343.0, 1.2
    v_ref = -(1.0 / (c_snd * rho)) * (grid.weights * av * pw) @ uvec
    worst = max(worst, float(np.max(np.abs(
        velocity_at(a, k, x, n_exp=n_exp, c=c_snd, rho0=rho) - v_ref))))
    worst = max(worst, float(np.max(np.abs(
        intensity_at(a, k, x, n_exp=n_exp, c=c_snd, rho0=rho)
        - 0.5 * np.conj(p_ref) * v_ref))))

    # energy vector
    e_ref = ((grid.weights * av ** 2) @ uvec) / np.sum(grid.weights * av ** 2)
    worst = max(worst, float(np.max(np.abs(energy_vector(a) - e_ref))))

    # windowing
    w = rng.standard_normal(num_coeffs(n2))
    out = window_matrix(w, n).T @ a
    oracle = forward_sht(grid, av * vals(w), "real", n + n2).data
    worst = max(worst, float(np.max(np.abs(out - oracle))))

    # binaural beamforming
    H = rng.standard_normal((2, num_coeffs(n2)))
    bm = binaural_beam_matrices(H, n)
    wb = rng.standard_normal(num_coeffs(n))
    b = binaural_beamform(bm, a, wb)
    hv = sh_matrix("real", n2, grid.theta, grid.phi) @ H.T
    b_ref = (grid.weights[:, None] * (av * vals(wb))[:, None] * hv).sum(axis=0)
    worst = max(worst, float(np.max(np.abs(b - b_ref))))

    # rotation
    axis = rng.standard_normal(3)
    axis /= np.linalg.norm(axis)
    ang = rng.uniform(0, np.pi)
    K = np.array([[0, -axis[2], axis[1]],
                  [axis[2], 0, -axis[0]],
                  [-axis[1], axis[0], 0]])
    R = np.eye(3) + math.sin(ang) * K + (1 - math.cos(ang)) * (K @ K)
    M = sh_rotation_matrix(R, n)
    worst = max(worst, float(np.max(np.abs(
        M @ M.T - np.eye(num_coeffs(n))))))

    # covariance models
    rmat = sh_matrix("real", n, grid.theta, grid.phi)
    p_coeffs = np.zeros(num_coeffs(n2))
    p_coeffs[0] = math.sqrt(4 * math.pi)
    p_coeffs[1:] = 0.2 * rng.standard_normal(p_coeffs.size - 1)
    pv = vals(p_coeffs)
    scm = scm_anisotropic_field(p_coeffs, n)
    ref = np.einsum("q,qa,qb->ab", grid.weights * pv, rmat, rmat)
    worst = max(worst, float(np.max(np.abs(scm - ref))))
    n_terms = 2 * n + n2
    jr2 = radial_diag(n_terms, k, d).entries * sh_vector(
        "real", n_terms, Direction.from_vector(-x).theta,
        Direction.from_vector(-x).phi)
    pw_neg = inverse_sht(CoeffVector("real", jr2), grid.theta, grid.phi)
    scm_sp = scm_spaced_isotropic(1.0, k, x, n, n_terms)
    ref = np.einsum("q,qa,qb->ab", grid.weights * pw_neg, rmat, rmat)
    worst = max(worst, float(np.max(np.abs(scm_sp - ref))))
    scm_sa = scm_spaced_anisotropic(p_coeffs, k, x, n, n_exp=n_terms)
    ref = np.einsum("q,qa,qb->ab", grid.weights * pw_neg * pv, rmat, rmat)
    worst = max(worst, float(np.max(np.abs(scm_sa - ref))))
    return worst


SUITES = {
    "unitarity": suite_unitarity,
    "selection-rules": suite_selection_rules,
    "symmetry": suite_symmetry,
    "gaunt-oracle": suite_gaunt_oracle,
    "apps": suite_apps,
}


def run_suites(names, n1: int, n2: int, grid_band: int | None = None,
               fast: bool = False):
    """Run named suites, yielding (name, max_error) pairs."""
    for name in names:
        fn = SUITES[name]
        yield name, fn(n1=n1, n2=n2, grid_band=grid_band, fast=fast)
