import math

import numpy as np
import pytest

from gauntsh.basis import (
    CoeffVector,
    build_T,
    build_U,
    conjugate_coeffs,
    convert_coeffs,
)
from gauntsh.sh import acn_index, num_coeffs, sh_matrix, sh_vector

SQ4PI = math.sqrt(4 * math.pi)


def test_coeff_vector_validation():
    v = CoeffVector("real", np.arange(9.0))
    assert v.n_max == 2
    assert len(v) == 9
    with pytest.raises(ValueError):
        CoeffVector("real", np.arange(8.0))
    with pytest.raises(ValueError):
        CoeffVector("other", np.arange(4.0))


def test_coeff_vector_immutable():
    v = CoeffVector("real", np.zeros(4))
    with pytest.raises(ValueError):
        v.data[0] = 1.0


def test_u_block_order_zero_and_one():
    u0 = build_U(0).blocks[0]
    np.testing.assert_allclose(u0, [[1.0]])
    u1 = build_U(1).blocks[1]
    np.testing.assert_allclose(u1[1], [0.0, 1.0, 0.0], atol=0)
    # row for degree +1 mixes the -1 and +1 complex harmonics
    isq = 1 / math.sqrt(2)
    np.testing.assert_allclose(u1[2], [isq, 0.0, -isq], atol=0)
    np.testing.assert_allclose(u1[0], [1j * isq, 0.0, 1j * isq], atol=0)


def test_u_reproduces_real_harmonics():
    rng = np.random.default_rng(0)
    theta = rng.uniform(0, np.pi, 100)
    phi = rng.uniform(0, 2 * np.pi, 100)
    for n_max in (1, 4, 10):
        U = build_U(n_max).matrix
        y = sh_matrix("complex", n_max, theta, phi)
        r = sh_matrix("real", n_max, theta, phi)
        assert np.max(np.abs(y @ U.T - r)) <= 1e-13


def test_u_unitary_and_block_diagonal():
    for n_max in (0, 3, 20):
        bm = build_U(n_max)
        U = bm.matrix
        dim = num_coeffs(n_max)
        assert np.linalg.norm(U @ np.conj(U).T - np.eye(dim), np.inf) <= 1e-13
        # cross-order entries are exactly zero
        mask = np.ones((dim, dim), dtype=bool)
        at = 0
        for blk in bm.blocks:
            d = blk.shape[0]
            mask[at:at + d, at:at + d] = False
            at += d
        assert np.all(U[mask] == 0.0)


def test_t_map_values():
    t0 = build_T(0).matrix
    np.testing.assert_allclose(t0, [[1.0]])
    t1 = np.asarray(build_T(1).matrix)[1:, 1:]
    # anti-diagonal carries [-1, 1, -1] for order one
    np.testing.assert_allclose(np.diag(np.fliplr(t1)), [-1.0, 1.0, -1.0])
    t2 = build_T(2).matrix
    np.testing.assert_allclose(t2 @ t2, np.eye(9), atol=0)


def test_t_conjugates_harmonic_vectors():
    rng = np.random.default_rng(1)
    T = build_T(6).matrix
    for _ in range(50):
        y = sh_vector("complex", 6, rng.uniform(0, np.pi),
                      rng.uniform(0, 2 * np.pi))
        assert np.max(np.abs(T @ y - np.conj(y))) <= 1e-13


def test_convert_constant():
    v = CoeffVector("real", np.array([SQ4PI, 0, 0, 0]))
    c = convert_coeffs(v, "complex")
    np.testing.assert_allclose(c.data, [SQ4PI, 0, 0, 0], atol=1e-15)
    back = convert_coeffs(c, "real")
    np.testing.assert_allclose(back.data, v.data, atol=1e-14)


def test_convert_single_complex_harmonic():
    # a pure complex harmonic of degree one splits into the +-1 real pair
    # with weights of magnitude 1/sqrt(2)
    c = np.zeros(4, dtype=complex)
    c[acn_index(1, 1)] = 1.0
    U = build_U(1).matrix
    r = np.conj(U) @ c
    mags = np.abs(r)
    assert mags[acn_index(1, 1)] == pytest.approx(1 / math.sqrt(2))
    assert mags[acn_index(1, -1)] == pytest.approx(1 / math.sqrt(2))
    # not a real-valued function: conversion must refuse
    with pytest.raises(ValueError):
        convert_coeffs(CoeffVector("complex", c), "real")


def test_convert_round_trip_random_real_function():
    rng = np.random.default_rng(2)
    for n_max in (0, 2, 5):
        v = CoeffVector("real", rng.standard_normal(num_coeffs(n_max)))
        there = convert_coeffs(v, "complex")
        back = convert_coeffs(there, "real")
        assert back.data.dtype.kind == "f"
        np.testing.assert_allclose(back.data, v.data, atol=1e-13)


def test_conversion_preserves_function_values():
    rng = np.random.default_rng(3)
    v = CoeffVector("real", rng.standard_normal(16))
    c = convert_coeffs(v, "complex")
    theta = rng.uniform(0, np.pi, 30)
    phi = rng.uniform(0, 2 * np.pi, 30)
    vals_r = sh_matrix("real", 3, theta, phi) @ v.data
    vals_c = sh_matrix("complex", 3, theta, phi) @ c.data
    np.testing.assert_allclose(vals_c.imag, 0.0, atol=1e-13)
    np.testing.assert_allclose(vals_c.real, vals_r, atol=1e-13)


def test_parseval_between_bases():
    rng = np.random.default_rng(4)
    v = CoeffVector("real", rng.standard_normal(36))
    c = convert_coeffs(v, "complex")
    assert np.linalg.norm(v.data) == pytest.approx(np.linalg.norm(c.data),
                                                   abs=1e-12)


def test_conjugate_coeffs():
    const = CoeffVector("complex", np.array([2.0, 0, 0, 0], dtype=complex))
    np.testing.assert_allclose(conjugate_coeffs(const).data, const.data)
    # coefficients of a single degree-one harmonic conjugate into the
    # opposite degree slot with a sign
    c = np.zeros(4, dtype=complex)
    c[acn_index(1, 1)] = 1.0
    conj = conjugate_coeffs(CoeffVector("complex", c)).data
    expected = np.zeros(4, dtype=complex)
    expected[acn_index(1, -1)] = -1.0
    np.testing.assert_allclose(conj, expected, atol=0)


def test_real_valued_characterization():
    rng = np.random.default_rng(5)
    v = CoeffVector("real", rng.standard_normal(25))
    c = convert_coeffs(v, "complex")
    np.testing.assert_allclose(conjugate_coeffs(c).data, c.data, atol=1e-13)


def test_conjugate_matches_quadrature():
    from gauntsh.quadrature import build_grid, forward_sht, inverse_sht

    rng = np.random.default_rng(6)
    c = CoeffVector("complex",
                    rng.standard_normal(16) + 1j * rng.standard_normal(16))
    grid = build_grid(8)
    vals = inverse_sht(c, grid.theta, grid.phi)
    ref = forward_sht(grid, np.conj(vals), "complex", 3)
    np.testing.assert_allclose(conjugate_coeffs(c).data, ref.data, atol=1e-13)
