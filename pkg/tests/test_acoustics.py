import math

import numpy as np
import pytest

from gauntsh.acoustics import (
    ArrayModel,
    DirectionalPSD,
    Sensor,
    array_atf_matrix,
    array_sensor_coeffs,
    binaural_beam_matrices,
    binaural_beam_weights,
    binaural_beamform,
    encoding_filters_ls,
    energy_vector,
    intensity_at,
    plane_wave_coeffs,
    pressure_at,
    radial_diag,
    recommended_expansion_order,
    scm_anisotropic_field,
    scm_array_anisotropic,
    scm_array_isotropic,
    scm_isotropic_field,
    scm_spaced_anisotropic,
    scm_spaced_isotropic,
    sh_rotation_matrix,
    steer_axisymmetric,
    translate_coeffs,
    velocity_at,
    window_matrix,
)
from gauntsh.basis import CoeffVector
from gauntsh.quadrature import build_grid, forward_sht, inverse_sht
from gauntsh.sh import Direction, acn_index, num_coeffs, sh_matrix, sh_vector

SQ4PI = math.sqrt(4 * math.pi)
RNG = np.random.default_rng(1234)


def rotation_about(axis, angle):
    axis = np.asarray(axis, dtype=float)
    axis /= np.linalg.norm(axis)
    K = np.array([[0, -axis[2], axis[1]],
                  [axis[2], 0, -axis[0]],
                  [-axis[1], axis[0], 0]])
    return np.eye(3) + math.sin(angle) * K + (1 - math.cos(angle)) * (K @ K)


def unit_vectors(grid):
    return np.stack([np.sin(grid.theta) * np.cos(grid.phi),
                     np.sin(grid.theta) * np.sin(grid.phi),
                     np.cos(grid.theta)], axis=1)


def real_values(coeffs, grid):
    return inverse_sht(CoeffVector("real", np.asarray(coeffs)),
                       grid.theta, grid.phi)


# ---------------------------------------------------------------- radial

def test_radial_diag_at_origin():
    rd = radial_diag(3, 2.0, 0.0)
    expected = np.zeros(16, dtype=complex)
    expected[0] = 4 * np.pi
    np.testing.assert_allclose(rd.entries, expected, atol=1e-15)


def test_radial_diag_zero_of_sinc():
    rd = radial_diag(0, 1.0, np.pi)
    assert abs(rd.entries[0]) <= 1e-15


def test_radial_diag_closed_forms():
    kd = 1.0
    rd = radial_diag(2, 1.0, kd)
    j0 = math.sin(kd) / kd
    j1 = math.sin(kd) / kd ** 2 - math.cos(kd) / kd
    j2 = (3 / kd ** 3 - 1 / kd) * math.sin(kd) - 3 * math.cos(kd) / kd ** 2
    expected = 4 * np.pi * np.array(
        [j0, 1j * j1, 1j * j1, 1j * j1, -j2, -j2, -j2, -j2, -j2])
    np.testing.assert_allclose(rd.entries, expected, atol=1e-14)
    assert np.all(np.abs(rd.entries) <= 4 * np.pi + 1e-12)


def test_radial_diag_rejects_negative():
    with pytest.raises(ValueError):
        radial_diag(2, -1.0, 0.5)


# ---------------------------------------------------------- plane waves

def test_plane_wave_factorization_at_origin():
    r_u, jr = plane_wave_coeffs(Direction(0.7, 0.3), 2.0, np.zeros(3), 3)
    assert r_u @ jr == pytest.approx(1.0, abs=1e-14)


def test_plane_wave_expansion_accuracy():
    # worst-case truncation error at kd=1, measured over all alignment
    # angles: 1.1e-3 at four terms, 7.2e-6 at six
    k = 1.0
    x = np.array([0.0, 0.0, 1.0])
    for n_exp, bound in ((4, 1.1e-3), (6, 7.3e-6)):
        worst = 0.0
        for gamma in np.linspace(0, np.pi, 181):
            u = Direction(gamma, 0.0)
            r_u, jr = plane_wave_coeffs(u, k, x, n_exp)
            exact = np.exp(1j * k * (u.unit_vector @ x))
            worst = max(worst, abs(r_u @ jr - exact))
        assert worst <= bound


def test_truncation_rule():
    # the bare rule gives ceil(e*kd/2); the default adds a safety margin
    assert math.ceil(math.e * 2.0 / 2.0) == 3
    assert recommended_expansion_order(2.0) == 5


# ------------------------------------------------------------- pressure

def test_pressure_at_origin():
    a = RNG.standard_normal(16)
    assert pressure_at(a, 3.0, np.zeros(3)) == pytest.approx(SQ4PI * a[0])


def test_pressure_single_plane_wave_converges():
    k = 1.0
    u0 = Direction(1.0, 2.0)
    x = np.array([0.3, -0.2, 0.4])
    exact = np.exp(1j * k * (u0.unit_vector @ x))
    errs = []
    for n in (4, 8, 12):
        a = sh_vector("real", n, u0.theta, u0.phi)
        errs.append(abs(pressure_at(a, k, x) - exact))
    assert errs[-1] <= 1e-10 and errs[0] > errs[-1]


def test_pressure_matches_quadrature():
    k, n = 1.0, 3
    a = RNG.standard_normal(num_coeffs(n))
    x = np.array([0.5, 0.1, -0.3])
    grid = build_grid(3 * n + 24)
    av = real_values(a, grid)
    pw = np.exp(1j * k * (unit_vectors(grid) @ x))
    ref = np.sum(grid.weights * av * pw)
    assert abs(pressure_at(a, k, x) - ref) <= 1e-8


# ----------------------------------------------------------- translation

def test_translate_zero_offset_pads():
    a = RNG.standard_normal(9)
    out = translate_coeffs(a, 2.0, np.zeros(3), 4)
    np.testing.assert_allclose(out[:9], a, atol=1e-14)
    np.testing.assert_allclose(out[9:], 0.0, atol=1e-14)


def test_translate_matches_quadrature():
    k, n, n_exp = 1.0, 3, 8
    a = RNG.standard_normal(num_coeffs(n))
    x = RNG.standard_normal(3)
    x /= np.linalg.norm(x)  # kd = 1
    out = translate_coeffs(a, k, x, n_exp)
    grid = build_grid(3 * (n + n_exp))
    vals = real_values(a, grid) * np.exp(1j * k * (unit_vectors(grid) @ x))
    ref = forward_sht(grid, vals, "real", n + n_exp).data
    assert np.max(np.abs(out - ref)) / np.max(np.abs(ref)) <= 1e-6


def test_translate_round_trip():
    k, n = 1.0, 2
    n_exp = n + 6
    a = RNG.standard_normal(num_coeffs(n))
    x = np.array([0.1, -0.3, 0.2])
    x *= 0.5 / np.linalg.norm(x)  # kd = 0.5
    there = translate_coeffs(a, k, x, n_exp)
    back = translate_coeffs(there, k, -x, n_exp)
    rel = np.max(np.abs(back[:a.size] - a)) / np.max(np.abs(a))
    assert rel <= 1e-4


def test_translate_linear_in_density():
    k, n_exp = 1.5, 4
    x = np.array([0.2, 0.1, 0.3])
    a = RNG.standard_normal(9)
    b = RNG.standard_normal(9)
    lhs = translate_coeffs(2.0 * a + b, k, x, n_exp)
    rhs = 2.0 * translate_coeffs(a, k, x, n_exp) + translate_coeffs(b, k, x, n_exp)
    np.testing.assert_allclose(lhs, rhs, atol=1e-13)


def test_translate_table_too_small():
    from gauntsh.gaunt import build_table

    a = RNG.standard_normal(16)
    with pytest.raises(ValueError):
        translate_coeffs(a, 1.0, np.zeros(3), 6, table=build_table("real", 3, 2))


# ----------------------------------------------- velocity and intensity

def test_intensity_of_silence_is_zero():
    out = intensity_at(np.zeros(9), 1.0, np.array([0.1, 0.2, 0.3]))
    np.testing.assert_allclose(out, 0.0)


def test_plane_wave_intensity_direction():
    u0 = Direction(2.2, 0.8)
    a = sh_vector("real", 5, u0.theta, u0.phi)
    iv = intensity_at(a, 1.0, np.zeros(3)).real
    cos = np.dot(-u0.unit_vector, iv / np.linalg.norm(iv))
    assert math.acos(min(1.0, max(-1.0, cos))) <= 1e-6


def test_intensity_matches_pressure_velocity_quadrature():
    k, n, n_exp = 1.0, 2, 4
    a = RNG.standard_normal(num_coeffs(n))
    x = np.array([0.4, -0.2, 0.5])
    grid = build_grid(3 * (n + n_exp) + 16)
    u = unit_vectors(grid)
    av = real_values(a, grid)
    pw = np.exp(1j * k * (u @ x))
    p_ref = np.sum(grid.weights * av * pw)
    v_ref = -(1.0 / (343.0 * 1.2)) * (grid.weights * av * pw) @ u
    ref = 0.5 * np.conj(p_ref) * v_ref
    out = intensity_at(a, k, x, n_exp=n_exp)
    assert np.max(np.abs(out - ref)) <= 1e-8
    vel = velocity_at(a, k, x, n_exp=n_exp)
    assert np.max(np.abs(vel - v_ref)) <= 1e-8


# ---------------------------------------------------------- energy vector

def test_energy_vector_isotropic_is_zero():
    a = np.zeros(16)
    a[0] = 1.0
    np.testing.assert_allclose(energy_vector(a), 0.0, atol=1e-15)


def test_energy_vector_alignment():
    u0 = Direction(0.5, 1.2)
    a = sh_vector("real", 3, u0.theta, u0.phi)
    e = energy_vector(a)
    mag = np.linalg.norm(e)
    assert mag < 1.0
    cos = np.dot(u0.unit_vector, e / mag)
    assert math.acos(min(1.0, max(-1.0, cos))) <= 1e-9


def test_energy_vector_matches_quadrature():
    n = 3
    a = RNG.standard_normal(num_coeffs(n))
    grid = build_grid(3 * n + 2)
    av = real_values(a, grid)
    ref = ((grid.weights * av ** 2) @ unit_vectors(grid)) / np.sum(
        grid.weights * av ** 2)
    assert np.max(np.abs(energy_vector(a) - ref)) <= 1e-10


def test_energy_vector_rotation_equivariance():
    n = 3
    a = RNG.standard_normal(num_coeffs(n))
    R = rotation_about([0.3, -0.5, 0.8], 1.1)
    M = sh_rotation_matrix(R, n)
    assert np.max(np.abs(energy_vector(M @ a) - R @ energy_vector(a))) <= 1e-10


def test_energy_vector_rejects_silence():
    with pytest.raises(ValueError):
        energy_vector(np.zeros(9))


# -------------------------------------------------------------- windows

def test_unit_window_is_padded_identity():
    w = np.zeros(4)
    w[0] = SQ4PI
    W = window_matrix(w, 2)
    np.testing.assert_allclose(W, np.eye(9, 16), atol=1e-14)


def test_window_matches_quadrature():
    n, n_w = 1, 1
    a = RNG.standard_normal(num_coeffs(n))
    w = RNG.standard_normal(num_coeffs(n_w))
    out = window_matrix(w, n).T @ a
    grid = build_grid(3 * (n + n_w))
    ref = forward_sht(grid, real_values(a, grid) * real_values(w, grid),
                      "real", n + n_w).data
    np.testing.assert_allclose(out, ref, atol=1e-13)


def test_window_truncation_flag():
    w = RNG.standard_normal(9)
    full = window_matrix(w, 2)
    trunc = window_matrix(w, 2, truncate=True)
    assert full.shape == (9, 25)
    assert trunc.shape == (9, 9)
    np.testing.assert_allclose(trunc, full[:, :9], atol=0)


def test_axisymmetric_window_steers_energy():
    u0 = Direction(1.9, 4.0)
    zonal = np.array([0.5 * SQ4PI, 0.5 * math.sqrt(4 * math.pi / 3)])
    w = steer_axisymmetric(zonal, u0)
    iso = np.zeros(1)
    iso[0] = 1.0
    out = window_matrix(w, 0).T @ iso
    e = energy_vector(out)
    cos = np.dot(u0.unit_vector, e / np.linalg.norm(e))
    assert math.acos(min(1.0, max(-1.0, cos))) <= 1e-12


def test_steered_window_matches_rotation():
    u0 = Direction(0.9, 2.5)
    zonal = RNG.standard_normal(4)
    w = steer_axisymmetric(zonal, u0)
    # evaluating at u0 gives the pattern's on-axis value
    on_axis = sum(zonal[nn] * math.sqrt((2 * nn + 1) / (4 * math.pi))
                  for nn in range(4))
    got = inverse_sht(CoeffVector("real", w), [u0.theta], [u0.phi])[0]
    assert got == pytest.approx(on_axis, abs=1e-12)


# ------------------------------------------------------------- binaural

def test_binaural_matches_triple_quadrature():
    n, n_h = 2, 2
    a = RNG.standard_normal(num_coeffs(n))
    w = RNG.standard_normal(num_coeffs(n))
    H = RNG.standard_normal((2, num_coeffs(n_h)))
    beams = binaural_beam_matrices(H, n)
    b = binaural_beamform(beams, a, w)
    grid = build_grid(3 * (2 * n + n_h))
    hv = sh_matrix("real", n_h, grid.theta, grid.phi) @ H.T
    prod = real_values(a, grid) * real_values(w, grid)
    ref = (grid.weights[:, None] * prod[:, None] * hv).sum(axis=0)
    assert np.max(np.abs(b - ref)) <= 1e-10
    # the fixed-pattern weight matrix gives the same output
    W = binaural_beam_weights(beams, w)
    np.testing.assert_allclose(W @ a, b, atol=1e-13)


def test_binaural_unit_window_is_plain_decode():
    n = 2
    a = RNG.standard_normal(num_coeffs(n))
    H = RNG.standard_normal((2, num_coeffs(n)))
    w = np.zeros(num_coeffs(n))
    w[0] = SQ4PI
    b = binaural_beamform(binaural_beam_matrices(H, n), a, w)
    np.testing.assert_allclose(b, H @ a, atol=1e-12)


def test_binaural_omni_hrtf_structure():
    n = 2
    a = RNG.standard_normal(num_coeffs(n))
    w = RNG.standard_normal(num_coeffs(n))
    H = np.zeros((2, 9))
    H[:, 0] = [1.0, 2.0]
    b = binaural_beamform(binaural_beam_matrices(H, n), a, w)
    # omnidirectional ears hear the windowed field's omni component
    omni = a @ window_matrix(w, n)[:, 0]
    np.testing.assert_allclose(b, [omni, 2 * omni], atol=1e-12)


def test_binaural_shape_errors():
    with pytest.raises(ValueError):
        binaural_beam_matrices(np.zeros((3, 9)), 2)
    beams = binaural_beam_matrices(np.zeros((2, 9)), 2)
    with pytest.raises(ValueError):
        binaural_beamform(beams, np.zeros(4), np.zeros(9))


# -------------------------------------------------------------- rotation

def test_rotation_identity():
    np.testing.assert_allclose(sh_rotation_matrix(np.eye(3), 3),
                               np.eye(16), atol=1e-13)


def test_rotation_pi_about_z():
    M = sh_rotation_matrix(rotation_about([0, 0, 1], math.pi), 2)
    # azimuthal terms flip sign with the parity of the degree
    diag = np.diag(M)
    expected = [1, -1, 1, -1, 1, -1, 1, -1, 1]
    np.testing.assert_allclose(diag, expected, atol=1e-13)
    np.testing.assert_allclose(M, np.diag(expected), atol=1e-13)


def test_rotation_action_and_orthogonality():
    R = rotation_about([1.0, 0.4, -0.2], 0.9)
    n = 4
    M = sh_rotation_matrix(R, n)
    assert np.max(np.abs(M @ M.T - np.eye(num_coeffs(n)))) <= 1e-12
    for _ in range(25):
        d = Direction(RNG.uniform(0, np.pi), RNG.uniform(0, 2 * np.pi))
        lhs = M @ sh_vector("real", n, d.theta, d.phi)
        dr = Direction.from_vector(R @ d.unit_vector)
        rhs = sh_vector("real", n, dr.theta, dr.phi)
        assert np.max(np.abs(lhs - rhs)) <= 1e-12


def test_rotation_rejects_non_rotation():
    with pytest.raises(ValueError):
        sh_rotation_matrix(np.diag([1.0, 1.0, -1.0]), 2)
    with pytest.raises(ValueError):
        sh_rotation_matrix(2 * np.eye(3), 2)


# ------------------------------------------------------------ array model

def cardioid_coeffs():
    # 0.5 + 0.5 cos(theta), aimed at +z
    return np.array([0.5 * SQ4PI, 0.0, 0.5 * math.sqrt(4 * math.pi / 3), 0.0])


def test_sensor_validation():
    with pytest.raises(ValueError):
        Sensor(np.zeros(2), np.eye(3), cardioid_coeffs())
    with pytest.raises(ValueError):
        Sensor(np.zeros(3), np.diag([1, 1, -1]), cardioid_coeffs())


def test_sensor_at_origin_identity_rotation():
    s = Sensor(np.zeros(3), np.eye(3), cardioid_coeffs())
    h = array_sensor_coeffs(ArrayModel((s,)), 0, 2.0, 3)
    np.testing.assert_allclose(h[:4], cardioid_coeffs(), atol=1e-13)
    np.testing.assert_allclose(h[4:], 0.0, atol=1e-13)


def test_omni_sensor_reduces_to_plane_wave_factor():
    pos = np.array([0.1, 0.2, -0.05])
    k = 3.0
    s = Sensor(pos, np.eye(3), np.array([0.7 * SQ4PI]))
    h = array_sensor_coeffs(ArrayModel((s,)), 0, k, 4)
    _, jr = plane_wave_coeffs(Direction(0, 0), k, pos, 4)
    np.testing.assert_allclose(h, 0.7 * jr, atol=1e-13)


def test_rotated_offset_sensor_matches_pointwise():
    k = 2.0
    pos = np.array([0.15, -0.1, 0.12])
    R = rotation_about([0.2, 1.0, -0.4], 2.0)
    s = Sensor(pos, R, cardioid_coeffs())
    n_exp = recommended_expansion_order(k * np.linalg.norm(pos)) + 4
    h = array_sensor_coeffs(ArrayModel((s,)), 0, k, n_exp)
    grid = build_grid(30)
    u = unit_vectors(grid)
    urot = u @ R  # rows are R^-1 u
    th = np.arccos(np.clip(urot[:, 2], -1, 1))
    ph = np.arctan2(urot[:, 1], urot[:, 0])
    dvals = sh_matrix("real", 1, th, ph) @ cardioid_coeffs()
    ref = dvals * np.exp(1j * k * (u @ pos))
    rec = sh_matrix("real", 1 + n_exp, grid.theta, grid.phi) @ h
    assert np.max(np.abs(rec - ref)) <= 1e-6


def test_atf_matrix_shape():
    sensors = tuple(
        Sensor(p, np.eye(3), np.array([SQ4PI]))
        for p in (np.zeros(3), np.array([0.0, 0.0, 0.1])))
    H = array_atf_matrix(ArrayModel(sensors), 2.0, 3, 3)
    assert H.shape == (2, 16)


# ------------------------------------------------------------- encoders

def test_encoder_identity_pickup():
    E = encoding_filters_ls(np.eye(16), 1, 0.0)
    np.testing.assert_allclose(E, np.eye(4, 16), atol=1e-12)


def test_encoder_norm_shrinks_with_regularization():
    H = RNG.standard_normal((6, 16))
    norms = [np.linalg.norm(encoding_filters_ls(H, 1, lam))
             for lam in (0.1, 1.0, 10.0, 100.0)]
    assert all(a > b for a, b in zip(norms, norms[1:]))


def test_encoder_minimizes_objective():
    H = RNG.standard_normal((5, 16)) + 1j * RNG.standard_normal((5, 16))
    lam = 0.1
    E = encoding_filters_ls(H, 1, lam)
    target = np.eye(4, 16)

    def objective(mat):
        return (np.linalg.norm(mat @ H - target) ** 2
                + lam ** 2 * np.linalg.norm(mat) ** 2)

    base = objective(E)
    for _ in range(1000):
        pert = 1e-4 * (RNG.standard_normal(E.shape)
                       + 1j * RNG.standard_normal(E.shape))
        assert objective(E + pert) > base


def test_encoder_singular_raises():
    H = np.zeros((4, 9))
    H[0] = H[1] = np.arange(9.0)  # rank deficient
    with pytest.raises(np.linalg.LinAlgError):
        encoding_filters_ls(H, 1, 0.0)
    with pytest.raises(ValueError):
        encoding_filters_ls(np.eye(9), 4, 0.0)


# ------------------------------------------------------------ covariance

def test_isotropic_field_scm():
    np.testing.assert_allclose(scm_isotropic_field(1.0, 2), np.eye(9))
    H = RNG.standard_normal((4, 9))
    np.testing.assert_allclose(scm_array_isotropic(H, 2.0), 2.0 * H @ H.T)
    np.testing.assert_allclose(scm_array_isotropic(np.eye(9), 3.0),
                               3.0 * np.eye(9))


def test_spaced_omni_pair_coherence_is_sinc():
    k, d = 1.0, 2.0
    sensors = (Sensor(np.zeros(3), np.eye(3), np.array([SQ4PI])),
               Sensor(np.array([0.0, 0.0, d]), np.eye(3), np.array([SQ4PI])))
    prev_err = np.inf
    for n_exp in (4, 8, 12):
        H = array_atf_matrix(ArrayModel(sensors), k, n_exp, n_exp)
        scm = scm_array_isotropic(H, 1.0 / (4 * np.pi))
        coh = (scm[0, 1] / np.sqrt(scm[0, 0] * scm[1, 1])).real
        err = abs(coh - math.sin(k * d) / (k * d))
        assert err < prev_err or err <= 1e-12
        prev_err = err
    assert prev_err <= 1e-8


def test_anisotropic_scm_matches_quadrature():
    n, n_p = 2, 2
    p = np.zeros(num_coeffs(n_p))
    p[0] = SQ4PI
    p[1:] = 0.25 * RNG.standard_normal(p.size - 1)
    scm = scm_anisotropic_field(p, n)
    grid = build_grid(3 * (2 * n + n_p))
    r = sh_matrix("real", n, grid.theta, grid.phi)
    ref = np.einsum("q,qa,qb->ab", grid.weights * real_values(p, grid), r, r)
    assert np.max(np.abs(scm - ref)) <= 1e-11
    assert np.max(np.abs(scm - scm.T)) <= 1e-13
    H = RNG.standard_normal((5, num_coeffs(n)))
    np.testing.assert_allclose(scm_array_anisotropic(H, p), H @ scm @ H.T,
                               atol=1e-12)


def test_anisotropic_reduces_to_isotropic():
    p = np.zeros(9)
    p[0] = SQ4PI * 1.3
    np.testing.assert_allclose(scm_anisotropic_field(p, 2),
                               1.3 * np.eye(9), atol=1e-14)


def test_anisotropic_high_density_orders_drop_out():
    # density terms beyond twice the field order cannot couple
    n = 1
    p = np.zeros(num_coeffs(5))
    p[0] = SQ4PI
    p[1:] = 0.3 * RNG.standard_normal(p.size - 1)
    scm = scm_anisotropic_field(p, n)
    grid = build_grid(3 * 7)
    r = sh_matrix("real", n, grid.theta, grid.phi)
    pv = real_values(p, grid)
    ref = np.einsum("q,qa,qb->ab", grid.weights * pv, r, r)
    assert np.max(np.abs(scm - ref)) <= 1e-12


def test_anisotropic_scm_positive_for_nonnegative_density():
    u0 = Direction(1.0, 0.5)
    zonal = np.array([SQ4PI, math.sqrt(4 * math.pi / 3) * 0.9])
    p = steer_axisymmetric(zonal, u0)  # nonnegative by construction
    scm = scm_anisotropic_field(p, 3)
    assert np.min(np.linalg.eigvalsh(scm)) >= -1e-10


def test_directional_psd_warns_on_negative():
    bad = np.zeros(4)
    bad[acn_index(1, 0)] = 1.0  # pure dipole dips negative
    with pytest.warns(UserWarning):
        DirectionalPSD(bad)


def test_spaced_isotropic_against_quadrature():
    k, n = 1.0, 2
    x = RNG.standard_normal(3)
    x /= np.linalg.norm(x)
    scm = scm_spaced_isotropic(1.0, k, x, n, 12)
    grid = build_grid(3 * (2 * n) + 24)
    r = sh_matrix("real", n, grid.theta, grid.phi)
    pw = np.exp(-1j * k * (unit_vectors(grid) @ x))
    ref = np.einsum("q,qa,qb->ab", grid.weights * pw, r, r)
    assert np.max(np.abs(scm - ref)) <= 1e-8


def test_spaced_isotropic_zero_spacing():
    np.testing.assert_allclose(
        scm_spaced_isotropic(2.0, 1.0, np.zeros(3), 2, 8),
        2.0 * np.eye(9), atol=1e-14)


def test_spaced_isotropic_omni_entry_is_sinc():
    for kd in (0.5, 1.0, 3.0):
        scm = scm_spaced_isotropic(1.0, 1.0, np.array([0, 0, kd]), 2, 12)
        assert scm[0, 0].real == pytest.approx(math.sin(kd) / kd, abs=1e-6)
        assert abs(scm[0, 0].imag) <= 1e-14


def test_spaced_anisotropic_against_quadrature():
    k, n, n_p = 1.0, 2, 2
    x = RNG.standard_normal(3)
    x /= np.linalg.norm(x)
    p = np.zeros(num_coeffs(n_p))
    p[0] = SQ4PI
    p[1:] = 0.2 * RNG.standard_normal(p.size - 1)
    scm = scm_spaced_anisotropic(p, k, x, n)
    grid = build_grid(4 * (2 * n + n_p) + 12)
    r = sh_matrix("real", n, grid.theta, grid.phi)
    pw = np.exp(-1j * k * (unit_vectors(grid) @ x))
    ref = np.einsum("q,qa,qb->ab", grid.weights * pw * real_values(p, grid),
                    r, r)
    assert np.max(np.abs(scm - ref)) <= 1e-7


def test_spaced_anisotropic_reductions():
    k, n = 1.2, 2
    x = np.array([0.3, -0.4, 0.2])
    p_iso = np.zeros(9)
    p_iso[0] = SQ4PI * 0.8
    lhs = scm_spaced_anisotropic(p_iso, k, x, n)
    rhs = scm_spaced_isotropic(0.8, k, x, n, 2 * n + 2)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)
    p = np.zeros(9)
    p[0] = SQ4PI
    p[1:] = 0.2 * RNG.standard_normal(8)
    at_origin = scm_spaced_anisotropic(p, k, np.zeros(3), n)
    np.testing.assert_allclose(at_origin, scm_anisotropic_field(p, n),
                               atol=1e-12)


def test_scm_hermitian():
    k, n = 1.0, 2
    x = np.array([0.2, 0.5, -0.1])
    scm = scm_spaced_isotropic(1.0, k, x, n, 10)
    # covariance between two points: entry (a,b) pairs with (b,a) at -x
    other = scm_spaced_isotropic(1.0, k, -x, n, 10)
    assert np.max(np.abs(scm - np.conj(other).T)) <= 1e-13
