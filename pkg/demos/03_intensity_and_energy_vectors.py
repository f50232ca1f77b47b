"""Acoustic intensity and the Ambisonic energy vector from coefficients.

The sound intensity is the product of pressure and particle velocity;
both are linear in the plane-wave density, so the intensity is a
quadratic form of the density coefficients through the order-one coupling
matrices.  The energy vector is its incoherent cousin: the power-weighted
mean direction of the density.
"""

import numpy as np

import gauntsh as g

k = 1.0

# a single plane wave arriving from u0: intensity must point along -u0,
# i.e. in the direction of propagation
u0 = g.Direction(1.2, 0.6)
a_pw = g.sh_vector("real", 4, u0.theta, u0.phi)
i_vec = g.intensity_at(a_pw, k, np.zeros(3)).real
i_dir = i_vec / np.linalg.norm(i_vec)
print("plane wave from   ", np.round(u0.unit_vector, 6))
print("active intensity  ", np.round(i_dir, 6), "(unit)")
print("dot with -u0:", float(np.dot(i_dir, -u0.unit_vector)))

# energy vector of the same truncated plane-wave density: points AT the
# source, with magnitude below one that grows with order
print("\nenergy vector magnitude by density order:")
for n in (1, 2, 3, 5, 8):
    a_n = g.sh_vector("real", n, u0.theta, u0.phi)
    e = g.energy_vector(a_n)
    print(f"  order {n}: |e| = {np.linalg.norm(e):.4f}")

# a two-wave mixture: intensity away from the origin varies with position
rng = np.random.default_rng(3)
u1 = g.Direction(2.0, 3.5)
a_mix = a_pw + 0.6 * g.sh_vector("real", 4, u1.theta, u1.phi)
x = np.array([0.1, -0.2, 0.15])
i_mix = g.intensity_at(a_mix, k, x)
print("\ntwo-wave field at x =", x)
print("complex intensity:", np.round(i_mix, 6))
print("active part:      ", np.round(i_mix.real, 6))
print("reactive part:    ", np.round(i_mix.imag, 6))

# cross-check against direct quadrature of pressure and velocity
grid = g.build_grid(40)
u = np.stack([np.sin(grid.theta) * np.cos(grid.phi),
              np.sin(grid.theta) * np.sin(grid.phi),
              np.cos(grid.theta)], axis=1)
av = g.inverse_sht(g.CoeffVector("real", a_mix), grid.theta, grid.phi)
pw = np.exp(1j * k * (u @ x))
p_ref = np.sum(grid.weights * av * pw)
v_ref = -(grid.weights * av * pw) @ u / (g.DEFAULT_SOUND_SPEED
                                         * g.DEFAULT_AIR_DENSITY)
print("oracle difference:",
      np.max(np.abs(i_mix - 0.5 * np.conj(p_ref) * v_ref)))

# the energy vector rotates with the field
R = np.array([[0.0, -1.0, 0.0],
              [1.0, 0.0, 0.0],
              [0.0, 0.0, 1.0]])   # quarter turn about z
M = g.sh_rotation_matrix(R, 4)
print("\nenergy-vector rotation equivariance:",
      np.max(np.abs(g.energy_vector(M @ a_mix) - R @ g.energy_vector(a_mix))))
