"""Directional loudness shaping and beamformed binaural decoding.

Applying a directional gain to an Ambisonic scene is a multiplication of
spherical functions, so it becomes one fixed matrix in the coefficient
domain.  Combining a steerable beam pattern with a binaural decode uses
the same coupling matrices, precomputed once, with the steering vector
swapped at will.
"""

import math

import numpy as np

import gauntsh as g

rng = np.random.default_rng(99)
n = 3                                     # scene order
a = rng.standard_normal((n + 1) ** 2)     # an Ambisonic scene

# a first-order cardioid gain aimed at the front (+x): keeps the front,
# attenuates the rear
front = g.Direction(math.pi / 2, 0.0)
zonal = np.array([0.5 * math.sqrt(4 * math.pi),
                  0.5 * math.sqrt(4 * math.pi / 3)])
w = g.steer_axisymmetric(zonal, front)

W = g.window_matrix(w, n)
a_shaped = W.T @ a
print(f"scene order {n}, gain order 1 -> shaped scene order "
      f"{g.max_order(a_shaped.size)}")
print(f"window matrix shape: {W.shape}")

# common practice keeps the original channel count (slightly inexact)
W_trunc = g.window_matrix(w, n, truncate=True)
print(f"truncated-output matrix shape: {W_trunc.shape}")

# check the shaping did what it should: gain toward the front, cut behind
back = g.Direction(math.pi / 2, math.pi)
shaped = g.CoeffVector("real", a_shaped)
for name, d in (("front", front), ("back", back)):
    before = g.inverse_sht(g.CoeffVector("real", a), [d.theta], [d.phi])[0]
    after = g.inverse_sht(shaped, [d.theta], [d.phi])[0]
    print(f"  {name}: {before:+.4f} -> {after:+.4f} "
          f"(gain {after / before:+.3f})")

# ---- beamformed binaural decode -------------------------------------
# toy HRTF coefficients: an omni ear plus opposite-signed dipole parts
H = np.zeros((2, 4))
H[:, 0] = 1.0
H[0, g.acn_index(1, -1)] = 0.6    # left ear favors +y
H[1, g.acn_index(1, -1)] = -0.6   # right ear favors -y
beams = g.binaural_beam_matrices(H, n)
print(f"\nprecomputed beam matrices: {beams.shape} "
      "(targets x ears x channels)")

# steer a sharper pattern around the scene; the precomputed part is fixed
zonal_beam = np.sqrt(4 * np.pi / (2 * np.arange(n + 1) + 1))  # max focus
for phi in (0.0, math.pi / 2, math.pi, 3 * math.pi / 2):
    w_b = g.steer_axisymmetric(zonal_beam, g.Direction(math.pi / 2, phi))
    left, right = g.binaural_beamform(beams, a, w_b)
    print(f"  steer phi={phi:4.2f}: left {left:+.4f}  right {right:+.4f}")

# oracle: the left/right outputs are integrals of scene * beam * ear
w_b = g.steer_axisymmetric(zonal_beam, front)
b = g.binaural_beamform(beams, a, w_b)
grid = g.build_grid(3 * (2 * n + 1))
prod = (g.inverse_sht(g.CoeffVector("real", a), grid.theta, grid.phi)
        * g.inverse_sht(g.CoeffVector("real", w_b), grid.theta, grid.phi))
ears = g.sh_matrix("real", 1, grid.theta, grid.phi) @ H.T
ref = (grid.weights[:, None] * prod[:, None] * ears).sum(axis=0)
print("oracle difference:", np.max(np.abs(b - ref)))
