"""Multiply two spherical functions entirely in the coefficient domain.

A band-limited function on the sphere is a finite vector of spherical
harmonic coefficients.  The pointwise product of two such functions is
again band-limited, and its coefficients are bilinear forms of the factor
coefficients through precomputed coupling matrices -- no sampling, no
transform, no aliasing.
"""

import numpy as np

import gauntsh as g

rng = np.random.default_rng(2024)

# two random band-limited functions, orders 3 and 2, in the real basis
f = g.CoeffVector("real", rng.standard_normal(16))
h = g.CoeffVector("real", rng.standard_normal(9))

table = g.build_table("real", 3, 2)
product = g.multiply_spherical(f, h, table)
print(f"factor orders: {f.n_max} and {h.n_max}")
print(f"product order: {product.n_max} "
      f"({len(product)} coefficients, band limit is the sum of the factors)")

# sanity-check a few directions: coefficients really synthesize f*h
for theta, phi in [(0.3, 1.0), (1.7, 4.2), (2.9, 0.1)]:
    lhs = g.inverse_sht(product, [theta], [phi])[0]
    rhs = (g.inverse_sht(f, [theta], [phi]) * g.inverse_sht(h, [theta], [phi]))[0]
    print(f"  at ({theta:.1f}, {phi:.1f}):  product {lhs:+.6f}   "
          f"pointwise {rhs:+.6f}")

# the brute-force route: sample both factors on a quadrature grid that
# resolves the product band, multiply pointwise, and transform back
grid = g.build_grid(3 * (f.n_max + h.n_max))
sampled = g.grid_function(grid, f) * g.grid_function(grid, h)
reference = g.forward_sht(grid, sampled, "real", product.n_max)
print("max |coefficient-domain - quadrature|:",
      np.max(np.abs(product.data - reference.data)))

# the coupling matrices are sparse: selection rules zero out most entries
stack = table.stack()
print(f"coupling stack: {stack.shape[0]} target matrices of "
      f"{stack.shape[1]}x{stack.shape[2]}, "
      f"{100 * np.count_nonzero(stack) / stack.size:.1f}% nonzero")

# the same machinery works for complex harmonics
fc = g.convert_coeffs(f, "complex")
hc = g.convert_coeffs(h, "complex")
pc = g.multiply_spherical(fc, hc, g.build_table("complex", 3, 2))
print("complex-basis product agrees after conversion:",
      np.max(np.abs(g.convert_coeffs(pc, "real").data - product.data)))
