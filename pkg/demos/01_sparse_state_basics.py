"""A sparse state is a list of (basis index, amplitude) pairs plus gamma^2."""

import numpy as np

from trusts import SparseState, from_dense, inner_product, new_basis_state, norm_sq, to_dense

# |0101> on four qubits, room for 8 terms.  Qubit 0 is the lowest bit.
s = new_basis_state(4, 0b0101, capacity=8)
print(s.terms(), "norm^2 =", norm_sq(s))

# Build one from explicit terms.
h = 1 / np.sqrt(2)
bell = SparseState.from_terms(2, {0b00: h, 0b11: h})
print("bell:", bell.terms())
print("dense:", to_dense(bell))

# Overlaps only touch coordinates present in both states.
plus = SparseState.from_terms(2, {0b00: h, 0b01: h})
print("<bell|plus> =", inner_product(bell, plus))

# Going back from a dense vector keeps the k largest amplitudes and
# records the kept probability.
rng = np.random.default_rng(0)
v = rng.standard_normal(16) + 1j * rng.standard_normal(16)
v /= np.linalg.norm(v)
approx = from_dense(v, 4, capacity=4)
print("kept 4 of 16 terms, gamma^2 =", approx.gamma_sq)
