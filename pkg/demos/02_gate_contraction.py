"""How one two-qubit gate is applied to a sparse state.

The gate mask has ones on the two target bits.  Terms that agree on every
other bit (the free index) form a group, and each group is contracted with
the 4x4 matrix independently.
"""

import numpy as np

from trusts import (
    ContractionWorkspace,
    SparseState,
    apply_gate,
    gate_mask,
    sort_by_free_index,
    split_index,
)
from trusts.gates import random_gate

m = gate_mask(1, 4)
print("mask for qubits 1 and 4:", m, bin(m))
print("split 22 ->", split_index(22, m))

coords = [0b00000, 0b10010, 0b00101, 0b10000, 0b00111, 0b01000, 0b00010, 0b11010]
s = SparseState.from_terms(5, {c: 1 / np.sqrt(8) for c in coords})
sort_by_free_index(s, m)
for c in s.live_coords:
    free, local = split_index(int(c), m)
    print(f"{int(c):05b}  free={free:05b}  local={local:05b}")

# Each group of g terms can produce up to 4 outputs, so the workspace
# holds 4x the input.
rng = np.random.default_rng(1)
gate = random_gate(1, 4, rng)
ws = ContractionWorkspace.for_state(s)
apply_gate(s, gate, ws)
print(s.n_nz, "terms in,", ws.n_out, "terms out")
print("output norm^2:", np.vdot(ws.live_amps, ws.live_amps).real)
