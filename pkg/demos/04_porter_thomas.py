"""Deep random circuits: output probabilities look exponential.

The best k-term fidelity then follows d (1 - ln d).
"""

import numpy as np

from trusts import numeric_fmax, porter_thomas_fmax, porter_thomas_pmin, random_layered_circuit, run_dense

N = 12
psis = [run_dense(random_layered_circuit(N, 10, seed=s)) for s in range(20)]

# Histogram of 2^N p against exp(-x).
p = np.concatenate([np.abs(v) ** 2 for v in psis]) * 2**N
hist, edges = np.histogram(p, bins=8, range=(0, 4), density=True)
for h, lo, hi in zip(hist, edges, edges[1:]):
    mid = (lo + hi) / 2
    print(f"x={mid:4.2f}  sampled {h:.3f}  exp(-x) {np.exp(-mid):.3f}")

for e in (1, 3, 5, 8):
    d, k = 2.0**-e, 2 ** (N - e)
    got = np.mean([numeric_fmax(v, k) for v in psis])
    kth = np.mean([np.sort(np.abs(v) ** 2)[-k] for v in psis])
    print(f"d=2^-{e}: f_max {got:.4f} vs {porter_thomas_fmax(d):.4f}; "
          f"k-th prob {kth:.3e} vs {porter_thomas_pmin(d, N):.3e}")
