"""Fidelity against the dense state as the kept fraction d shrinks (N = 12)."""

import numpy as np

from trusts import analysis, random_layered_circuit, run_dense, run_sparse
from trusts.bench import derive_seed
from trusts.truncation import TruncationPolicy

N, L, CIRCUITS = 12, 5, 10

print(f"{'d':>7} {'top-k f':>10} {'gamma^2':>10} {'random-k f':>11} {'f_max':>8}")
for e in range(0, 11):
    k = 2 ** (N - e)
    ft, gt, fr, fx = [], [], [], []
    for i in range(CIRCUITS):
        c = random_layered_circuit(N, L, seed=derive_seed(0, N, L, i))
        psi = run_dense(c)
        state, rep = run_sparse(c, k)
        ft.append(analysis.fidelity(state, psi))
        gt.append(rep.gamma_sq)
        rstate, _ = run_sparse(c, k, TruncationPolicy.random_k(i))
        fr.append(analysis.fidelity(rstate, psi))
        fx.append(analysis.numeric_fmax(psi, k))
    print(f"2^-{e:<4} {np.mean(ft):10.4g} {np.mean(gt):10.4g} {np.mean(fr):11.4g} {np.mean(fx):8.4g}")

print("random guess f_min =", analysis.f_min(N))
