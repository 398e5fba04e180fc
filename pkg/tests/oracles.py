"""Reference implementations used only by the tests.

Each one is written independently of the library route it checks: full
matrix embedding instead of group contraction, dense-vector truncation
instead of sparse selection, exhaustive subsets instead of partial selection.
"""

import itertools

import numpy as np


def embed_unitary(u, g1, g2, num_qubits):
    """The 2^N x 2^N matrix of a 4x4 gate on qubits (g1, g2), built entry by entry."""
    dim = 1 << num_qubits
    full = np.zeros((dim, dim), dtype=complex)
    for x in range(dim):
        j_in = ((x >> g1) & 1) + 2 * ((x >> g2) & 1)
        base = x & ~((1 << g1) | (1 << g2))
        for j_out in range(4):
            y = base | ((j_out & 1) << g1) | ((j_out >> 1) << g2)
            full[y, x] += u[j_out, j_in]
    return full


def dense_circuit_unitary_run(circuit, initial=0):
    n = circuit.num_qubits
    vec = np.zeros(1 << n, dtype=complex)
    vec[initial] = 1.0
    for g in circuit.gates:
        vec = embed_unitary(g.matrix, *g.targets, n) @ vec
    return vec


def dense_truncated_run(circuit, k, initial=0):
    """Top-k simulation on a full vector: zero all but the k most probable entries after each gate.

    Returns (final normalized vector, product of kept fractions).
    """
    n = circuit.num_qubits
    vec = np.zeros(1 << n, dtype=complex)
    vec[initial] = 1.0
    gamma_sq = 1.0
    for g in circuit.gates:
        vec = embed_unitary(g.matrix, *g.targets, n) @ vec if n <= 10 else _apply_tensordot(vec, g, n)
        p = np.abs(vec) ** 2
        if np.count_nonzero(p) > k:
            # Descending probability, ascending coordinate on ties.
            order = sorted(range(len(p)), key=lambda i: (-p[i], i))[:k]
            kept = np.zeros_like(vec)
            kept[order] = vec[order]
            gamma_sq *= p[order].sum() / p.sum()
            vec = kept
        vec = vec / np.linalg.norm(vec)
    return vec, gamma_sq


def _apply_tensordot(vec, gate, n):
    g1, g2 = gate.targets
    t = vec.reshape([2] * n)
    # numpy axis a holds qubit n-1-a.
    a1, a2 = n - 1 - g1, n - 1 - g2
    u = gate.matrix.reshape(2, 2, 2, 2)  # [hi_out, lo_out, hi_in, lo_in]
    out = np.tensordot(u, t, axes=([2, 3], [a2, a1]))
    out = np.moveaxis(out, [0, 1], [a2, a1])
    return out.reshape(-1)


def best_subset_probability(probs, k):
    """Largest total of any k-subset, by enumeration.

    Subsets are summed in ascending index order with numpy, so the result is
    bit-comparable with ``probs[sorted_indices].sum()``.
    """
    probs = np.asarray(probs)
    return max(probs[list(c)].sum() for c in itertools.combinations(range(len(probs)), k))
