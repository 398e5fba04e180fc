import numpy as np
import pytest

from trusts.sparse_state import SparseState


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_sparse(rng, num_qubits, n_terms, capacity=None, normalize=True):
    coords = rng.choice(1 << num_qubits, size=n_terms, replace=False)
    amps = rng.standard_normal(n_terms) + 1j * rng.standard_normal(n_terms)
    if normalize:
        amps /= np.linalg.norm(amps)
    return SparseState.from_terms(num_qubits, dict(zip(coords.tolist(), amps)), capacity)
