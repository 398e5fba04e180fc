"""Index selection primitives shared by truncation and dense-to-sparse conversion.

All selectors return positions into the input arrays, ascending, so that the
relative order of the surviving entries is preserved.
"""

import numba
import numpy as np


def top_k_indices(weights, coords, k):
    """Positions of the ``k`` largest ``weights``.

    Ties at the k-th weight are resolved in favour of the smaller coordinate.
    Runs in expected linear time: one introselect pass finds the threshold
    weight and a second one (over the tied entries only) settles the boundary.
    """
    weights = np.asarray(weights)
    n = weights.shape[0]
    if k >= n:
        return np.arange(n)
    if k <= 0:
        return np.empty(0, dtype=np.intp)
    threshold = np.partition(weights, n - k)[n - k]
    above = np.flatnonzero(weights > threshold)
    need = k - above.shape[0]
    tied = np.flatnonzero(weights == threshold)
    if tied.shape[0] > need:
        tied_coords = np.asarray(coords)[tied]
        tied = tied[np.argpartition(tied_coords, need - 1)[:need]]
    out = np.concatenate((above, tied))
    out.sort()
    return out


def top_k_indices_sorted(weights, coords, k):
    """Full-sort reference for :func:`top_k_indices` (same result, O(n log n))."""
    weights = np.asarray(weights)
    order = np.lexsort((np.asarray(coords), -weights))
    out = np.sort(order[:k])
    return out


@numba.njit(cache=True)
def _partial_fisher_yates(n, targets):
    idx = np.arange(n)
    for i in range(targets.shape[0]):
        j = targets[i]
        tmp = idx[i]
        idx[i] = idx[j]
        idx[j] = tmp
    return idx[: targets.shape[0]]


def random_k_indices(n, k, rng):
    """Uniformly random ``k``-subset of ``range(n)`` by partial Fisher-Yates."""
    if k >= n:
        return np.arange(n)
    # Swap target for step i is uniform on [i, n).
    targets = rng.integers(np.arange(k), n)
    out = _partial_fisher_yates(n, targets.astype(np.int64))
    out.sort()
    return out
