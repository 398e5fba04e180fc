"""Fixed-capacity sparse representation of an N-qubit state.

A state is a pair of parallel arrays: unsigned 64-bit basis coordinates and
complex128 amplitudes, both of length ``capacity``, with a fill pointer
``n_nz`` marking the live prefix.

Bit convention: qubit ``b`` is bit ``b`` of the coordinate (qubit 0 is the
least significant bit), so ``|q2 q1 q0> = |011>`` is coordinate 3.
"""

import json
import os

import numpy as np

from .errors import (
    CapacityError,
    CoordinateOutOfRange,
    DenseLimitExceeded,
    InvalidQubitCount,
    LengthMismatch,
    QubitCountMismatch,
    ZeroStateError,
)
from .selection import top_k_indices

MAX_QUBITS = 64
DEFAULT_DENSE_LIMIT = 26
DENSE_LIMIT_ENV = "TRUSTS_DENSE_LIMIT"

COORD_DTYPE = np.uint64
AMP_DTYPE = np.complex128


def dense_limit():
    """Largest qubit count for which dense 2^N vectors are allowed."""
    value = os.environ.get(DENSE_LIMIT_ENV)
    return int(value) if value else DEFAULT_DENSE_LIMIT


def check_dense_allowed(num_qubits, limit=None):
    limit = dense_limit() if limit is None else limit
    if num_qubits > limit:
        raise DenseLimitExceeded(
            f"dense vector for {num_qubits} qubits exceeds the limit of {limit} "
            f"(set {DENSE_LIMIT_ENV} to raise it)"
        )


def _check_num_qubits(num_qubits):
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise InvalidQubitCount(f"qubit count must be in 1..{MAX_QUBITS}, got {num_qubits}")


def _check_capacity(capacity, num_qubits):
    if capacity < 1:
        raise CapacityError("capacity must be at least 1")
    if capacity > 1 << num_qubits:
        raise CapacityError(f"capacity {capacity} exceeds the basis size 2^{num_qubits}")


class SparseState:
    """k-term approximation of an N-qubit state.

    Attributes
    ----------
    num_qubits : int
    capacity : int
        Fixed array length ``k``.
    coords : ndarray of uint64, shape (capacity,)
    amps : ndarray of complex128, shape (capacity,)
    n_nz : int
        Number of live entries; only ``coords[:n_nz]`` and ``amps[:n_nz]``
        are meaningful.
    gamma_sq : float
        Probability retained through all truncations so far.
    """

    __slots__ = ("num_qubits", "capacity", "coords", "amps", "n_nz", "gamma_sq")

    def __init__(self, num_qubits, capacity):
        _check_num_qubits(num_qubits)
        _check_capacity(capacity, num_qubits)
        self.num_qubits = int(num_qubits)
        self.capacity = int(capacity)
        self.coords = np.zeros(capacity, dtype=COORD_DTYPE)
        self.amps = np.zeros(capacity, dtype=AMP_DTYPE)
        self.n_nz = 0
        self.gamma_sq = 1.0

    @classmethod
    def from_terms(cls, num_qubits, terms, capacity=None, gamma_sq=1.0):
        """Build a state from a ``{coordinate: amplitude}`` mapping (not renormalized)."""
        items = dict(terms)
        capacity = len(items) if capacity is None else capacity
        if len(items) > capacity:
            raise CapacityError(f"{len(items)} terms do not fit in capacity {capacity}")
        state = cls(num_qubits, capacity)
        if items:
            coords = np.array([int(c) for c in items], dtype=COORD_DTYPE)
            _check_coords(coords, num_qubits)
            state.coords[: len(items)] = coords
            state.amps[: len(items)] = np.array(list(items.values()), dtype=AMP_DTYPE)
        state.n_nz = len(items)
        state.gamma_sq = float(gamma_sq)
        return state

    @property
    def live_coords(self):
        return self.coords[: self.n_nz]

    @property
    def live_amps(self):
        return self.amps[: self.n_nz]

    def terms(self):
        """Live entries as a ``{int coordinate: complex amplitude}`` dict."""
        return {int(c): complex(a) for c, a in zip(self.live_coords, self.live_amps)}

    def copy(self):
        other = SparseState(self.num_qubits, self.capacity)
        other.coords[:] = self.coords
        other.amps[:] = self.amps
        other.n_nz = self.n_nz
        other.gamma_sq = self.gamma_sq
        return other

    def has_unique_coords(self):
        c = np.sort(self.live_coords)
        return bool(np.all(c[1:] != c[:-1]))

    def __len__(self):
        return self.n_nz

    def __repr__(self):
        return (
            f"SparseState(num_qubits={self.num_qubits}, capacity={self.capacity}, "
            f"n_nz={self.n_nz}, gamma_sq={self.gamma_sq:.6g})"
        )


def _check_coords(coords, num_qubits):
    if coords.size and num_qubits < MAX_QUBITS and int(coords.max()) >> num_qubits:
        raise CoordinateOutOfRange(f"coordinate {int(coords.max())} >= 2^{num_qubits}")


def new_basis_state(num_qubits, x0, capacity):
    """The computational basis state ``|x0>`` in a state of the given capacity."""
    _check_num_qubits(num_qubits)
    if capacity < 1:
        raise CapacityError("capacity must be at least 1")
    if not 0 <= int(x0) < 1 << num_qubits:
        raise CoordinateOutOfRange(f"basis index {x0} out of range for {num_qubits} qubits")
    state = SparseState(num_qubits, capacity)
    state.coords[0] = int(x0)
    state.amps[0] = 1.0
    state.n_nz = 1
    return state


def norm_sq(state):
    a = state.live_amps
    return float(np.dot(a.real, a.real) + np.dot(a.imag, a.imag))


def inner_product(a, b):
    """<a|b>, joined on coordinates without building dense vectors."""
    if a.num_qubits != b.num_qubits:
        raise QubitCountMismatch(f"{a.num_qubits} vs {b.num_qubits} qubits")
    _, ia, ib = np.intersect1d(
        a.live_coords, b.live_coords, assume_unique=True, return_indices=True
    )
    return complex(np.vdot(a.live_amps[ia], b.live_amps[ib]))


def to_dense(state, limit=None):
    check_dense_allowed(state.num_qubits, limit)
    vec = np.zeros(1 << state.num_qubits, dtype=AMP_DTYPE)
    vec[state.live_coords.astype(np.intp)] = state.live_amps
    return vec


def from_dense(vec, num_qubits, capacity):
    """Best ``capacity``-term approximation of a dense vector.

    Keeps the entries of largest probability (ties go to the smaller
    coordinate), renormalizes, and sets ``gamma_sq`` to the kept fraction of
    the total probability. Exact zeros are never stored.
    """
    vec = np.asarray(vec, dtype=AMP_DTYPE)
    if vec.ndim != 1 or vec.shape[0] != 1 << num_qubits:
        raise LengthMismatch(f"expected a vector of length 2^{num_qubits}, got shape {vec.shape}")
    if capacity < 1:
        raise CapacityError("capacity must be at least 1")
    probs = vec.real**2 + vec.imag**2
    total = float(probs.sum())
    if total == 0.0:
        raise ZeroStateError("dense vector is identically zero")
    nonzero = np.flatnonzero(probs)
    keep = nonzero[top_k_indices(probs[nonzero], nonzero, capacity)]
    state = SparseState(num_qubits, min(capacity, 1 << num_qubits))
    n = keep.shape[0]
    state.coords[:n] = keep
    state.amps[:n] = vec[keep]
    state.n_nz = n
    kept = renormalize(state)
    state.gamma_sq = kept / total
    return state


def renormalize(state):
    """Scale the live amplitudes to unit norm; return the norm_sq removed."""
    ns = norm_sq(state)
    if ns == 0.0:
        raise ZeroStateError("cannot renormalize a zero state")
    state.amps[: state.n_nz] /= np.sqrt(ns)
    return ns


def snapshot(state):
    """Plain-data view of a state, coordinate-ascending."""
    order = np.argsort(state.live_coords, kind="stable")
    coords = state.live_coords[order]
    amps = state.live_amps[order]
    return {
        "num_qubits": state.num_qubits,
        "capacity": state.capacity,
        "gamma_sq": state.gamma_sq,
        "terms": [[int(c), float(a.real), float(a.imag)] for c, a in zip(coords, amps)],
    }


def from_snapshot(data):
    state = SparseState(int(data["num_qubits"]), int(data["capacity"]))
    terms = data["terms"]
    if len(terms) > state.capacity:
        raise CapacityError(f"{len(terms)} terms do not fit in capacity {state.capacity}")
    for i, (c, re, im) in enumerate(terms):
        state.coords[i] = int(c)
        state.amps[i] = complex(re, im)
    state.n_nz = len(terms)
    _check_coords(state.live_coords, state.num_qubits)
    state.gamma_sq = float(data["gamma_sq"])
    return state


def write_snapshot(state, path):
    with open(path, "w") as fh:
        json.dump(snapshot(state), fh, indent=1)
        fh.write("\n")


def read_snapshot(path):
    with open(path) as fh:
        return from_snapshot(json.load(fh))
