"""Two-qubit gates and Haar-random unitary sampling.

A gate's 4x4 matrix is indexed by the local index ``b_lo + 2 * b_hi``, where
``b_lo`` is the bit of the first target and ``b_hi`` the bit of the second.
Normalized gates have ``targets[0] < targets[1]``, so the lower qubit index
always maps to local bit 0.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DuplicateTargets, InvalidArgument, NonUnitaryMatrix, TargetOutOfRange

UNITARY_ATOL = 1e-12

# Exchanges the two local bits: 0b01 <-> 0b10.
_LOCAL_SWAP = np.array([0, 2, 1, 3])


def haar_random_unitary(dim, rng):
    """Sample from the Haar measure on U(dim).

    QR-decomposes a complex Ginibre matrix and fixes the phase of each column
    by the phase of the matching diagonal entry of R, which makes the
    distribution exactly invariant rather than biased by the QR convention.
    """
    if dim < 1:
        raise InvalidArgument(f"dimension must be >= 1, got {dim}")
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def unitarity_error(matrix):
    m = np.asarray(matrix)
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


def is_unitary(matrix, atol=UNITARY_ATOL):
    return unitarity_error(matrix) <= atol


@dataclass(frozen=True, eq=False)
class TwoQubitGate:
    """A 4x4 unitary bound to an ordered pair of target qubits."""

    matrix: np.ndarray
    targets: tuple

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.shape != (4, 4):
            raise InvalidArgument(f"gate matrix must be 4x4, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        if len(self.targets) != 2:
            raise InvalidArgument("a two-qubit gate needs exactly two targets")

    def normalized(self):
        """Equivalent gate with ascending targets."""
        g1, g2 = self.targets
        if g1 < g2:
            return self
        if g1 == g2:
            raise DuplicateTargets(f"gate targets must differ, got {self.targets}")
        m = self.matrix[np.ix_(_LOCAL_SWAP, _LOCAL_SWAP)]
        return TwoQubitGate(m, (g2, g1))

    def __eq__(self, other):
        if not isinstance(other, TwoQubitGate):
            return NotImplemented
        return self.targets == other.targets and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash((self.targets, self.matrix.tobytes()))


def embed_check(gate, num_qubits, atol=UNITARY_ATOL):
    """Validate a gate for an N-qubit register and return it normalized."""
    g1, g2 = gate.targets
    if g1 == g2:
        raise DuplicateTargets(f"gate targets must differ, got {gate.targets}")
    for t in gate.targets:
        if not 0 <= t < num_qubits:
            raise TargetOutOfRange(f"target {t} out of range for {num_qubits} qubits")
    err = unitarity_error(gate.matrix)
    if err > atol:
        raise NonUnitaryMatrix(f"max |U^dag U - I| = {err:.3g} exceeds {atol:g}")
    return gate.normalized()


def random_gate(g1, g2, rng):
    return TwoQubitGate(haar_random_unitary(4, rng), (g1, g2)).normalized()


def local_gate(u, on="low"):
    """Lift a 2x2 matrix to the 4x4 local space, acting on one of the two targets."""
    u = np.asarray(u, dtype=np.complex128)
    eye = np.eye(2)
    # np.kron(A, B) puts A on the high local bit.
    if on == "low":
        return np.kron(eye, u)
    if on == "high":
        return np.kron(u, eye)
    raise InvalidArgument(f"on must be 'low' or 'high', got {on!r}")


IDENTITY = np.eye(4, dtype=np.complex128)
SWAP = np.eye(4, dtype=np.complex128)[_LOCAL_SWAP]
HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)
CNOT = np.array(  # control on the low target, flip the high one
    [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=np.complex128
)
