"""Random circuits, circuit files, and the sparse and dense simulation drivers.

Seeding
-------
A circuit seed ``s`` is expanded with ``numpy.random.SeedSequence(s).spawn(2)``
into two independent streams: the first draws the structure (qubit pairings),
the second draws the Haar-random gate matrices. Passing ``matrix_seed`` takes
the matrix stream from ``SeedSequence(matrix_seed)`` instead, so
structure and matrices can be varied independently.
"""

import json
import time
from dataclasses import dataclass, field
from typing import List, Optional

import numba
import numpy as np

from .contraction import ContractionWorkspace, apply_gate, warm_up
from .errors import CapacityError, CircuitFormatError, InvalidArgument, CoordinateOutOfRange
from .gates import TwoQubitGate, embed_check, random_gate
from .sparse_state import AMP_DTYPE, check_dense_allowed, new_basis_state
from .truncation import TruncationKind, TruncationPolicy, truncate

FORMAT_VERSION = 1


@dataclass(frozen=True, eq=False)
class Circuit:
    """An ordered list of two-qubit gates on ``num_qubits`` qubits.

    ``layer_boundaries`` holds the gate index at which each layer starts; it is
    empty for sequential circuits.
    """

    num_qubits: int
    gates: tuple
    layer_boundaries: tuple = ()
    seed: Optional[int] = None
    matrix_seed: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "layer_boundaries", tuple(int(b) for b in self.layer_boundaries))

    @property
    def num_layers(self):
        return len(self.layer_boundaries)

    @property
    def architecture(self):
        return "layered" if self.layer_boundaries else "sequential"

    def __len__(self):
        return len(self.gates)

    def layers(self):
        """Gate lists, one per layer (a single list for sequential circuits)."""
        if not self.layer_boundaries:
            return [list(self.gates)]
        ends = list(self.layer_boundaries[1:]) + [len(self.gates)]
        return [list(self.gates[a:b]) for a, b in zip(self.layer_boundaries, ends)]

    def validate(self):
        """Check every gate and the one-gate-per-qubit-per-layer rule; return normalized copy."""
        gates = tuple(embed_check(g, self.num_qubits) for g in self.gates)
        if self.layer_boundaries:
            b = self.layer_boundaries
            if b[0] != 0 or any(x >= y for x, y in zip(b, b[1:])) or b[-1] > len(gates):
                raise CircuitFormatError(f"bad layer boundaries {b}")
            for layer in Circuit(self.num_qubits, gates, b).layers():
                used = [t for g in layer for t in g.targets]
                if len(used) != len(set(used)):
                    raise CircuitFormatError("a qubit appears twice within one layer")
        return Circuit(self.num_qubits, gates, self.layer_boundaries, self.seed, self.matrix_seed)

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return (
            self.num_qubits == other.num_qubits
            and self.layer_boundaries == other.layer_boundaries
            and self.gates == other.gates
        )


def circuit_streams(seed, matrix_seed=None):
    """(structure_rng, matrix_rng) for a circuit seed."""
    structure_ss, matrix_ss = np.random.SeedSequence(seed).spawn(2)
    if matrix_seed is not None:
        matrix_ss = np.random.SeedSequence(matrix_seed).spawn(2)[1]
    return np.random.default_rng(structure_ss), np.random.default_rng(matrix_ss)


def random_layered_circuit(num_qubits, layers, seed=None, matrix_seed=None):
    """``layers`` layers of floor(N/2) Haar-random gates on random disjoint pairs.

    Each layer shuffles the qubit labels and pairs neighbours in the shuffled
    order, which gives a uniformly random (near-)perfect matching.
    """
    if num_qubits < 2 or layers < 1:
        raise InvalidArgument("need num_qubits >= 2 and layers >= 1")
    structure, matrices = circuit_streams(seed, matrix_seed)
    gates = []
    boundaries = []
    for _ in range(layers):
        boundaries.append(len(gates))
        perm = structure.permutation(num_qubits)
        for i in range(num_qubits // 2):
            gates.append(random_gate(int(perm[2 * i]), int(perm[2 * i + 1]), matrices))
    return Circuit(num_qubits, gates, boundaries, seed, matrix_seed)


def random_sequential_circuit(num_qubits, num_gates, seed=None, matrix_seed=None):
    """``num_gates`` Haar-random gates, each on a uniformly random pair of distinct qubits."""
    if num_qubits < 2 or num_gates < 1:
        raise InvalidArgument("need num_qubits >= 2 and num_gates >= 1")
    structure, matrices = circuit_streams(seed, matrix_seed)
    gates = []
    for _ in range(num_gates):
        a, b = structure.choice(num_qubits, size=2, replace=False)
        gates.append(random_gate(int(a), int(b), matrices))
    return Circuit(num_qubits, gates, (), seed, matrix_seed)


# -- circuit files ---------------------------------------------------------


def circuit_to_dict(circuit):
    gates = []
    for g in circuit.gates:
        flat = np.empty(32)
        flat[0::2] = g.matrix.real.ravel()
        flat[1::2] = g.matrix.imag.ravel()
        gates.append({"targets": list(g.targets), "matrix": flat.tolist()})
    return {
        "header": {
            "format_version": FORMAT_VERSION,
            "num_qubits": circuit.num_qubits,
            "layers": circuit.num_layers,
            "seed": circuit.seed,
            "matrix_seed": circuit.matrix_seed,
            "layer_boundaries": list(circuit.layer_boundaries),
        },
        "gates": gates,
    }


def circuit_from_dict(data):
    try:
        header = data["header"]
        version = header["format_version"]
        if version != FORMAT_VERSION:
            raise CircuitFormatError(f"unsupported circuit format version {version}")
        gates = []
        for entry in data["gates"]:
            flat = np.asarray(entry["matrix"], dtype=np.float64)
            if flat.shape != (32,):
                raise CircuitFormatError("gate matrix must have 32 floats")
            matrix = (flat[0::2] + 1j * flat[1::2]).reshape(4, 4)
            gates.append(TwoQubitGate(matrix, tuple(entry["targets"])))
        circuit = Circuit(
            int(header["num_qubits"]),
            gates,
            header.get("layer_boundaries", ()),
            header.get("seed"),
            header.get("matrix_seed"),
        )
    except (KeyError, TypeError) as exc:
        raise CircuitFormatError(f"malformed circuit document: {exc}") from exc
    if circuit.num_layers != int(header.get("layers", circuit.num_layers)):
        raise CircuitFormatError("header layer count disagrees with layer_boundaries")
    return circuit.validate()


def write_circuit(circuit, path):
    with open(path, "w") as fh:
        json.dump(circuit_to_dict(circuit), fh)
        fh.write("\n")


def read_circuit(path):
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CircuitFormatError(f"{path}: not a circuit document ({exc})") from exc
    return circuit_from_dict(data)


# -- simulation ------------------------------------------------------------


@dataclass
class RunReport:
    gamma_sq: float
    wall_time: float
    gate_count: int
    per_gate_time: float
    fidelity: Optional[float] = None
    n_nz_trace: Optional[List[int]] = None
    step_gamma_sq: Optional[List[float]] = None
    norm_sq_trace: Optional[List[float]] = None
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        out = {
            "gamma_sq": self.gamma_sq,
            "wall_time": self.wall_time,
            "gate_count": self.gate_count,
            "per_gate_time": self.per_gate_time,
            "fidelity": self.fidelity,
        }
        for name in ("n_nz_trace", "step_gamma_sq", "norm_sq_trace"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        out.update(self.extra)
        return out


def run_sparse(circuit, k, policy=None, initial=0, record_trace=False, rng=None):
    """Evolve ``|initial>`` through ``circuit`` keeping at most ``k`` terms.

    Gates are validated before the clock starts; the timed region covers
    every contraction and truncation. With ``record_trace`` the report also
    carries the per-gate fill count, kept fraction, and pre-truncation
    norm (timing then includes that bookkeeping).

    Returns
    -------
    (SparseState, RunReport)
    """
    policy = TruncationPolicy.top_k() if policy is None else policy
    n = circuit.num_qubits
    if k < 1:
        raise CapacityError("k must be at least 1")
    if k > 1 << n:
        raise CapacityError(f"k={k} exceeds the basis size 2^{n}")
    if policy.kind is TruncationKind.NONE and k != 1 << n:
        raise InvalidArgument("the 'none' truncation policy requires k = 2^N")
    if not 0 <= initial < 1 << n:
        raise CoordinateOutOfRange(f"initial basis index {initial} out of range")
    gates = [embed_check(g, n) for g in circuit.gates]

    state = new_basis_state(n, initial, k)
    ws = ContractionWorkspace.for_state(state)
    rng = policy.make_rng() if rng is None else rng
    warm_up()
    n_nz_trace, steps, norms = ([], [], []) if record_trace else (None, None, None)

    start = time.perf_counter()
    for gate in gates:
        apply_gate(state, gate, ws)
        if record_trace:
            a = ws.amps[: ws.n_out]
            norms.append(float(np.vdot(a, a).real))
        step = truncate(ws, k, policy, state, rng)
        if record_trace:
            steps.append(step)
            n_nz_trace.append(state.n_nz)
    wall = time.perf_counter() - start

    m = len(gates)
    report = RunReport(
        gamma_sq=state.gamma_sq,
        wall_time=wall,
        gate_count=m,
        per_gate_time=wall / m if m else 0.0,
        n_nz_trace=n_nz_trace,
        step_gamma_sq=steps,
        norm_sq_trace=norms,
    )
    return state, report


@numba.njit(cache=True)
def _dense_apply(vec, g1, g2, u):
    lo1 = (1 << g1) - 1
    lo2 = (1 << g2) - 1
    b1 = 1 << g1
    b2 = 1 << g2
    for i in range(vec.shape[0] >> 2):
        base = ((i >> g1) << (g1 + 1)) | (i & lo1)
        base = ((base >> g2) << (g2 + 1)) | (base & lo2)
        i1 = base | b1
        i2 = base | b2
        i3 = i1 | b2
        a0 = vec[base]
        a1 = vec[i1]
        a2 = vec[i2]
        a3 = vec[i3]
        vec[base] = u[0, 0] * a0 + u[0, 1] * a1 + u[0, 2] * a2 + u[0, 3] * a3
        vec[i1] = u[1, 0] * a0 + u[1, 1] * a1 + u[1, 2] * a2 + u[1, 3] * a3
        vec[i2] = u[2, 0] * a0 + u[2, 1] * a1 + u[2, 2] * a2 + u[2, 3] * a3
        vec[i3] = u[3, 0] * a0 + u[3, 1] * a1 + u[3, 2] * a2 + u[3, 3] * a3


def apply_gate_dense(vec, gate):
    """Apply a two-qubit gate in place to a full 2^N state vector."""
    gate = gate.normalized()
    g1, g2 = gate.targets
    _dense_apply(vec, g1, g2, np.ascontiguousarray(gate.matrix))
    return vec


def run_dense(circuit, initial=0, limit=None):
    """Exact final state of ``circuit`` applied to ``|initial>``."""
    n = circuit.num_qubits
    check_dense_allowed(n, limit)
    if not 0 <= initial < 1 << n:
        raise CoordinateOutOfRange(f"initial basis index {initial} out of range")
    vec = np.zeros(1 << n, dtype=AMP_DTYPE)
    vec[initial] = 1.0
    for gate in circuit.gates:
        apply_gate_dense(vec, embed_check(gate, n))
    return vec
