"""Truncated sparse-tensor simulation of quantum circuits.

A circuit is applied gate by gate to a state that stores at most ``k``
computational-basis terms; after each gate the excess terms are truncated
(top-k or random-k) and the retained probability is tracked as ``gamma_sq``.
"""

from .analysis import (
    FidelityBounds,
    GapSummary,
    f_min,
    fidelity,
    fidelity_bounds,
    gamma_fidelity_gap,
    numeric_fmax,
    porter_thomas_fmax,
    porter_thomas_pmin,
)
from .circuits import (
    Circuit,
    RunReport,
    random_layered_circuit,
    random_sequential_circuit,
    read_circuit,
    run_dense,
    run_sparse,
    write_circuit,
)
from .contraction import ContractionWorkspace, apply_gate, gate_mask, sort_by_free_index, split_index
from .errors import TrustsError
from .gates import TwoQubitGate, embed_check, haar_random_unitary
from .sparse_state import (
    SparseState,
    from_dense,
    inner_product,
    new_basis_state,
    norm_sq,
    renormalize,
    to_dense,
)
from .truncation import TruncationKind, TruncationPolicy, truncate

__version__ = "0.1.0"
