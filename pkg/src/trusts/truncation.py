"""Reduce a post-gate workspace back to at most ``k`` terms.

Each call returns the fraction of probability it kept and folds that
fraction into ``out.gamma_sq``, so after a run ``gamma_sq`` is the product
of all per-step kept fractions. The kept terms are renormalized on every
step rather than once at the end.
"""

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CapacityError, EmptyWorkspace, InvalidArgument, WorkspaceOverflow, ZeroStateError
from .selection import random_k_indices, top_k_indices, top_k_indices_sorted
from .sparse_state import renormalize


class TruncationKind(enum.Enum):
    TOPK = "topk"
    RANDOMK = "randomk"
    NONE = "none"


@dataclass(frozen=True)
class TruncationPolicy:
    """Selection rule applied after each contraction.

    ``seed`` is only consumed by random-k.
    """

    kind: TruncationKind = TruncationKind.TOPK
    seed: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", TruncationKind(self.kind))

    @classmethod
    def top_k(cls):
        return cls(TruncationKind.TOPK)

    @classmethod
    def random_k(cls, seed=None):
        return cls(TruncationKind.RANDOMK, seed)

    @classmethod
    def none(cls):
        return cls(TruncationKind.NONE)

    @classmethod
    def parse(cls, name, seed=None):
        try:
            return cls(TruncationKind(name.lower()), seed)
        except ValueError:
            choices = ", ".join(k.value for k in TruncationKind)
            raise InvalidArgument(f"unknown truncation {name!r}; expected one of {choices}") from None

    def make_rng(self):
        return np.random.default_rng(self.seed)


def truncate(ws, k, policy, out, rng=None, full_sort=False):
    """Select at most ``k`` workspace terms into ``out`` and renormalize it.

    Parameters
    ----------
    ws : ContractionWorkspace
    k : int
        Number of terms to keep; must not exceed ``out.capacity``.
    policy : TruncationPolicy
    out : SparseState
        Receives the kept terms; its previous contents are overwritten.
    rng : numpy.random.Generator, optional
        Stream for random-k. Defaults to a fresh generator from ``policy.seed``.
    full_sort : bool
        Use the O(n log n) full-sort top-k path (differential testing only).

    Returns
    -------
    float
        Kept probability over total workspace probability, in (0, 1].
    """
    n = ws.n_out
    if n == 0:
        raise EmptyWorkspace("workspace is empty; the state collapsed to zero")
    if k > out.capacity:
        raise CapacityError(f"k={k} exceeds the output capacity {out.capacity}")
    amps = ws.amps[:n]
    probs = amps.real**2 + amps.imag**2
    total = float(probs.sum())
    if total == 0.0:
        raise ZeroStateError("workspace holds only zero amplitudes")

    if n <= k:
        idx = None
    elif policy.kind is TruncationKind.TOPK:
        select = top_k_indices_sorted if full_sort else top_k_indices
        idx = select(probs, ws.coords[:n], k)
    elif policy.kind is TruncationKind.RANDOMK:
        idx = random_k_indices(n, k, policy.make_rng() if rng is None else rng)
    else:
        raise WorkspaceOverflow(
            f"{n} terms exceed capacity {k} under the 'none' policy; use k = 2^N"
        )

    if idx is None:
        m = n
        out.coords[:m] = ws.coords[:n]
        out.amps[:m] = amps
    else:
        m = idx.shape[0]
        out.coords[:m] = ws.coords[idx]
        out.amps[:m] = amps[idx]
    out.n_nz = m
    kept = renormalize(out)
    # Summation order differs between kept and total; clamp the rounding.
    step = 1.0 if idx is None else min(kept / total, 1.0)
    out.gamma_sq *= step
    return step
