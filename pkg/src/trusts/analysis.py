"""Fidelity of truncated states and analytic bounds on it.

``f_min`` is the mean fidelity of a random single-basis-state guess.
``porter_thomas_fmax`` is the best fidelity reachable with a fraction ``d`` of
the basis when output probabilities are exponentially (Porter-Thomas)
distributed, and ``numeric_fmax`` is the same bound computed from a known
exact state.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import stats

from .errors import InsufficientData, InvalidArgument, LengthMismatch, UnnormalizedInput
from .sparse_state import norm_sq

NORM_TOL = 1e-6


def _check_fraction(d):
    if not 0.0 < d <= 1.0:
        raise InvalidArgument(f"truncation fraction must lie in (0, 1], got {d}")


def _check_normalized(ns, what):
    if abs(ns - 1.0) > NORM_TOL:
        raise UnnormalizedInput(f"{what} has norm^2 {ns:.12g}, expected 1")


def fidelity(phi, psi):
    """|<psi|phi>|^2 for a sparse ``phi`` and a dense ``psi``."""
    psi = np.asarray(psi)
    if psi.ndim != 1 or psi.shape[0] != 1 << phi.num_qubits:
        raise LengthMismatch(
            f"dense vector of shape {psi.shape} does not match {phi.num_qubits} qubits"
        )
    _check_normalized(norm_sq(phi), "sparse state")
    _check_normalized(float(np.vdot(psi, psi).real), "dense state")
    overlap = np.vdot(psi[phi.live_coords.astype(np.intp)], phi.live_amps)
    return float(abs(overlap) ** 2)


def f_min(num_qubits):
    if not 1 <= num_qubits <= 64:
        raise InvalidArgument(f"qubit count must be in 1..64, got {num_qubits}")
    return math.ldexp(1.0, -num_qubits)


def porter_thomas_fmax(d):
    """d * (1 - ln d), capped at 1."""
    _check_fraction(d)
    return min(d * (1.0 - math.log(d)), 1.0)


def porter_thomas_pmin(d, num_qubits):
    """Smallest kept probability, -ln(d) / 2^N, when keeping a fraction d."""
    _check_fraction(d)
    return -math.log(d) / math.ldexp(1.0, num_qubits)


def numeric_fmax(psi, k):
    """Sum of the ``k`` largest probabilities of ``psi``.

    This is the fidelity of the best ``k``-term approximation of ``psi``.
    """
    psi = np.asarray(psi)
    probs = psi.real**2 + psi.imag**2
    _check_normalized(float(probs.sum()), "dense state")
    n = probs.shape[0]
    if k < 1:
        raise InvalidArgument("k must be at least 1")
    if k >= n:
        return float(probs.sum())
    return float(np.partition(probs, n - k)[n - k:].sum())


@dataclass(frozen=True)
class FidelityBounds:
    d: float
    f_min: float
    f_max_porter_thomas: float
    f_max_numeric: Optional[float] = None


def fidelity_bounds(num_qubits, k, psi=None):
    d = k / 2.0**num_qubits
    return FidelityBounds(
        d=d,
        f_min=f_min(num_qubits),
        f_max_porter_thomas=porter_thomas_fmax(d),
        f_max_numeric=None if psi is None else numeric_fmax(psi, k),
    )


@dataclass(frozen=True)
class GapSummary:
    """Statistics of ``f - gamma_sq`` over an ensemble of runs."""

    n: int
    mean_gap: float
    std_error: float
    fraction_above: float
    mean_fidelity: float
    mean_gamma_sq: float

    def lower_bound(self, confidence=0.95):
        """One-sided Student-t lower confidence bound on the mean gap."""
        return self.mean_gap - stats.t.ppf(confidence, self.n - 1) * self.std_error

    def upper_bound(self, confidence=0.95):
        return self.mean_gap + stats.t.ppf(confidence, self.n - 1) * self.std_error


def gamma_fidelity_gap(runs):
    """Summarize ``(fidelity, gamma_sq)`` pairs; needs at least two runs."""
    arr = np.asarray(list(runs), dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 2 or arr.shape[1] != 2:
        raise InsufficientData("need at least two (fidelity, gamma_sq) pairs")
    f, g = arr[:, 0], arr[:, 1]
    gap = f - g
    return GapSummary(
        n=arr.shape[0],
        mean_gap=float(gap.mean()),
        std_error=float(gap.std(ddof=1) / math.sqrt(arr.shape[0])),
        fraction_above=float(np.mean(gap >= 0.0)),
        mean_fidelity=float(f.mean()),
        mean_gamma_sq=float(g.mean()),
    )


def mean_and_stderr(values):
    v = np.asarray(values, dtype=np.float64)
    if v.size < 2:
        return float(v.mean()) if v.size else math.nan, math.nan
    return float(v.mean()), float(v.std(ddof=1) / math.sqrt(v.size))
