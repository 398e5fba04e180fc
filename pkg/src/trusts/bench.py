"""Fidelity and runtime sweeps, and the sparse-vs-dense verification run.

Seed scheme
-----------
The circuit for sweep point ``(N, L)`` and circuit index ``i`` uses seed
``derive_seed(master, N, L, i)``, i.e. the first 63 bits drawn from
``SeedSequence(master, spawn_key=(N, L, i))``. The seed does not depend on
``k`` or the policy, so every ``k`` and policy at a point sees the same
ensemble of circuits. Random-k truncation at that circuit and ``k`` uses
``derive_seed(master, N, L, i, k, 1)``. Any row can be re-run on its own from
these counters.
"""

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import List, Optional

import numpy as np

from . import analysis
from .circuits import random_layered_circuit, random_sequential_circuit, run_dense, run_sparse
from .errors import InvalidArgument
from .sparse_state import check_dense_allowed, to_dense
from .truncation import TruncationPolicy

VERIFY_TOL = 1e-10

FIDELITY_COLUMNS = (
    "N", "L", "k", "d", "policy", "circuit_seed",
    "gamma_sq", "fidelity", "f_min", "f_max_numeric", "f_max_pt",
)
FIDELITY_SUMMARY_COLUMNS = (
    "N", "L", "k", "d", "policy", "circuits",
    "mean_fidelity", "se_fidelity", "mean_gamma_sq", "se_gamma_sq",
    "mean_gap", "se_gap", "fraction_f_above_gamma_sq",
    "f_min", "mean_f_max_numeric", "f_max_pt",
)
RUNTIME_COLUMNS = ("N", "L", "k", "policy", "circuit_seed", "wall_time", "M", "per_gate_time")


def derive_seed(master, *counters):
    ss = np.random.SeedSequence(master, spawn_key=tuple(int(c) for c in counters))
    return int(ss.generate_state(1, np.uint64)[0] >> np.uint64(1))


@dataclass
class SweepConfig:
    """Parameters for a fidelity or runtime sweep.

    Exactly one of ``k_values`` and ``d_values`` is normally given; a
    fraction ``d`` maps to ``k = round(d * 2^N)`` (at least 1).
    """

    qubits: List[int] = field(default_factory=lambda: [12])
    k_values: Optional[List[int]] = None
    d_values: Optional[List[float]] = None
    layers: List[int] = field(default_factory=lambda: [5])
    circuits_per_point: int = 10
    policies: List[str] = field(default_factory=lambda: ["topk"])
    seed: int = 0
    output: Optional[str] = None
    oracle: bool = True
    exact: bool = False
    repeats: int = 1
    jobs: int = 1

    def __post_init__(self):
        self.qubits = [int(n) for n in _as_list(self.qubits)]
        self.layers = [int(x) for x in _as_list(self.layers)]
        self.policies = [str(p) for p in _as_list(self.policies)]
        if self.k_values is not None:
            self.k_values = [int(k) for k in _as_list(self.k_values)]
        if self.d_values is not None:
            self.d_values = [float(d) for d in _as_list(self.d_values)]
        for p in self.policies:
            TruncationPolicy.parse(p)
        if not self.qubits or min(self.qubits) < 2:
            raise InvalidArgument("qubit values must be >= 2")
        if self.circuits_per_point < 1 or self.repeats < 1 or self.jobs < 1:
            raise InvalidArgument("circuits_per_point, repeats and jobs must be >= 1")

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidArgument(f"unknown config keys: {', '.join(sorted(unknown))}")
        return cls(**data)

    @classmethod
    def from_file(cls, path):
        with open(path) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InvalidArgument(f"config {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    def to_dict(self):
        return asdict(self)

    def k_list(self, num_qubits):
        """Capacities for one qubit count, deduplicated, in config order."""
        if self.k_values is not None:
            ks = list(self.k_values)
        elif self.d_values is not None:
            for d in self.d_values:
                if not 0.0 < d <= 1.0:
                    raise InvalidArgument(f"truncation fraction {d} outside (0, 1]")
            ks = [max(1, round(d * 2**num_qubits)) for d in self.d_values]
        else:
            ks = [2**num_qubits]
        out = []
        for k in ks:
            if not 1 <= k <= 2**num_qubits:
                raise InvalidArgument(f"k={k} outside 1..2^{num_qubits}")
            if k not in out:
                out.append(k)
        return out


def _as_list(x):
    return list(x) if isinstance(x, (list, tuple)) else [x]


def _policy_for(name, k, num_qubits, seed):
    policy = TruncationPolicy.parse(name, seed)
    if k == 2**num_qubits and policy.kind.value != "randomk":
        return TruncationPolicy.none()
    return policy


def _map(fn, tasks, jobs):
    if jobs <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


# -- fidelity sweep --------------------------------------------------------


def _fidelity_task(task):
    cfg, n, layers, i = task
    seed = derive_seed(cfg.seed, n, layers, i)
    circuit = random_layered_circuit(n, layers, seed=seed)
    psi = run_dense(circuit)
    rows = []
    for k in cfg.k_list(n):
        fmax = analysis.numeric_fmax(psi, k)
        d = k / 2**n
        for name in cfg.policies:
            policy = _policy_for(name, k, n, derive_seed(cfg.seed, n, layers, i, k, 1))
            state, report = run_sparse(circuit, k, policy)
            rows.append({
                "N": n, "L": layers, "k": k, "d": d, "policy": name,
                "circuit_seed": seed,
                "gamma_sq": report.gamma_sq,
                "fidelity": analysis.fidelity(state, psi),
                "f_min": analysis.f_min(n),
                "f_max_numeric": fmax,
                "f_max_pt": analysis.porter_thomas_fmax(d),
            })
    return rows


def sweep_fidelity(cfg):
    """One row per (N, L, circuit, k, policy), in config order."""
    if not cfg.oracle:
        raise InvalidArgument("the fidelity sweep needs the dense oracle")
    for n in cfg.qubits:
        check_dense_allowed(n)
    tasks = [
        (cfg, n, layers, i)
        for n in cfg.qubits
        for layers in cfg.layers
        for i in range(cfg.circuits_per_point)
    ]
    per_circuit = _map(_fidelity_task, tasks, cfg.jobs)
    # Reorder to (N, L, k, policy, circuit).
    rows = []
    for n in cfg.qubits:
        for layers in cfg.layers:
            block = [r for t, rs in zip(tasks, per_circuit) if t[1] == n and t[2] == layers for r in rs]
            for k in cfg.k_list(n):
                for name in cfg.policies:
                    rows.extend(r for r in block if r["k"] == k and r["policy"] == name)
    return rows


def summarize_fidelity(rows):
    """Per-point means and standard errors of a fidelity sweep."""
    points = {}
    for r in rows:
        points.setdefault((r["N"], r["L"], r["k"], r["policy"]), []).append(r)
    out = []
    for (n, layers, k, name), rs in points.items():
        f = [r["fidelity"] for r in rs]
        g = [r["gamma_sq"] for r in rs]
        mf, sf = analysis.mean_and_stderr(f)
        mg, sg = analysis.mean_and_stderr(g)
        gap, sgap = analysis.mean_and_stderr(np.subtract(f, g))
        out.append({
            "N": n, "L": layers, "k": k, "d": rs[0]["d"], "policy": name,
            "circuits": len(rs),
            "mean_fidelity": mf, "se_fidelity": sf,
            "mean_gamma_sq": mg, "se_gamma_sq": sg,
            "mean_gap": gap, "se_gap": sgap,
            "fraction_f_above_gamma_sq": float(np.mean(np.asarray(f) >= np.asarray(g))),
            "f_min": rs[0]["f_min"],
            "mean_f_max_numeric": float(np.mean([r["f_max_numeric"] for r in rs])),
            "f_max_pt": rs[0]["f_max_pt"],
        })
    return out


# -- runtime sweep ---------------------------------------------------------


def _runtime_task(task):
    cfg, n, layers, k, name, i = task
    seed = derive_seed(cfg.seed, n, layers, i)
    circuit = random_layered_circuit(n, layers, seed=seed)
    best = None
    for _ in range(cfg.repeats):
        policy = _policy_for(name, k, n, derive_seed(cfg.seed, n, layers, i, k, 1))
        _, report = run_sparse(circuit, k, policy)
        if best is None or report.wall_time < best.wall_time:
            best = report
    return {
        "N": n, "L": layers, "k": k, "policy": name, "circuit_seed": seed,
        "wall_time": best.wall_time, "M": best.gate_count, "per_gate_time": best.per_gate_time,
    }


def runtime_tasks(cfg):
    tasks = []
    for n in cfg.qubits:
        ks = [k for k in cfg.k_list(n)]
        names = list(cfg.policies)
        for layers in cfg.layers:
            for k in ks:
                for name in names:
                    tasks.extend((cfg, n, layers, k, name, i) for i in range(cfg.circuits_per_point))
            if cfg.exact:
                tasks.extend(
                    (cfg, n, layers, 2**n, "none", i) for i in range(cfg.circuits_per_point)
                )
    return tasks


def sweep_runtime(cfg):
    """Wall-clock rows; with ``repeats > 1`` each row keeps the fastest repeat."""
    # A tiny run compiles the kernels before anything is timed.
    run_sparse(random_layered_circuit(2, 1, seed=0), 1)
    return _map(_runtime_task, runtime_tasks(cfg), cfg.jobs)


def summarize_runtime(rows):
    points = {}
    for r in rows:
        points.setdefault((r["N"], r["L"], r["k"], r["policy"]), []).append(r["per_gate_time"])
    out = []
    for (n, layers, k, name), ts in points.items():
        mean, se = analysis.mean_and_stderr(ts)
        out.append({"N": n, "L": layers, "k": k, "policy": name, "circuits": len(ts),
                    "mean_per_gate_time": mean, "se_per_gate_time": se})
    return out


def linear_fit_r2(x, y):
    """Slope, intercept and R^2 of an ordinary least-squares line."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


# -- verification ----------------------------------------------------------


@dataclass
class VerifyResult:
    circuits: int
    max_amplitude_error: float
    max_fidelity_deviation: float
    tolerance: float

    @property
    def passed(self):
        return (
            self.max_amplitude_error <= self.tolerance
            and self.max_fidelity_deviation <= self.tolerance
        )

    def to_dict(self):
        out = asdict(self)
        out["passed"] = self.passed
        return out


def verify(num_qubits, circuits=20, layers=5, gates=None, arch="layered", seed=0,
           tol=VERIFY_TOL):
    """Compare the untruncated sparse simulator with the dense oracle.

    ``arch='sequential'`` draws ``gates`` random-pair gates per circuit instead
    of ``layers`` layers.
    """
    if arch not in ("layered", "sequential"):
        raise InvalidArgument(f"unknown architecture {arch!r}")
    if arch == "sequential" and gates is None:
        raise InvalidArgument("sequential verification needs a gate count")
    check_dense_allowed(num_qubits)
    k = 2**num_qubits
    max_amp = 0.0
    max_fid = 0.0
    for i in range(circuits):
        s = derive_seed(seed, num_qubits, layers if arch == "layered" else gates, i)
        if arch == "layered":
            circuit = random_layered_circuit(num_qubits, layers, seed=s)
        else:
            circuit = random_sequential_circuit(num_qubits, gates, seed=s)
        max_amp, max_fid = _verify_one(circuit, k, max_amp, max_fid)
    return VerifyResult(circuits, max_amp, max_fid, tol)


def verify_circuit(circuit, tol=VERIFY_TOL):
    amp, fid = _verify_one(circuit, 2**circuit.num_qubits, 0.0, 0.0)
    return VerifyResult(1, amp, fid, tol)


def _verify_one(circuit, k, max_amp, max_fid):
    psi = run_dense(circuit)
    state, _ = run_sparse(circuit, k, TruncationPolicy.none())
    max_amp = max(max_amp, float(np.max(np.abs(to_dense(state) - psi))))
    max_fid = max(max_fid, abs(analysis.fidelity(state, psi) - 1.0))
    return max_amp, max_fid


# -- CSV -------------------------------------------------------------------


def _fmt(value):
    if isinstance(value, float):
        return "nan" if math.isnan(value) else format(value, ".17g")
    return str(value)


def write_csv(rows, path_or_file, columns):
    """Header plus rows in fixed column order; floats at 17 significant digits."""
    own = isinstance(path_or_file, str)
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for r in rows:
            writer.writerow([_fmt(r[c]) for c in columns])
    finally:
        if own:
            fh.close()
