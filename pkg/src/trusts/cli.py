"""Command-line entry point: ``trusts {run,sweep-fidelity,sweep-runtime,verify}``.

Exit codes: 0 success, 1 usage or configuration error, 2 verification
failure, 3 resource limit (dense limit, memory), 4 simulation failure
(the truncated state collapsed to zero).
"""

import argparse
import json
import logging
import sys

from . import bench
from .circuits import (
    random_layered_circuit,
    random_sequential_circuit,
    read_circuit,
    run_dense,
    run_sparse,
    write_circuit,
)
from .analysis import fidelity
from .errors import DenseLimitExceeded, InvalidArgument, TrustsError, ZeroStateError
from .sparse_state import check_dense_allowed, write_snapshot
from .truncation import TruncationPolicy

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_RESOURCE = 3
EXIT_RUNTIME = 4

log = logging.getLogger("trusts")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text):
    """'8,10,12' or '14:30:2' (inclusive range) -> list of ints."""
    if ":" in text:
        parts = [int(p) for p in text.split(":")]
        start, stop = parts[0], parts[1]
        step = parts[2] if len(parts) > 2 else 1
        return list(range(start, stop + 1, step))
    return [int(p) for p in text.split(",") if p]


def _k_list(text):
    """Like _int_list, but entries of the form '2^e' or a range 'e1..e2' of powers of two."""
    if ".." in text:
        lo, hi = text.split("..")
        return [2**e for e in range(int(lo), int(hi) + 1)]
    out = []
    for p in text.split(","):
        p = p.strip()
        if p.startswith("2^"):
            out.append(2 ** int(p[2:]))
        elif p:
            out.append(int(p))
    return out


def _float_list(text):
    out = []
    for p in text.split(","):
        p = p.strip()
        if p.startswith("2^"):
            out.append(2.0 ** float(p[2:]))
        elif p:
            out.append(float(p))
    return out


def build_parser():
    parser = _Parser(prog="trusts", description="Truncated sparse-tensor circuit simulation.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="simulate one circuit")
    run.add_argument("--qubits", type=int)
    depth = run.add_mutually_exclusive_group()
    depth.add_argument("--layers", type=int)
    depth.add_argument("--gates", type=int)
    run.add_argument("--k", type=int, required=True)
    run.add_argument("--truncation", choices=["topk", "randomk", "none"], default="topk")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--arch", choices=["layered", "sequential"])
    run.add_argument("--initial", type=int, default=0, help="initial basis index")
    run.add_argument("--circuit-file", help="load the circuit instead of generating one")
    run.add_argument("--save-circuit", help="write the simulated circuit to this file")
    run.add_argument("--dump-state", help="write the final state snapshot to this file")
    run.add_argument("--fidelity", action="store_true", help="compare against the dense oracle")
    run.add_argument("--trace", action="store_true", help="include per-gate traces")
    run.add_argument("--out", help="write the report here instead of stdout")

    for name, helptext in (("sweep-fidelity", "fidelity vs truncation sweep (CSV)"),
                           ("sweep-runtime", "runtime per gate sweep (CSV)")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--config", help="JSON file with SweepConfig fields")
        sp.add_argument("--qubits", type=_int_list)
        kd = sp.add_mutually_exclusive_group()
        kd.add_argument("--k", dest="k_values", type=_k_list)
        kd.add_argument("--d", dest="d_values", type=_float_list)
        sp.add_argument("--layers", type=_int_list)
        sp.add_argument("--circuits", dest="circuits_per_point", type=int)
        sp.add_argument("--truncation", dest="policies", type=lambda s: s.split(","))
        sp.add_argument("--seed", type=int)
        sp.add_argument("--jobs", type=int)
        sp.add_argument("--out", dest="output", required=False)
        sp.add_argument("--summary", help="also write per-point aggregates to this CSV")
        if name == "sweep-runtime":
            sp.add_argument("--repeats", type=int)
            sp.add_argument("--exact", action="store_true", default=None,
                            help="add k = 2^N untruncated rows")

    ver = sub.add_parser("verify", help="untruncated sparse run vs dense oracle")
    ver.add_argument("--qubits", type=int)
    vd = ver.add_mutually_exclusive_group()
    vd.add_argument("--layers", type=int)
    vd.add_argument("--gates", type=int)
    ver.add_argument("--circuits", type=int, default=20)
    ver.add_argument("--arch", choices=["layered", "sequential"])
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--tol", type=float, default=bench.VERIFY_TOL)
    ver.add_argument("--circuit-file", help="verify this circuit instead of random ones")
    return parser


def _emit(payload, path=None):
    text = json.dumps(payload, indent=2)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load_or_generate(args):
    if args.circuit_file:
        return read_circuit(args.circuit_file)
    if args.qubits is None:
        raise InvalidArgument("--qubits is required unless --circuit-file is given")
    arch = args.arch or ("sequential" if args.gates is not None else "layered")
    if arch == "layered":
        if args.gates is not None:
            raise InvalidArgument("--gates applies to the sequential architecture")
        return random_layered_circuit(args.qubits, args.layers or 1, seed=args.seed)
    if args.layers is not None:
        raise InvalidArgument("--layers applies to the layered architecture")
    if args.gates is None:
        raise InvalidArgument("the sequential architecture needs --gates")
    return random_sequential_circuit(args.qubits, args.gates, seed=args.seed)


def cmd_run(args):
    circuit = _load_or_generate(args)
    if args.save_circuit:
        write_circuit(circuit, args.save_circuit)
    policy = TruncationPolicy.parse(args.truncation, args.seed)
    state, report = run_sparse(circuit, args.k, policy, initial=args.initial,
                               record_trace=args.trace)
    if args.fidelity:
        check_dense_allowed(circuit.num_qubits)
        report.fidelity = fidelity(state, run_dense(circuit, initial=args.initial))
    if args.dump_state:
        write_snapshot(state, args.dump_state)
    payload = {
        "num_qubits": circuit.num_qubits,
        "layers": circuit.num_layers,
        "k": args.k,
        "truncation": args.truncation,
        "seed": circuit.seed,
        "n_nz": state.n_nz,
        **report.to_dict(),
    }
    _emit(payload, args.out)
    return EXIT_OK


def _sweep_config(args):
    data = bench.SweepConfig.from_file(args.config).to_dict() if args.config else {}
    for key in ("qubits", "k_values", "d_values", "layers", "circuits_per_point", "policies",
                "seed", "jobs", "output", "repeats", "exact"):
        value = getattr(args, key, None)
        if value is not None:
            data[key] = value
    if args.k_values is not None:
        data["d_values"] = None
    if args.d_values is not None:
        data["k_values"] = None
    return bench.SweepConfig.from_dict(data)


def _write_rows(rows, cfg, columns):
    if cfg.output:
        bench.write_csv(rows, cfg.output, columns)
    else:
        bench.write_csv(rows, sys.stdout, columns)


def cmd_sweep_fidelity(args):
    cfg = _sweep_config(args)
    rows = bench.sweep_fidelity(cfg)
    _write_rows(rows, cfg, bench.FIDELITY_COLUMNS)
    if args.summary:
        bench.write_csv(bench.summarize_fidelity(rows), args.summary,
                        bench.FIDELITY_SUMMARY_COLUMNS)
    return EXIT_OK


def cmd_sweep_runtime(args):
    cfg = _sweep_config(args)
    rows = bench.sweep_runtime(cfg)
    _write_rows(rows, cfg, bench.RUNTIME_COLUMNS)
    if args.summary:
        summary = bench.summarize_runtime(rows)
        bench.write_csv(summary, args.summary, tuple(summary[0]) if summary else ())
    return EXIT_OK


def cmd_verify(args):
    if args.circuit_file:
        result = bench.verify_circuit(read_circuit(args.circuit_file), tol=args.tol)
    else:
        if args.qubits is None:
            raise InvalidArgument("--qubits is required unless --circuit-file is given")
        arch = args.arch or ("sequential" if args.gates is not None else "layered")
        result = bench.verify(args.qubits, circuits=args.circuits, layers=args.layers or 5,
                              gates=args.gates, arch=arch, seed=args.seed, tol=args.tol)
    _emit(result.to_dict())
    return EXIT_OK if result.passed else EXIT_VERIFY


COMMANDS = {
    "run": cmd_run,
    "sweep-fidelity": cmd_sweep_fidelity,
    "sweep-runtime": cmd_sweep_runtime,
    "verify": cmd_verify,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (DenseLimitExceeded, MemoryError) as exc:
        log.error("%s", exc or "out of memory")
        return EXIT_RESOURCE
    except ZeroStateError as exc:
        log.error("%s", exc)
        return EXIT_RUNTIME
    except (TrustsError, ValueError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
