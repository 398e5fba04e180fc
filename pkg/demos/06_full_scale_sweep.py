"""N = 24, L = 5 fidelity sweep with the dense oracle.

Needs about 8 GiB of free memory and several hours on one core.  Pass
--circuits to trade statistics for time.
"""

import argparse
import sys

from trusts.bench import FIDELITY_COLUMNS, FIDELITY_SUMMARY_COLUMNS, SweepConfig, summarize_fidelity, sweep_fidelity, write_csv

parser = argparse.ArgumentParser()
parser.add_argument("--circuits", type=int, default=10)
parser.add_argument("--out", default="fidelity_n24.csv")
parser.add_argument("--summary", default="fidelity_n24_summary.csv")
args = parser.parse_args()

cfg = SweepConfig(qubits=[24], d_values=[2.0**-e for e in range(1, 11)], layers=[5],
                  circuits_per_point=args.circuits, policies=["topk", "randomk"])
rows = sweep_fidelity(cfg)
write_csv(rows, args.out, FIDELITY_COLUMNS)
write_csv(summarize_fidelity(rows), args.summary, FIDELITY_SUMMARY_COLUMNS)
print(f"wrote {len(rows)} rows to {args.out}", file=sys.stderr)
