"""Time per gate grows linearly in k and stays flat in N once the state is full."""

from trusts.bench import SweepConfig, linear_fit_r2, summarize_runtime, sweep_runtime

cfg = SweepConfig(qubits=[20], k_values=[2**e for e in range(8, 17)], layers=[5],
                  circuits_per_point=3, repeats=3)
rows = summarize_runtime(sweep_runtime(cfg))
for r in rows:
    print(f"k={r['k']:>6}  {r['mean_per_gate_time'] * 1e3:8.3f} ms/gate")
slope, _, r2 = linear_fit_r2([r["k"] for r in rows], [r["mean_per_gate_time"] for r in rows])
print(f"slope {slope * 1e9:.2f} ns per term, R^2 = {r2:.4f}")

cfg = SweepConfig(qubits=list(range(14, 31, 4)), k_values=[2**12], layers=[10],
                  circuits_per_point=3, repeats=3, exact=False)
for r in summarize_runtime(sweep_runtime(cfg)):
    print(f"N={r['N']:>2}  {r['mean_per_gate_time'] * 1e3:8.3f} ms/gate")
