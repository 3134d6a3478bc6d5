"""Rates, error probabilities and resource scaling across the three scenarios.

Without signalling the channel is a fair coin and nothing gets through; with
classical conferencing everything gets through at quadratic message cost;
with validated entanglement the classical cost drops to linear.
"""

from paritycast import ExperimentConfig, converse_demo, run_experiment, scaling_report

print("=== end-to-end runs (N=4, n=32, 200 trials) ===")
print(f"  {'scenario':26s} {'P_err':>8s} {'aborts':>7s} {'rate':>6s} "
      f"{'p2p':>6s} {'bcast':>6s} {'keys':>6s} {'ghz':>7s}")
for scenario in ("entanglement-only", "classical-only-I", "classical-only-II",
                 "entanglement+classical"):
    config = ExperimentConfig(scenario=scenario, N=4, n=32, m=1, trials=200, seed=11)
    result = run_experiment(config)
    rep, t = result.report, result.ledger.totals
    print(f"  {scenario:26s} {rep.p_err:8.4f} {rep.aborts:7d} {rep.rates[0]:6.2f} "
          f"{t.p2p_messages:6d} {t.broadcasts:6d} {t.key_messages:6d} {t.ghz_copies:7d}")

print("\n=== scaling in the receiver count (N = 4, 8, 16, 32) ===")
for scenario in ("classical-only-II", "entanglement+classical"):
    report = scaling_report(scenario, [4, 8, 16, 32], m=1)
    print(f"  {scenario}: classical messages slope {report.classical_slope:.2f} "
          f"(R^2 {report.classical_r2:.4f}) -> {report.classical_class}")
    if report.ghz_slope is not None:
        print(f"    entangled copies slope {report.ghz_slope:.2f} -> {report.ghz_class}")

print("\n=== the converse picture for a lone receiver ===")
for N in (3, 5, 8):
    rep = converse_demo(N, samples=100_000, seed=13)
    print(f"  N={N}: I(input; output) = {rep.mi_bits:.2e} bits, "
          f"max |corr(x_i, x_j)| = {rep.max_abs_correlation:.4f} "
          f"(3-sigma bound {rep.correlation_bound:.4f})")
print("  the effective channel is a fair coin flip: zero capacity without signalling")
