"""
Learning curves across store sizes
==================================

The full sweep: 100..500 cells, 10 trials of 200 episodes each. Prints the
40-episode block rates next to the published ones and writes the CSV and
SVG outputs to ``demo_output/``. Takes about 15 seconds.
"""

# %%
from pathlib import Path

from seqrule.harness import REFERENCE_RATES, ExperimentConfig, block_rates, emit, run_experiment, table

config = ExperimentConfig(out_dir=Path("demo_output"))
log = run_experiment(config)
rates = block_rates(log)
print(table(rates))

# %%
# Side by side with the published table (+ / - / 0).
for r in rates:
    ref = REFERENCE_RATES.get(r.cells, {}).get(r.block_end)
    if ref:
        print(f"{r.cells:>4} {r.block_end:>4}  ours {r.pos:.2f} {r.neg:.2f} {r.zero:.2f}"
              f"   published {ref[0]:.2f} {ref[1]:.2f} {ref[2]:.2f}")

# %%
for p in emit(log, rates, config):
    print("wrote", p)

# %%
# The spec's literal rules for comparison: per-cell refresh on every match and
# accumulated +/- values. Chains lose their tails, fragments pile up and
# the agent stops predicting.
literal = ExperimentConfig(refresh="matched", learning="accumulate")
print(table(block_rates(run_experiment(literal))))
