"""
Watching one agent learn
========================

Run a single 400-cell trial and print the per-step trace for a few early
and late episodes: salient channels, candidate counts by class
(P = positive, N = negative, U = untested), the attention chosen, the
prediction and the outcome.
"""

# %%
from seqrule.harness import format_trace_event, run_trial

lines = []
outcomes = run_trial(400, 120, seed=(42, 400, 0), trace=lambda ev: lines.append(format_trace_event(400, 0, ev)))

# %%
# Early on nothing is recalled and the answer is never predicted (Zero).
print("\n".join(lines[:15]))

# %%
# Late in the trial, positive hypotheses steer attention to the cued
# attribute and predict the answer.
print("\n".join(lines[-15:]))

# %%
from collections import Counter

print(Counter(o.result.value for o in outcomes[:40]))
print(Counter(o.result.value for o in outcomes[-40:]))
