"""
The delayed match-to-sample environment
=======================================

Sixteen configurations (cued attribute x dummy value x sample x target),
shuffled into blocks so every configuration appears once per 16 episodes.
"""

# %%
import numpy as np

from seqrule import env

for cfg in env.all_configs()[:4]:
    print(cfg)
    for phase in range(4):
        print("   phase", phase, env.observe(cfg, phase))

# %%
# The answer slice is [1, 0] when sample and target agree on the cued
# attribute, [0, 1] otherwise. The dummy attribute never changes within an
# episode, so attending it tells nothing about the answer.
print(env.enumerate_space())

# %%
rng = np.random.default_rng(0)
block = env.new_block(rng)
print(len(block), len(set(block)))
print("\n".join(env.trace_lines(0, 1, block[0])))
