"""
One-shot sequence memory
========================

Store a few four-step sequences in a small cell store, recall them from
their first token, and watch least-active recycling make room for new ones.
"""

# %%
# Each step is a StepRecord: the attended token plus the attention action
# that produced it. ``rec("A1", 0)`` is "attended attribute 1, saw value 0".
from seqrule.memory import MemoryStore
from seqrule.tokens import rec, tok


def store(mem, records):
    prev, cells = None, []
    for r in records:
        cell = mem.allocate_state(protect=cells)
        mem.bind_step(prev, cell, r)
        mem.decay_tick()
        prev = cell
        cells.append(cell)
    return cells


mem = MemoryStore(12, decay=0.9)
a = store(mem, [rec("CUE", 0), rec("A1", 1), rec("A1", 1), rec("ANS", 0)])
b = store(mem, [rec("CUE", 0), rec("A1", 1), rec("A1", 0), rec("ANS", 1)])
print(mem.dump())

# %%
# Both sequences share their first two records. The attribute transition
# (A1,1) -> next is one-to-many, but the latent cells keep them apart.
for head in mem.seed_states(tok("CUE", 0)):
    print(head, [str(mem.record(c)) for c in mem.chain(head)])

# %%
# Reverse replay walks from the last cell back to the first and adds a value
# to each cell on the way.
print("replayed:", mem.reverse_replay_assign(a[-1], +1.0))
print("values:", mem.value[a], mem.value[b])

# %%
# Storing a third and fourth sequence overflows the 12 cells. The least
# active cells (those of the oldest, never-reused sequence) are recycled.
store(mem, [rec("CUE", 1), rec("A2", 0), rec("A2", 0), rec("ANS", 0)])
store(mem, [rec("CUE", 1), rec("A2", 1), rec("A2", 0), rec("ANS", 1)])
print(mem.dump())
