"""One-shot sequence memory over one-hot latent state cells.

Each cell stands for one step of a stored sequence. A cell carries an
activity (decays every tick, reset to 1.0 on use) and a signed
reinforcement value. Three associations link the cells:

* ``succ``/``pred``: the state-to-state transition relation, at most one
  successor and one predecessor per cell;
* ``token_index``: attribute token -> cells bound to it;
* ``records``: cell -> the StepRecord it stands for.

New states go to the least active cell (argmin, lowest index on ties) and
the recycled cell is scrubbed of every previous binding.
"""

from __future__ import annotations

from typing import Iterable, Literal, Optional

import numpy as np

from .tokens import AttributeToken, ContractViolation, StepRecord

NONE = -1
FIRING_ACTIVITY = 1.0


class CorruptStoreError(RuntimeError):
    """The transition relation contains a cycle."""


class MemoryStore:
    def __init__(self, n_cells: int, decay: float = 0.9):
        if n_cells < 1:
            raise ValueError("n_cells must be >= 1")
        if not 0.0 < decay < 1.0:
            raise ValueError("decay must lie in (0, 1)")
        self.n_cells = n_cells
        self.decay = decay
        self.activity = np.zeros(n_cells)
        self.value = np.zeros(n_cells)
        self.succ = np.full(n_cells, NONE, dtype=np.int64)
        self.pred = np.full(n_cells, NONE, dtype=np.int64)
        self.records: list[Optional[StepRecord]] = [None] * n_cells
        self.token_index: dict[AttributeToken, set[int]] = {}

    # -- allocation -------------------------------------------------------
    def allocate_state(self, protect: Iterable[int] = ()) -> int:
        """Recycle the least active cell and return it with activity 1.0.

        ``protect`` lists cells that must not be chosen (the agent passes
        the cells of the episode it is currently writing).
        """
        act = self.activity
        protect = list(protect)
        if protect:
            act = act.copy()
            act[protect] = np.inf
            if np.isinf(act).all():
                raise ContractViolation("every cell is protected; store too small")
        cell = int(np.argmin(act))
        self._scrub(cell)
        self.activity[cell] = FIRING_ACTIVITY
        return cell

    def _scrub(self, cell: int) -> None:
        rec = self.records[cell]
        if rec is not None:
            cells = self.token_index[rec.token]
            cells.discard(cell)
            if not cells:
                del self.token_index[rec.token]
            self.records[cell] = None
        nxt, prv = self.succ[cell], self.pred[cell]
        if nxt != NONE:
            self.pred[nxt] = NONE
        if prv != NONE:
            self.succ[prv] = NONE
        self.succ[cell] = self.pred[cell] = NONE
        self.value[cell] = 0.0

    def bind_step(self, prev: Optional[int], cell: int, rec: StepRecord) -> None:
        if self.records[cell] is not None:
            raise ContractViolation(f"cell {cell} already holds {self.records[cell]}")
        if prev is not None:
            if self.records[prev] is None:
                raise ContractViolation(f"predecessor cell {prev} is unbound")
            if self.succ[prev] != NONE:
                raise ContractViolation(f"cell {prev} already has successor {self.succ[prev]}")
            if prev == cell:
                raise ContractViolation("a cell cannot succeed itself")
        self.records[cell] = rec
        self.token_index.setdefault(rec.token, set()).add(cell)
        if prev is not None:
            self.succ[prev] = cell
            self.pred[cell] = prev

    # -- activity ---------------------------------------------------------
    def decay_tick(self) -> None:
        self.activity *= self.decay

    def refresh(self, cell: int) -> None:
        if self.records[cell] is None:
            raise ContractViolation(f"cannot refresh unbound cell {cell}")
        self.activity[cell] = FIRING_ACTIVITY

    # -- recall -----------------------------------------------------------
    def record(self, cell: int) -> Optional[StepRecord]:
        return self.records[cell]

    def seed_states(self, token: AttributeToken) -> list[int]:
        """Sequence-initial cells bound to ``token``, in ascending order."""
        cells = self.token_index.get(token, ())
        return sorted(c for c in cells if self.pred[c] == NONE)

    def neighbor(self, cell: int, direction: Literal["forward", "backward"]) -> Optional[int]:
        if self.records[cell] is None:
            raise ContractViolation(f"cell {cell} is unbound")
        if direction == "forward":
            nxt = self.succ[cell]
        elif direction == "backward":
            nxt = self.pred[cell]
        else:
            raise ValueError(f"unknown direction {direction!r}")
        return None if nxt == NONE else int(nxt)

    def chain(self, cell: int) -> list[int]:
        """All cells of the sequence containing ``cell``, first to last."""
        head = self._walk(cell, self.pred)[-1]
        return self._walk(head, self.succ)

    def _walk(self, cell: int, links: np.ndarray) -> list[int]:
        seen = [cell]
        visited = {cell}
        nxt = links[cell]
        while nxt != NONE:
            nxt = int(nxt)
            if nxt in visited:
                raise CorruptStoreError(f"cycle through cell {nxt}")
            visited.add(nxt)
            seen.append(nxt)
            nxt = links[nxt]
        return seen

    def reverse_replay_assign(self, last: int, delta: float) -> list[int]:
        """Walk back from ``last`` to the sequence start, adding ``delta`` to each cell's value.

        Returns the visited cells in visit (reverse sequence) order.
        """
        if self.records[last] is None:
            raise ContractViolation(f"cell {last} is unbound")
        visited = self._walk(last, self.pred)
        self.value[visited] += delta
        return visited

    def bound_cells(self) -> list[int]:
        return [c for c, r in enumerate(self.records) if r is not None]

    def sequences(self) -> list[list[int]]:
        """Every stored chain, ordered by the index of its initial cell."""
        heads = [c for c in self.bound_cells() if self.pred[c] == NONE]
        return [self._walk(h, self.succ) for h in heads]

    def dump(self) -> str:
        lines = [f"# cells={self.n_cells} decay={self.decay} bound={len(self.bound_cells())}"]
        for c in self.bound_cells():
            lines.append(
                f"cell {c} act={self.activity[c]:.4f} value={self.value[c]:+g} "
                f"rec={self.records[c]} pred={self.pred[c]} succ={self.succ[c]}"
            )
        for chain in self.sequences():
            lines.append("chain " + " -> ".join(str(c) for c in chain))
        return "\n".join(lines) + "\n"
