"""Perception / attention / memory loop of the rule-discovery agent.

At each step the agent attends one salient channel, stores the attended
token with its attention action as the next state of the episode's
sequence, and advances the recalled candidate sequences. Before the answer
is shown it predicts it from the positive candidates; once the answer is
known every candidate that predicted it is reinforced by reverse replay.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Optional, Sequence

import numpy as np

from . import hypothesis as hyp
from .env import MalformedObservation, Observation
from .memory import MemoryStore
from .tokens import ActionToken, AttributeToken, Channel, ContractViolation, StepRecord

EPISODE_LENGTH = 4
REFRESH_POLICIES = ("scored", "matched")
LEARNING_RULES = ("refute", "accumulate")


class Outcome(Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    ZERO = "Zero"


@dataclass(frozen=True)
class EpisodeOutcome:
    result: Outcome
    predicted: Optional[AttributeToken]
    actual: AttributeToken

    @classmethod
    def score(cls, predicted: Optional[AttributeToken], actual: AttributeToken) -> "EpisodeOutcome":
        if predicted is None:
            result = Outcome.ZERO
        elif predicted == actual:
            result = Outcome.POSITIVE
        else:
            result = Outcome.NEGATIVE
        return cls(result, predicted, actual)


def salient_channels(obs: Observation) -> list[Channel]:
    return [ch for ch in Channel if any(obs.slice(ch))]


def multinomial(tally: Counter, rng: np.random.Generator):
    """Draw one key with probability proportional to its count.

    Keys are visited in sorted order so a seeded stream gives the same draw
    regardless of insertion order. A single-key tally consumes no randomness.
    """
    keys = sorted(tally)
    if len(keys) == 1:
        return keys[0]
    counts = np.array([tally[k] for k in keys], dtype=float)
    return keys[int(rng.choice(len(keys), p=counts / counts.sum()))]


def select_attention(
    salient: Sequence[Channel],
    cands: Sequence[hyp.Candidate],
    store: MemoryStore,
    rng: np.random.Generator,
) -> ActionToken:
    if not salient:
        raise MalformedObservation("no salient channel to attend")
    if len(salient) == 1:
        return ActionToken(salient[0])
    votes = hyp.tally_next(cands, store, "action")
    votes = Counter({a: n for a, n in votes.items() if a.attend in salient})
    if votes:
        return multinomial(votes, rng)
    return ActionToken(salient[int(rng.integers(len(salient)))])


class Agent:
    """One trial's agent. Owns its memory store, candidates and random stream.

    ``refresh`` decides which recall counts as use of a cell:
    ``"scored"`` refreshes a whole chain when it is scored at the answer
    step, ``"matched"`` refreshes each cell as a candidate is seeded on it or
    advances onto it.

    ``learning`` decides how answer feedback is stored: ``"refute"`` resets a
    chain to -delta on its first wrong prediction and stops recalling
    negative chains; ``"accumulate"`` adds +/-delta to every scored chain.

    ``trace`` receives one dict per committed step.
    """

    def __init__(
        self,
        n_cells: int,
        decay: float = 0.9,
        delta: float = 1.0,
        rng: np.random.Generator | int | None = None,
        trace: Optional[Callable[[dict[str, Any]], None]] = None,
        refresh: str = "scored",
        learning: str = "refute",
    ):
        if refresh not in REFRESH_POLICIES:
            raise ValueError(f"refresh must be one of {REFRESH_POLICIES}")
        if learning not in LEARNING_RULES:
            raise ValueError(f"learning must be one of {LEARNING_RULES}")
        self.refresh = refresh
        self.learning = learning
        self.store = MemoryStore(n_cells, decay)
        self.delta = delta
        self.rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
        self.trace = trace
        self.cands: list[hyp.Candidate] = []
        self.prev_cell: Optional[int] = None
        self.step_index = 0
        self.episode = 0
        self.episode_cells: list[int] = []
        self.committed: list[StepRecord] = []
        self._prediction: Optional[AttributeToken] = None
        self._predicted = False

    def begin_episode(self) -> None:
        self.cands = []
        self.prev_cell = None
        self.step_index = 0
        self.episode += 1
        self.episode_cells = []
        self.committed = []
        self._prediction = None
        self._predicted = False

    def idle(self, ticks: int = 1) -> None:
        """Inter-episode gap steps: activity decays, nothing is stored."""
        for _ in range(ticks):
            self.store.decay_tick()

    # overridden by the scripted agents
    def choose_attention(self, salient: list[Channel]) -> ActionToken:
        return select_attention(salient, self.cands, self.store, self.rng)

    def step(self, obs: Observation) -> ActionToken:
        action, event = self._commit(obs)
        self._emit(event)
        return action

    def _commit(self, obs: Observation) -> tuple[ActionToken, dict[str, Any]]:
        if self.step_index >= EPISODE_LENGTH:
            raise ContractViolation("episode already has four steps; call begin_episode")
        salient = salient_channels(obs)
        if not salient:
            raise MalformedObservation(f"all-zero observation at step {self.step_index}")
        event = self._event(obs, salient)
        action = self.choose_attention(salient)
        record = StepRecord.attending(obs.token(action.attend))

        cell = self.store.allocate_state(protect=self.episode_cells)
        self.store.bind_step(self.prev_cell, cell, record)
        self.prev_cell = cell
        self.episode_cells.append(cell)
        self.committed.append(record)

        if self.step_index == 0:
            # the episode's own fresh cell is sequence-initial too; it is not a recalled candidate
            self.cands = hyp.seed(
                record.token, self.store,
                refresh=self.refresh == "matched",
                skip_negative=self.learning == "refute",
                exclude=(cell,),
            )
        else:
            self.cands = hyp.advance(self.cands, record, self.store, refresh=self.refresh == "matched")

        self.store.decay_tick()
        self.step_index += 1
        event.update(action=str(action), record=str(record), cell=cell)
        return action, event

    def predict_answer(self) -> Optional[AttributeToken]:
        votes = hyp.tally_next(self.cands, self.store, "token")
        self._prediction = multinomial(votes, self.rng) if votes else None
        self._predicted = True
        return self._prediction

    def finish_episode(self, actual: AttributeToken) -> EpisodeOutcome:
        if not self._predicted:
            raise ContractViolation("predict_answer must run before finish_episode")
        if self.step_index != EPISODE_LENGTH - 1:
            raise ContractViolation(f"answer step expected, agent is at step {self.step_index}")
        hyp.evaluate(
            self.cands, actual, self.delta, self.store,
            refute=self.learning == "refute",
            refresh_chain=self.refresh == "scored",
        )
        _, event = self._commit(Observation.from_tokens(actual))
        outcome = EpisodeOutcome.score(self._prediction, actual)
        event.update(
            prediction=None if self._prediction is None else str(self._prediction),
            outcome=outcome.result.value,
        )
        self._emit(event)
        return outcome

    def _event(self, obs: Observation, salient: list[Channel]) -> dict[str, Any]:
        return {
            "episode": self.episode,
            "step": self.step_index,
            "bits": str(obs),
            "salient": [ch.name for ch in salient],
            "candidates": hyp.class_counts(self.cands, self.store),
        }

    def _emit(self, event: dict[str, Any]) -> None:
        if self.trace is not None:
            self.trace(event)


class CuedAttentionOracle(Agent):
    """Scripted agent: attends the cued channel and predicts from any fully matching candidate."""

    def choose_attention(self, salient):
        if len(salient) == 1:
            return ActionToken(salient[0])
        cue = self.committed[0].token
        return ActionToken(Channel.A1 if cue.value == 0 else Channel.A2)

    def predict_answer(self):
        votes = hyp.tally_next(self.cands, self.store, "token", filter=None)
        self._prediction = multinomial(votes, self.rng) if votes else None
        self._predicted = True
        return self._prediction


class DummyAttentionAgent(Agent):
    """Scripted agent: attends the non-cued channel; guesses when memory has no vote.

    Every remembered episode on the same path votes (``learning="accumulate"``
    by default). Under ``"refute"`` only the chains that were right last time
    vote, and since each 16-episode block draws configurations without
    replacement, those are anti-predictive and the hit rate falls below chance.
    """

    def __init__(self, n_cells, learning="accumulate", **kwargs):
        super().__init__(n_cells, learning=learning, **kwargs)

    def choose_attention(self, salient):
        if len(salient) == 1:
            return ActionToken(salient[0])
        cue = self.committed[0].token
        return ActionToken(Channel.A2 if cue.value == 0 else Channel.A1)

    def predict_answer(self):
        votes = hyp.tally_next(self.cands, self.store, "token", filter=None)
        if not votes:
            votes = Counter({AttributeToken(Channel.ANS, 0): 1, AttributeToken(Channel.ANS, 1): 1})
        self._prediction = multinomial(votes, self.rng)
        self._predicted = True
        return self._prediction
