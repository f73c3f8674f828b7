"""Recalled candidate sequences tracked in parallel against the current episode."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Literal, Optional

from .memory import MemoryStore
from .tokens import AttributeToken, Channel, StepRecord


class HypothesisClass(Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    NEUTRAL = "Neutral"


@dataclass(frozen=True)
class Candidate:
    cursor: int
    matched_len: int = 1


def seed(
    first_token: AttributeToken,
    store: MemoryStore,
    refresh: bool = True,
    skip_negative: bool = False,
    exclude: Iterable[int] = (),
) -> list[Candidate]:
    """One candidate per stored sequence that starts with ``first_token``.

    With ``skip_negative`` refuted (Negative) sequences are not recalled.
    """
    cands = []
    exclude = set(exclude)
    for cell in store.seed_states(first_token):
        if cell in exclude:
            continue
        cand = Candidate(cell)
        if skip_negative and classify(cand, store) is HypothesisClass.NEGATIVE:
            continue
        if refresh:
            store.refresh(cell)
        cands.append(cand)
    return cands


def advance(
    cands: Iterable[Candidate], observed: StepRecord, store: MemoryStore, refresh: bool = True
) -> list[Candidate]:
    kept = []
    for cand in cands:
        nxt = store.neighbor(cand.cursor, "forward")
        if nxt is None or store.record(nxt) != observed:
            continue
        if refresh:
            store.refresh(nxt)
        kept.append(Candidate(nxt, cand.matched_len + 1))
    return kept


def chain_value(cand: Candidate, store: MemoryStore) -> float:
    return float(store.value[store.chain(cand.cursor)].sum())


def classify(cand: Candidate, store: MemoryStore) -> HypothesisClass:
    total = chain_value(cand, store)
    if total > 0:
        return HypothesisClass.POSITIVE
    if total < 0:
        return HypothesisClass.NEGATIVE
    return HypothesisClass.NEUTRAL


def tally_next(
    cands: Iterable[Candidate],
    store: MemoryStore,
    what: Literal["action", "token"],
    filter: Optional[HypothesisClass] = HypothesisClass.POSITIVE,
) -> Counter:
    """Count the next recorded action (or token) over candidates of class ``filter``.

    ``filter=None`` counts every candidate regardless of class.
    """
    tally: Counter = Counter()
    for cand in cands:
        if filter is not None and classify(cand, store) is not filter:
            continue
        nxt = store.neighbor(cand.cursor, "forward")
        if nxt is None:
            continue
        r = store.record(nxt)
        tally[r.action if what == "action" else r.token] += 1
    return tally


def evaluate(
    cands: Iterable[Candidate],
    actual_final: AttributeToken,
    delta: float,
    store: MemoryStore,
    refute: bool = False,
    refresh_chain: bool = False,
) -> list[tuple[Candidate, bool]]:
    """Reinforce every candidate that predicts an answer: +delta if right, -delta if wrong.

    Values accumulate by default. With ``refute`` a wrong prediction instead
    brings every cell of the chain to exactly -delta, whatever it had
    gathered before. With ``refresh_chain`` each scored chain is refreshed
    end to end.

    Candidates whose next cell is missing or is not an answer record are
    skipped. Returns ``(candidate, correct)`` for those that were scored.
    """
    scored = []
    for cand in cands:
        nxt = store.neighbor(cand.cursor, "forward")
        if nxt is None:
            continue
        predicted = store.record(nxt).token
        if predicted.channel != Channel.ANS:
            continue
        correct = predicted == actual_final
        if correct:
            visited = store.reverse_replay_assign(nxt, delta)
        elif refute:
            # cells of one chain are always assigned together, so they share one value
            visited = store.reverse_replay_assign(nxt, -(store.value[nxt] + delta))
        else:
            visited = store.reverse_replay_assign(nxt, -delta)
        if refresh_chain:
            for cell in visited:
                store.refresh(cell)
        scored.append((cand, correct))
    return scored


def class_counts(cands: Iterable[Candidate], store: MemoryStore) -> dict[str, int]:
    counts = {c.value: 0 for c in HypothesisClass}
    for cand in cands:
        counts[classify(cand, store).value] += 1
    return counts
