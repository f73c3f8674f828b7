from collections import Counter

import numpy as np
import pytest

from seqrule import env, hypothesis as hyp
from seqrule.agent import (
    Agent, CuedAttentionOracle, DummyAttentionAgent, EpisodeOutcome, Outcome,
    multinomial, salient_channels, select_attention,
)
from seqrule.env import EpisodeConfig, MalformedObservation, Observation
from seqrule.memory import MemoryStore
from seqrule.tokens import ActionToken, Channel, ContractViolation, rec, tok

from conftest import store_sequence

DRAWS = 10_000


def positive_store(chains):
    s = MemoryStore(64)
    cells = [store_sequence(s, q) for q in chains]
    for c in cells:
        s.reverse_replay_assign(c[-1], 1.0)
    return s, cells


def run_episode(agent, cfg):
    agent.begin_episode()
    actions = [agent.step(env.observe(cfg, p)) for p in range(3)]
    agent.predict_answer()
    return actions, agent.finish_episode(env.actual_answer(cfg))


class Scripted(Agent):
    """Attends the channels named in ``plan`` at the sample and target steps."""

    plan = (Channel.A1, Channel.A1)

    def choose_attention(self, salient):
        if len(salient) == 1:
            return ActionToken(salient[0])
        return ActionToken(self.plan[self.step_index - 1])


# -- salient_channels ---------------------------------------------------------

def test_salient_channels():
    cue = Observation((1, 0, 0, 0, 0, 0, 0, 0))
    assert salient_channels(cue) == [Channel.CUE]
    sample = env.observe(EpisodeConfig(Channel.A2, 0, 1, 1), 1)
    assert salient_channels(sample) == [Channel.A1, Channel.A2]
    assert salient_channels(Observation((0, 0, 0, 0, 0, 0, 1, 0))) == [Channel.ANS]
    assert salient_channels(Observation((0,) * 8)) == []


# -- select_attention ---------------------------------------------------------

def test_forced_attention_ignores_candidates():
    s, cells = positive_store([[rec("CUE", 0), rec("A1", 0)]])
    rng = np.random.default_rng(0)
    state = rng.bit_generator.state
    assert select_attention([Channel.ANS], [hyp.Candidate(cells[0][0])], s, rng) == ActionToken(Channel.ANS)
    assert rng.bit_generator.state == state


def test_empty_salient_is_malformed():
    with pytest.raises(MalformedObservation):
        select_attention([], [], MemoryStore(4), np.random.default_rng(0))


def test_multinomial_attention_three_to_one():
    chains = [[rec("CUE", 0), rec(ch, 0)] for ch in ("A1", "A1", "A1", "A2")]
    s, cells = positive_store(chains)
    cands = [hyp.Candidate(c[0]) for c in cells]
    assert hyp.tally_next(cands, s, "action") == {ActionToken(Channel.A1): 3, ActionToken(Channel.A2): 1}
    rng = np.random.default_rng(7)
    picks = Counter(select_attention([Channel.A1, Channel.A2], cands, s, rng) for _ in range(DRAWS))
    assert abs(picks[ActionToken(Channel.A1)] / DRAWS - 0.75) <= 0.02


def test_uniform_fallback_without_positive_candidates():
    s = MemoryStore(8)
    cells = store_sequence(s, [rec("CUE", 0), rec("A1", 0)])  # neutral
    rng = np.random.default_rng(8)
    picks = Counter(
        select_attention([Channel.A1, Channel.A2], [hyp.Candidate(cells[0])], s, rng) for _ in range(DRAWS)
    )
    assert abs(picks[ActionToken(Channel.A1)] / DRAWS - 0.5) <= 0.02


def test_votes_for_non_salient_channels_are_ignored():
    s, cells = positive_store([[rec("CUE", 0), rec("ANS", 0)]])
    rng = np.random.default_rng(9)
    picks = Counter(
        select_attention([Channel.A1, Channel.A2], [hyp.Candidate(cells[0][0])], s, rng) for _ in range(2000)
    )
    assert set(picks) == {ActionToken(Channel.A1), ActionToken(Channel.A2)}


def test_multinomial_is_order_independent():
    a = Counter({"x": 2, "y": 1})
    b = Counter({"y": 1, "x": 2})
    ra, rb = np.random.default_rng(3), np.random.default_rng(3)
    assert [multinomial(a, ra) for _ in range(50)] == [multinomial(b, rb) for _ in range(50)]


# -- step / episode mechanics ------------------------------------------------

CFG = EpisodeConfig(Channel.A1, dummy_value=1, sample_value=0, target_value=0)


def test_begin_episode_resets():
    a = Agent(40, rng=0)
    run_episode(a, CFG)
    a.begin_episode()
    assert a.cands == [] and a.prev_cell is None and a.step_index == 0


def test_step_zero_commits_cue_and_seeds():
    a = Scripted(40, rng=0)
    run_episode(a, CFG)
    run_episode(a, env.EpisodeConfig(Channel.A2, 0, 1, 0))
    a.begin_episode()
    action = a.step(env.observe(CFG, 0))
    assert action == ActionToken(Channel.CUE)
    assert a.committed == [rec("CUE", 0)]
    assert len(a.cands) == 1  # only the earlier cue-0 episode
    assert a.store.records[a.cands[0].cursor] == rec("CUE", 0)


def test_episode_allocates_four_chained_cells():
    a = Agent(40, rng=1)
    run_episode(a, CFG)
    cells = a.episode_cells
    assert len(cells) == len(set(cells)) == 4
    assert a.store.chain(cells[0]) == cells
    assert [a.store.records[c] for c in cells] == a.committed
    assert a.committed[-1].token == env.actual_answer(CFG)


def test_consecutive_episodes_not_linked():
    a = Agent(40, rng=1)
    run_episode(a, CFG)
    first = list(a.episode_cells)
    run_episode(a, CFG)
    assert a.store.neighbor(first[-1], "forward") is None
    assert a.store.neighbor(a.episode_cells[0], "backward") is None


def test_replayed_episode_keeps_stored_candidate_to_the_end():
    a = Scripted(40, rng=2)
    run_episode(a, CFG)
    stored = list(a.episode_cells)
    run_episode(a, CFG)
    assert a.cands == [hyp.Candidate(stored[-1], 4)]


def test_zero_outcome_still_scores_neutral_survivor():
    a = Scripted(40, rng=3)
    run_episode(a, CFG)
    stored = list(a.episode_cells)
    assert (a.store.value[stored] == 0).all()
    _, outcome = run_episode(a, CFG)
    assert outcome.result is Outcome.ZERO and outcome.predicted is None
    assert (a.store.value[stored] == 1.0).all()
    _, outcome = run_episode(a, CFG)
    assert outcome.result is Outcome.POSITIVE


def test_wrong_answer_refutes_under_default_rule():
    a = Scripted(40, rng=3)
    a.plan = (Channel.A2, Channel.A2)  # dummy channel for CFG
    run_episode(a, CFG)
    stored = list(a.episode_cells)
    run_episode(a, CFG)  # scored right: +1
    other = EpisodeConfig(Channel.A1, dummy_value=1, sample_value=0, target_value=1)
    _, outcome = run_episode(a, other)  # same records up to the answer, which differs
    assert outcome.result is Outcome.NEGATIVE
    assert (a.store.value[stored] == -1.0).all()


def test_accumulate_rule_keeps_positive_after_one_failure():
    a = Scripted(40, rng=3, learning="accumulate")
    a.plan = (Channel.A2, Channel.A2)
    run_episode(a, CFG)
    stored = list(a.episode_cells)
    run_episode(a, CFG)
    run_episode(a, CFG)
    run_episode(a, EpisodeConfig(Channel.A1, 1, 0, 1))
    assert (a.store.value[stored] == 1.0 + 1.0 - 1.0).all()


def test_predict_answer():
    a = Agent(40, rng=4)
    assert a.predict_answer() is None  # nothing stored
    s, cells = positive_store([[rec("CUE", 0), rec("A1", 0), rec("A1", 1), rec("ANS", 0)]])
    a.store = s
    a.cands = [hyp.Candidate(cells[0][2], 3)]
    assert a.predict_answer() == tok("ANS", 0)


def test_predict_answer_frequency_two_to_one():
    chains = [[rec("CUE", 0), rec("A1", 0), rec("A1", 1), rec("ANS", v)] for v in (0, 0, 1)]
    s, cells = positive_store(chains)
    a = Agent(4, rng=11)
    a.store = s
    a.cands = [hyp.Candidate(c[2], 3) for c in cells]
    picks = Counter(a.predict_answer() for _ in range(DRAWS))
    assert abs(picks[tok("ANS", 0)] / DRAWS - 2 / 3) <= 0.02


def test_outcome_scoring():
    assert EpisodeOutcome.score(tok("ANS", 0), tok("ANS", 0)).result is Outcome.POSITIVE
    assert EpisodeOutcome.score(tok("ANS", 1), tok("ANS", 0)).result is Outcome.NEGATIVE
    assert EpisodeOutcome.score(None, tok("ANS", 0)).result is Outcome.ZERO


def test_first_episode_is_zero():
    for seed in range(5):
        _, outcome = run_episode(Agent(100, rng=seed), CFG)
        assert outcome.result is Outcome.ZERO


def test_contract_violations():
    a = Agent(40, rng=0)
    a.begin_episode()
    for p in range(3):
        a.step(env.observe(CFG, p))
    with pytest.raises(ContractViolation):
        a.finish_episode(tok("ANS", 0))
    with pytest.raises(MalformedObservation):
        Agent(40).step(Observation((0,) * 8))
    with pytest.raises(ValueError):
        Agent(40, refresh="sometimes")


def test_forced_steps_consume_no_randomness():
    a = Agent(40, rng=5)
    run_episode(a, CFG)
    run_episode(a, CFG)
    a.begin_episode()
    state = a.rng.bit_generator.state
    a.step(env.observe(CFG, 0))
    assert a.rng.bit_generator.state == state
    a.step(env.observe(CFG, 1))
    a.step(env.observe(CFG, 2))
    a.predict_answer()
    state = a.rng.bit_generator.state
    a.finish_episode(env.actual_answer(CFG))
    assert a.rng.bit_generator.state == state


def test_trace_hook_receives_every_step():
    events = []
    a = Agent(40, rng=0, trace=events.append)
    run_episode(a, CFG)
    assert [e["step"] for e in events] == [0, 1, 2, 3]
    assert events[0]["bits"] == "10000000"
    assert events[1]["salient"] == ["A1", "A2"]
    assert events[3]["outcome"] == "Zero" and events[3]["prediction"] is None
    assert set(events[2]["candidates"]) == {"Positive", "Negative", "Neutral"}


def test_idle_ticks_only_decay():
    a = Agent(8, decay=0.5, rng=0)
    run_episode(a, CFG)
    before = a.store.activity.copy()
    a.idle(2)
    np.testing.assert_allclose(a.store.activity, before * 0.25)


# -- storage completeness over many episodes ----------------------------------

@pytest.mark.parametrize("refresh,learning", [("scored", "refute"), ("matched", "accumulate")])
def test_newest_chain_replays_committed_records(refresh, learning):
    a = Agent(24, rng=6, refresh=refresh, learning=learning)
    stream = env.episode_stream(np.random.default_rng(6))
    for _ in range(120):
        cfg = next(stream)
        run_episode(a, cfg)
        head = a.episode_cells[0]
        assert [a.store.records[c] for c in a.store.chain(head)] == a.committed
        assert a.committed[-1].token == env.actual_answer(cfg)


# -- scripted agents ----------------------------------------------------------

def test_cued_oracle_is_perfect_after_one_block():
    a = CuedAttentionOracle(400, rng=0)
    stream = env.episode_stream(np.random.default_rng(0))
    results = []
    for _ in range(48):
        cfg = next(stream)
        actions, outcome = run_episode(a, cfg)
        assert actions[1].attend == actions[2].attend == cfg.cued_channel
        results.append(outcome.result)
    assert all(r is Outcome.POSITIVE for r in results[16:])


def test_dummy_agent_attends_dummy():
    a = DummyAttentionAgent(100, rng=0)
    cfg = EpisodeConfig(Channel.A2, 0, 1, 1)
    actions, _ = run_episode(a, cfg)
    assert actions[1].attend == actions[2].attend == Channel.A1


@pytest.mark.parametrize("learning", ["accumulate", "refute"])
def test_dummy_attention_never_beats_chance(learning):
    a = DummyAttentionAgent(200, rng=1, learning=learning)
    stream = env.episode_stream(np.random.default_rng(1))
    res = [run_episode(a, next(stream))[1].result for _ in range(600)]
    assert sum(r is Outcome.POSITIVE for r in res) / len(res) <= 0.55
