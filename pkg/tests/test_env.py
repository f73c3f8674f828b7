import itertools
from collections import Counter

import numpy as np
import pytest

from seqrule import env
from seqrule.env import EpisodeConfig, MalformedObservation, Observation, observe
from seqrule.tokens import Channel, tok

CONFIGS = env.all_configs()


def test_sixteen_distinct_configs():
    assert len(CONFIGS) == len(set(CONFIGS)) == 2 * 2 * 2 * 2


def test_block_is_a_permutation():
    rng = np.random.default_rng(0)
    for _ in range(50):
        block = env.new_block(rng)
        assert sorted(block) == sorted(CONFIGS)


def test_blocks_vary_with_seed():
    a = env.new_block(np.random.default_rng(1))
    b = env.new_block(np.random.default_rng(2))
    assert a != b


def test_stream_coverage_over_k_blocks():
    stream = env.episode_stream(np.random.default_rng(3))
    k = 7
    counts = Counter(next(stream) for _ in range(16 * k))
    assert set(counts.values()) == {k}


def test_two_hundred_episodes_span_thirteen_blocks():
    full, rest = divmod(200, 16)
    assert (full, rest) == (12, 8)


def test_observation_examples():
    d = 1
    cfg = EpisodeConfig(Channel.A1, dummy_value=d, sample_value=0, target_value=1)
    assert observe(cfg, 0).bits == (1, 0, 0, 0, 0, 0, 0, 0)
    # value = position of the 1, so dummy value 1 is the slice [0, 1]
    assert observe(cfg, 1).bits == (0, 0, 1, 0, 1 - d, d, 0, 0)
    cfg = EpisodeConfig(Channel.A1, 0, sample_value=1, target_value=1)
    assert observe(cfg, 3).bits == (0, 0, 0, 0, 0, 0, 1, 0)
    cfg = EpisodeConfig(Channel.A2, 0, sample_value=1, target_value=0)
    assert observe(cfg, 0).bits == (0, 1, 0, 0, 0, 0, 0, 0)
    assert observe(cfg, 3).bits == (0, 0, 0, 0, 0, 0, 0, 1)


@pytest.mark.parametrize("cfg", CONFIGS, ids=str)
def test_phase_masking_and_dummy(cfg):
    obs = [observe(cfg, p) for p in range(4)]
    for p, o in enumerate(obs):
        nonzero = {ch for ch in Channel if any(o.slice(ch))}
        expected = {0: {Channel.CUE}, 1: {Channel.A1, Channel.A2},
                    2: {Channel.A1, Channel.A2}, 3: {Channel.ANS}}[p]
        assert nonzero == expected
        assert all(sum(o.slice(ch)) <= 1 for ch in Channel)
    assert obs[1].slice(cfg.dummy_channel) == obs[2].slice(cfg.dummy_channel)
    assert observe(cfg, 2) == obs[2]


@pytest.mark.parametrize("cfg", CONFIGS, ids=str)
def test_cued_comparison_reproduces_answer(cfg):
    cue = observe(cfg, 0).token(Channel.CUE)
    cued = Channel.A1 if cue.value == 0 else Channel.A2
    s = observe(cfg, 1).token(cued).value
    t = observe(cfg, 2).token(cued).value
    assert tok("ANS", 0 if s == t else 1) == env.actual_answer(cfg)
    assert observe(cfg, 3).token(Channel.ANS) == env.actual_answer(cfg)


def test_actual_answer():
    assert env.actual_answer(EpisodeConfig(Channel.A1, 0, 0, 0)) == tok("ANS", 0)
    assert env.actual_answer(EpisodeConfig(Channel.A1, 0, 0, 1)) == tok("ANS", 1)
    assert sum(env.actual_answer(c) == tok("ANS", 0) for c in CONFIGS) == 8


def test_enumerate_space():
    counts = env.enumerate_space()
    assert counts == {"configurations": 16, "attention_branches_per_episode": 4, "total": 64}
    # independent count: product of the factors
    assert counts["total"] == 16 * 2 * 2


def test_invalid_phase_and_bad_bits():
    with pytest.raises(ValueError):
        observe(CONFIGS[0], 4)
    with pytest.raises(MalformedObservation):
        Observation((1, 1, 0, 0, 0, 0, 0, 0))
    with pytest.raises(MalformedObservation):
        Observation((1, 0, 0))
    with pytest.raises(MalformedObservation):
        Observation((0,) * 8).token(Channel.CUE)


def test_trace_lines():
    cfg = EpisodeConfig(Channel.A2, 1, 0, 1)
    lines = env.trace_lines(3, 7, cfg)
    assert lines[0] == "3,7,0,01000000,A2,1,0,1"
    assert lines[1] == "3,7,1,00011000,A2,1,0,1"
    assert len(lines) == 4
