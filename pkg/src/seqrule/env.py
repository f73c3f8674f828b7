"""Delayed match-to-sample environment.

An episode has four one-step phases: start cue, sample, target, answer.
Observations are 8 binary digits made of four 2-bit slices
(cue | attribute 1 | attribute 2 | answer). The cue names which attribute
carries the values to compare; the other attribute shows a dummy value that
is held fixed for the whole episode.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .tokens import AttributeToken, Channel

N_PHASES = 4
N_BITS = 8


class MalformedObservation(ValueError):
    pass


@dataclass(frozen=True, order=True)
class EpisodeConfig:
    cued_channel: Channel
    dummy_value: int
    sample_value: int
    target_value: int

    @property
    def dummy_channel(self) -> Channel:
        return Channel.A2 if self.cued_channel == Channel.A1 else Channel.A1

    def __str__(self):
        return (f"cued={self.cued_channel.name} dummy={self.dummy_value} "
                f"sample={self.sample_value} target={self.target_value}")


@dataclass(frozen=True)
class Observation:
    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if len(bits) != N_BITS or any(b not in (0, 1) for b in bits):
            raise MalformedObservation(f"expected 8 binary digits, got {self.bits!r}")
        object.__setattr__(self, "bits", bits)
        for ch in Channel:
            if sum(self.slice(ch)) > 1:
                raise MalformedObservation(f"slice {ch.name} is not one-hot: {self.slice(ch)}")

    def slice(self, channel: Channel) -> tuple[int, int]:
        i = 2 * int(channel)
        return self.bits[i], self.bits[i + 1]

    def token(self, channel: Channel) -> AttributeToken:
        s = self.slice(channel)
        if not any(s):
            raise MalformedObservation(f"slice {channel.name} is empty")
        return AttributeToken(channel, s.index(1))

    @classmethod
    def from_tokens(cls, *tokens: AttributeToken) -> "Observation":
        bits = [0] * N_BITS
        for t in tokens:
            bits[2 * int(t.channel) + t.value] = 1
        return cls(tuple(bits))

    def __str__(self):
        return "".join(str(b) for b in self.bits)


def all_configs() -> list[EpisodeConfig]:
    return [
        EpisodeConfig(Channel(cued), d, s, t)
        for cued, d, s, t in itertools.product((Channel.A1, Channel.A2), (0, 1), (0, 1), (0, 1))
    ]


def new_block(rng: np.random.Generator) -> list[EpisodeConfig]:
    configs = all_configs()
    return [configs[i] for i in rng.permutation(len(configs))]


def episode_stream(rng: np.random.Generator) -> Iterator[EpisodeConfig]:
    """Endless sequence of shuffled 16-episode blocks."""
    while True:
        yield from new_block(rng)


def observe(config: EpisodeConfig, phase: int) -> Observation:
    if phase == 0:
        return Observation.from_tokens(AttributeToken(Channel.CUE, int(config.cued_channel) - 1))
    if phase in (1, 2):
        value = config.sample_value if phase == 1 else config.target_value
        return Observation.from_tokens(
            AttributeToken(config.cued_channel, value),
            AttributeToken(config.dummy_channel, config.dummy_value),
        )
    if phase == 3:
        return Observation.from_tokens(actual_answer(config))
    raise ValueError(f"phase must be 0..3, got {phase!r}")


def actual_answer(config: EpisodeConfig) -> AttributeToken:
    return AttributeToken(Channel.ANS, 0 if config.sample_value == config.target_value else 1)


def enumerate_space() -> dict[str, int]:
    """Count configurations and attention branches by brute enumeration."""
    configs = set(all_configs())
    # an attention branch is the pair of channels attended at sample and target
    total = set()
    for config in configs:
        salient = [[ch for ch in Channel if any(observe(config, phase).slice(ch))] for phase in (1, 2)]
        total.update((config, branch) for branch in itertools.product(*salient))
    branches = {branch for _, branch in total}
    return {
        "configurations": len(configs),
        "attention_branches_per_episode": len(branches),
        "total": len(total),
    }


def trace_lines(trial: int, episode: int, config: EpisodeConfig) -> list[str]:
    """``trial,episode,phase,bits,cued,dummy,sample,target`` rows for one episode."""
    return [
        f"{trial},{episode},{phase},{observe(config, phase)},{config.cued_channel.name},"
        f"{config.dummy_value},{config.sample_value},{config.target_value}"
        for phase in range(N_PHASES)
    ]
