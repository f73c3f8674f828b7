"""Attribute, action and step-record tokens shared by the memory and the agent."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum


class Channel(IntEnum):
    """The four 2-bit slices of an observation, in wire order."""

    CUE = 0
    A1 = 1
    A2 = 2
    ANS = 3


class ContractViolation(RuntimeError):
    """A caller broke an operation's precondition; the store or agent refuses to continue."""


@dataclass(frozen=True, order=True)
class AttributeToken:
    channel: Channel
    value: int

    def __post_init__(self):
        if self.value not in (0, 1):
            raise ValueError(f"token value must be 0 or 1, got {self.value!r}")
        object.__setattr__(self, "channel", Channel(self.channel))

    def __str__(self):
        return f"({self.channel.name},{self.value})"


@dataclass(frozen=True, order=True)
class ActionToken:
    attend: Channel

    def __post_init__(self):
        object.__setattr__(self, "attend", Channel(self.attend))

    def __str__(self):
        return f"Attend({self.attend.name})"


@dataclass(frozen=True, order=True)
class StepRecord:
    token: AttributeToken
    action: ActionToken

    def __post_init__(self):
        if self.action.attend != self.token.channel:
            raise ValueError(f"{self.action} cannot yield token {self.token}")

    @classmethod
    def attending(cls, token: AttributeToken) -> "StepRecord":
        return cls(token, ActionToken(token.channel))

    def __str__(self):
        return f"{self.token}/{self.action}"


def tok(channel: str | Channel, value: int) -> AttributeToken:
    """Shorthand used in tests and demos: ``tok("A1", 0)``."""
    if isinstance(channel, str):
        channel = Channel[channel]
    return AttributeToken(channel, value)


def rec(channel: str | Channel, value: int) -> StepRecord:
    return StepRecord.attending(tok(channel, value))
