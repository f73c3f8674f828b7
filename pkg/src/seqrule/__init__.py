"""Rule discovery from one-shot sequence memory, tested on a delayed match-to-sample task."""

from .agent import Agent, CuedAttentionOracle, DummyAttentionAgent, EpisodeOutcome, Outcome
from .env import EpisodeConfig, Observation
from .harness import ExperimentConfig, block_rates, emit, run_experiment, run_trial
from .hypothesis import Candidate, HypothesisClass
from .memory import MemoryStore
from .tokens import ActionToken, AttributeToken, Channel, ContractViolation, StepRecord

__version__ = "0.1.0"
