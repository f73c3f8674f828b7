"""Seeded experiment runner: cell-count sweeps, outcome logs, 40-episode block rates and output files."""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Callable, Iterator, Optional, Sequence

import numpy as np

from . import env
from .agent import LEARNING_RULES, REFRESH_POLICIES, Agent, EpisodeOutcome, Outcome
from .plots import write_learning_curves

logger = logging.getLogger(__name__)

OUTCOMES = (Outcome.POSITIVE, Outcome.NEGATIVE, Outcome.ZERO)
CODE = {o: i for i, o in enumerate(OUTCOMES)}
BLOCK = 40

# published block rates, (pos, neg, zero) by cell count and block end
REFERENCE_RATES = {
    100: {40: (0.32, 0.26, 0.42), 80: (0.48, 0.18, 0.34), 120: (0.57, 0.12, 0.31), 160: (0.62, 0.08, 0.30), 200: (0.66, 0.06, 0.28)},
    200: {40: (0.43, 0.23, 0.34), 80: (0.52, 0.20, 0.29), 120: (0.61, 0.15, 0.24), 160: (0.65, 0.13, 0.22), 200: (0.63, 0.12, 0.25)},
    300: {40: (0.35, 0.27, 0.38), 80: (0.76, 0.09, 0.15), 120: (0.72, 0.10, 0.18), 160: (0.75, 0.09, 0.16), 200: (0.82, 0.05, 0.14)},
    400: {40: (0.39, 0.23, 0.38), 80: (0.73, 0.12, 0.15), 120: (0.83, 0.05, 0.12), 160: (0.82, 0.06, 0.12), 200: (0.84, 0.06, 0.10)},
    500: {40: (0.36, 0.27, 0.38), 80: (0.65, 0.16, 0.18), 120: (0.79, 0.10, 0.11), 160: (0.75, 0.06, 0.18), 200: (0.89, 0.03, 0.09)},
}


@dataclass
class ExperimentConfig:
    cell_counts: list[int] = field(default_factory=lambda: [100, 200, 300, 400, 500])
    trials: int = 10
    episodes: int = 200
    seed: int = 42
    decay: float = 0.9
    delta: float = 1.0
    gap_steps: int = 0
    out_dir: Optional[Path] = None
    trace: bool = False
    workers: int = 1
    refresh: str = "scored"
    learning: str = "refute"

    def __post_init__(self):
        self.cell_counts = [int(c) for c in self.cell_counts]
        if not self.cell_counts or min(self.cell_counts) < 1:
            raise ValueError("cell counts must be positive")
        if self.trials < 1 or self.episodes < 1 or self.workers < 1:
            raise ValueError("trials, episodes and workers must be positive")
        if self.gap_steps < 0:
            raise ValueError("gap_steps must be >= 0")
        if not 0.0 < self.decay < 1.0:
            raise ValueError("decay must lie in (0, 1)")
        if self.refresh not in REFRESH_POLICIES:
            raise ValueError(f"refresh must be one of {REFRESH_POLICIES}")
        if self.learning not in LEARNING_RULES:
            raise ValueError(f"learning must be one of {LEARNING_RULES}")
        if self.out_dir is not None:
            self.out_dir = Path(self.out_dir)


def trial_seed(seed: int, cells: int, trial: int) -> tuple[int, int, int]:
    """Entropy for one trial; independent of which other trials are run."""
    return (seed, cells, trial)


def run_trial(
    cells: int,
    episodes: int,
    seed: int | Sequence[int],
    decay: float = 0.9,
    delta: float = 1.0,
    gap_steps: int = 0,
    refresh: str = "scored",
    learning: str = "refute",
    trace: Optional[Callable[[dict[str, Any]], None]] = None,
    agent_cls: type[Agent] = Agent,
) -> list[EpisodeOutcome]:
    env_ss, agent_ss = np.random.SeedSequence(seed).spawn(2)
    env_rng = np.random.default_rng(env_ss)
    agent = agent_cls(
        cells, decay=decay, delta=delta, rng=np.random.default_rng(agent_ss),
        refresh=refresh, learning=learning, trace=trace,
    )
    stream = env.episode_stream(env_rng)
    outcomes = []
    for _ in range(episodes):
        config = next(stream)
        agent.begin_episode()
        if trace is not None:
            trace({"config": config, "episode": agent.episode})
        for phase in range(env.N_PHASES - 1):
            agent.step(env.observe(config, phase))
        agent.predict_answer()
        outcomes.append(agent.finish_episode(env.actual_answer(config)))
        agent.idle(gap_steps)
    return outcomes


@dataclass
class OutcomeLog:
    cell_counts: list[int]
    trials: int
    episodes: int
    codes: np.ndarray  # (len(cell_counts), trials, episodes), index into OUTCOMES

    def rows(self) -> Iterator[tuple[int, int, int, Outcome]]:
        """(cells, trial, episode, result) in canonical order; trial from 0, episode from 1."""
        for i, cells in enumerate(self.cell_counts):
            for t in range(self.trials):
                for e in range(self.episodes):
                    yield cells, t, e + 1, OUTCOMES[self.codes[i, t, e]]

    def for_cells(self, cells: int) -> np.ndarray:
        return self.codes[self.cell_counts.index(cells)]

    def __len__(self):
        return self.codes.size


def _trial_task(args):
    cells, trial, config_dict = args
    cfg = ExperimentConfig(**config_dict)
    outcomes = run_trial(
        cells, cfg.episodes, trial_seed(cfg.seed, cells, trial),
        decay=cfg.decay, delta=cfg.delta, gap_steps=cfg.gap_steps,
        refresh=cfg.refresh, learning=cfg.learning,
    )
    return np.array([CODE[o.result] for o in outcomes], dtype=np.int8)


def run_experiment(config: ExperimentConfig) -> OutcomeLog:
    tasks = [(c, t) for c in config.cell_counts for t in range(config.trials)]
    cfg = {f.name: getattr(config, f.name) for f in fields(config)}
    cfg.update(out_dir=None, trace=False, workers=1)
    args = [(c, t, cfg) for c, t in tasks]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_trial_task, args))
    else:
        results = [_trial_task(a) for a in args]
    codes = np.stack(results).reshape(len(config.cell_counts), config.trials, config.episodes)
    return OutcomeLog(list(config.cell_counts), config.trials, config.episodes, codes)


@dataclass(frozen=True)
class BlockRate:
    cells: int
    block_end: int
    pos: float
    neg: float
    zero: float
    partial: bool = False


def block_rates(log: OutcomeLog, block: int = BLOCK) -> list[BlockRate]:
    """Outcome fractions over each block of episodes, pooled over trials.

    A trailing block shorter than ``block`` is reported with ``partial=True``.
    """
    rates = []
    for i, cells in enumerate(log.cell_counts):
        for start in range(0, log.episodes, block):
            end = min(start + block, log.episodes)
            chunk = log.codes[i, :, start:end]
            pos, neg, zero = (float(np.mean(chunk == CODE[o])) for o in OUTCOMES)
            rates.append(BlockRate(cells, end, pos, neg, zero, partial=end - start < block))
    return rates


def smoothed_rates(log: OutcomeLog, window: int = BLOCK) -> dict[Outcome, np.ndarray]:
    """Per outcome, a (cell count, episode) array of the trailing-window rate averaged over trials."""
    out = {}
    for o in OUTCOMES:
        hits = (log.codes == CODE[o]).mean(axis=1)  # (cells, episodes)
        csum = np.cumsum(hits, axis=1)
        lagged = np.zeros_like(csum)
        lagged[:, window:] = csum[:, :-window]
        n = np.minimum(np.arange(1, log.episodes + 1), window)
        out[o] = (csum - lagged) / n
    return out


def _fmt(x: float) -> str:
    return repr(float(x))


def write_outcomes_csv(log: OutcomeLog, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["cells", "trial", "episode", "result"])
        for cells, trial, episode, result in log.rows():
            w.writerow([cells, trial, episode, result.value])


def write_block_rates_csv(rates: Sequence[BlockRate], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["cells", "block_end", "pos", "neg", "zero"])
        for r in rates:
            w.writerow([r.cells, r.block_end, _fmt(r.pos), _fmt(r.neg), _fmt(r.zero)])


def format_trace_event(cells: int, trial: int, event: dict[str, Any]) -> Optional[str]:
    if "config" in event:
        return f"# cells={cells} trial={trial} episode={event['episode']} {event['config']}"
    c = event["candidates"]
    line = (
        f"cells={cells} trial={trial} episode={event['episode']} step={event['step']} "
        f"bits={event['bits']} salient={','.join(event['salient'])} "
        f"cands=P{c['Positive']}/N{c['Negative']}/U{c['Neutral']} "
        f"action={event['action']} stored={event['record']}@{event['cell']}"
    )
    if "outcome" in event:
        line += f" prediction={event['prediction'] or '-'} outcome={event['outcome']}"
    return line


def collect_traces(config: ExperimentConfig, trial: int = 0) -> tuple[list[str], list[str]]:
    """Per-step agent trace and environment rows for one trial of every cell count."""
    agent_lines: list[str] = []
    env_lines = ["trial,episode,phase,bits,cued,dummy,sample,target"]
    for cells in config.cell_counts:
        def hook(event, cells=cells):
            if "config" in event:
                env_lines.extend(env.trace_lines(trial, event["episode"], event["config"]))
            agent_lines.append(format_trace_event(cells, trial, event))

        run_trial(
            cells, config.episodes, trial_seed(config.seed, cells, trial),
            decay=config.decay, delta=config.delta, gap_steps=config.gap_steps,
            refresh=config.refresh, learning=config.learning, trace=hook,
        )
    return agent_lines, env_lines


def emit(log: OutcomeLog, rates: Sequence[BlockRate], config: ExperimentConfig) -> list[Path]:
    if config.out_dir is None:
        raise ValueError("config.out_dir is not set")
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    path = out / "outcomes.csv"
    write_outcomes_csv(log, path)
    written.append(path)

    full = [r for r in rates if not r.partial]
    partial = [r for r in rates if r.partial]
    path = out / "block_rates.csv"
    write_block_rates_csv(full, path)
    written.append(path)
    if partial:
        logger.warning("episode count %d is not a multiple of %d; partial block written separately",
                    config.episodes, BLOCK)
        path = out / "block_rates_partial.csv"
        write_block_rates_csv(partial, path)
        written.append(path)

    written.extend(write_learning_curves(smoothed_rates(log), log.cell_counts, out))

    if config.trace:
        agent_lines, env_lines = collect_traces(config)
        path = out / "trace.txt"
        path.write_text("\n".join(agent_lines) + "\n")
        written.append(path)
        path = out / "env_trace.csv"
        path.write_text("\n".join(env_lines) + "\n")
        written.append(path)
    return written


def table(rates: Sequence[BlockRate]) -> str:
    """Block rates laid out like the published table: one row per block end, +/-/0 per cell count."""
    cells = sorted({r.cells for r in rates})
    ends = sorted({r.block_end for r in rates})
    by = {(r.cells, r.block_end): r for r in rates}
    head = "Eps. " + " ".join(f"{c:>17}" for c in cells)
    sub = "     " + " ".join(f"{'+':>5} {'-':>5} {'0':>5}" for _ in cells)
    lines = [head, sub]
    for end in ends:
        row = [f"{end:<4}"]
        for c in cells:
            r = by.get((c, end))
            row.append("      n/a        " if r is None else f"{r.pos:5.2f} {r.neg:5.2f} {r.zero:5.2f}")
        lines.append(" ".join(row))
    return "\n".join(lines)
