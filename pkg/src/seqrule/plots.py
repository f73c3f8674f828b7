"""Minimal SVG line charts for the learning curves (no plotting dependency)."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence
from xml.sax.saxutils import escape

import numpy as np

# blue, red, yellow, green, orange for 100..500 cells; cycled for other sweeps
PALETTE = ["#1f5fbf", "#d62728", "#e6c229", "#2ca02c", "#ff7f0e", "#7f7f7f", "#9467bd"]

WIDTH, HEIGHT = 640, 400
LEFT, RIGHT, TOP, BOTTOM = 60, 130, 40, 50

TITLES = {
    "Positive": "Successful hypotheses (positive)",
    "Zero": "No hypothesis found (zero)",
    "Negative": "Unsuccessful hypotheses (negative)",
}


def line_chart(series: Mapping[str, np.ndarray], title: str, xlabel: str, ylabel: str) -> str:
    """Render equal-length series (x = 1..n, y in [0, 1]) as an SVG document."""
    n = max(len(y) for y in series.values())
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def sx(x):
        return LEFT + (x - 1) / max(n - 1, 1) * pw

    def sy(y):
        return TOP + (1.0 - y) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="15">{escape(title)}</text>',
    ]
    for k in range(6):
        y = k / 5
        out.append(f'<line x1="{LEFT}" y1="{sy(y):.1f}" x2="{LEFT + pw}" y2="{sy(y):.1f}" stroke="#ddd"/>')
        out.append(f'<text x="{LEFT - 6}" y="{sy(y) + 4:.1f}" text-anchor="end">{y:.1f}</text>')
    step = max(1, int(round(n / 5 / 10)) * 10) if n > 10 else 1
    for x in [1, *range(step, n + 1, step)]:
        out.append(f'<line x1="{sx(x):.1f}" y1="{TOP + ph}" x2="{sx(x):.1f}" y2="{TOP + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{sx(x):.1f}" y="{TOP + ph + 18}" text-anchor="middle">{x}</text>')
    out.append(f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    out.append(f'<text x="{LEFT + pw / 2:.1f}" y="{HEIGHT - 10}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(
        f'<text x="16" y="{TOP + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {TOP + ph / 2:.1f})">{escape(ylabel)}</text>'
    )
    for i, (name, ys) in enumerate(series.items()):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{sx(x + 1):.1f},{sy(float(y)):.1f}" for x, y in enumerate(ys))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.6" points="{pts}"/>')
        ly = TOP + 14 + 18 * i
        out.append(f'<line x1="{LEFT + pw + 12}" y1="{ly}" x2="{LEFT + pw + 32}" y2="{ly}" stroke="{color}" stroke-width="3"/>')
        out.append(f'<text x="{LEFT + pw + 38}" y="{ly + 4}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_learning_curves(smoothed, cell_counts: Sequence[int], out_dir: Path) -> list[Path]:
    """One SVG per outcome class; ``smoothed`` maps Outcome -> (cells, episodes) array."""
    paths = []
    for outcome, arr in smoothed.items():
        series = {f"{c} cells": arr[i] for i, c in enumerate(cell_counts)}
        svg = line_chart(
            series, TITLES[outcome.value],
            "episode (trailing 40-episode mean, averaged over trials)", "rate",
        )
        path = Path(out_dir) / f"{outcome.value.lower()}.svg"
        path.write_text(svg)
        paths.append(path)
    return paths
