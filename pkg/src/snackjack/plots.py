"""Matplotlib renderings for the CLI report paths."""

from __future__ import annotations

from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .circuit import MonteCarloResult


def sweep_heatmap(
    gammas: Sequence[float],
    thetas: Sequence[float],
    grid: Sequence[Sequence[float]],
    path: str,
) -> None:
    """Expectation surface over the (gamma, theta) quadrant."""
    data = np.asarray(grid, dtype=float)
    fig, ax = plt.subplots(figsize=(6.0, 4.8))
    im = ax.imshow(
        data,
        origin="lower",
        aspect="auto",
        extent=(thetas[0], thetas[-1], gammas[0], gammas[-1]),
        cmap="viridis",
    )
    ax.set_xlabel(r"$\theta$")
    ax.set_ylabel(r"$\gamma$")
    ax.set_title("best-strategy expectation")
    fig.colorbar(im, ax=ax, label="expected payoff")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def simulation_report(
    result: MonteCarloResult,
    oracle_by_row: Optional[dict[int, float]],
    path: str,
    title: str = "simulated payoff",
) -> None:
    """Sampled means, with per-row bars against oracle dots when available."""
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    if result.per_row:
        rows = sorted(result.per_row)
        means = [result.per_row[r][1] for r in rows]
        errs = [
            2.0 / np.sqrt(result.per_row[r][0]) if result.per_row[r][0] else 0.0
            for r in rows
        ]
        ax.bar(rows, means, yerr=errs, capsize=2, label="simulated", color="#4878d0")
        if oracle_by_row:
            ax.plot(
                rows,
                [oracle_by_row[r] for r in rows],
                "k.",
                markersize=9,
                label="exact",
            )
        ax.set_xlabel("initial class row")
        ax.set_xticks(rows)
    else:
        labels = ["-1", "0", "+1"]
        ax.bar(labels, result.counts_vector, color="#4878d0")
        ax.set_xlabel("payoff")
    ax.set_ylabel("mean payoff" if result.per_row else "hands")
    ax.set_title(f"{title} (n={result.n}, mean={result.mean:.4f})")
    ax.axhline(0.0, color="gray", linewidth=0.6)
    if result.per_row:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
