"""Figures written next to the CSV/text reports."""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

MARKERS = "osD^vx*"


def rank_distribution_figure(curves: Mapping[str, Sequence[Fraction]], path: str | Path, title: str = "") -> Path:
    """One step curve per rule: average mass at rank k or better."""
    fig, ax = plt.subplots(figsize=(5.5, 3.6))
    for k, (rule, values) in enumerate(curves.items()):
        ks = range(1, len(values) + 1)
        ax.plot(ks, [float(v) for v in values], marker=MARKERS[k % len(MARKERS)], label=rule, drawstyle="steps-post")
    ax.set_xlabel("rank k")
    ax.set_ylabel("mean N(k)")
    if curves:
        m = max(len(v) for v in curves.values())
        ax.set_xticks(range(1, m + 1))
    if title:
        ax.set_title(title, fontsize=10)
    ax.grid(alpha=0.3)
    ax.legend(frameon=False)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def axiom_table_figure(cells, rules: Sequence[str], axioms: Sequence[str], path: str | Path) -> Path:
    """Grid of satisfied/violated cells; red frames mark disagreement with the published table."""
    lookup = {(c.axiom, c.rule): c for c in cells}
    fig, ax = plt.subplots(figsize=(1.2 * len(rules) + 3.2, 0.42 * len(axioms) + 1.0))
    for r, axiom in enumerate(axioms):
        for c, rule in enumerate(rules):
            cell = lookup.get((axiom, rule))
            if cell is None:
                continue
            color = "#cfe8cf" if cell.satisfied else "#f3d0d0"
            edge = "black" if cell.matches else "red"
            ax.add_patch(plt.Rectangle((c, r), 1, 1, facecolor=color, edgecolor=edge, lw=0.8 if cell.matches else 2.2))
            ax.text(c + 0.5, r + 0.5, "✓" if cell.satisfied else "✗", ha="center", va="center", fontsize=11)
    ax.set_xlim(0, len(rules))
    ax.set_ylim(len(axioms), 0)
    ax.set_xticks([c + 0.5 for c in range(len(rules))])
    ax.set_xticklabels([r.upper() for r in rules])
    ax.xaxis.tick_top()
    ax.set_yticks([r + 0.5 for r in range(len(axioms))])
    ax.set_yticklabels(axioms, fontsize=8)
    ax.tick_params(length=0)
    for side in ax.spines.values():
        side.set_visible(False)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
