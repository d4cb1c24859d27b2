"""Figures for query traces: one horizontal bar per candidate interval."""

from __future__ import annotations

import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

logger = logging.getLogger(__name__)

BAR_KWARGS = dict(height=0.5, edgecolor="black", linewidth=0.6)

PROVENANCE_COLORS = {
    "Asserted": "#4c72b0",
    "DerivedISXB": "#55a868",
    "DerivedISX": "#c9c9c9",
    "DerivedBounds": "#8172b2",
}

SELECTED_COLOR = "#dd8452"

GRID_KWARGS = dict(linestyle="-", color="black", linewidth=0.5, alpha=0.3)


def plot_trace(trace, path, title=None):
    """Render the candidate intervals of ``trace`` to ``path``; returns the path."""
    path = Path(path)
    cands = trace.candidates
    fig, ax = plt.subplots(figsize=(7, 0.45 * max(len(cands), 1) + 1.6))
    for row, s in enumerate(cands):
        color = SELECTED_COLOR if row == trace.selected else PROVENANCE_COLORS[s.provenance.value]
        lo, hi = float(s.interval.lo), float(s.interval.hi)
        ax.barh(row, max(hi - lo, 0.004), left=lo, color=color, **BAR_KWARGS)
    ax.set_yticks(range(len(cands)))
    ax.set_yticklabels(["%s -> %s" % (s.ref_class, s.target) for s in cands])
    ax.invert_yaxis()
    ax.set_xlim(0, 1)
    ax.set_xlabel("frequency interval")
    ax.grid(True, axis="x", **GRID_KWARGS)
    ax.set_title(title or "%s: Prob = %s (%s)" % (trace.query, trace.prob, trace.outcome))
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    logger.debug("wrote %s", path)
    return path
