"""Report figures written next to the tabular output."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Patch  # noqa: E402
import numpy as np  # noqa: E402

from .quality import ClauseStatus, CoverageReport  # noqa: E402

_STATUS_COLORS = {
    ClauseStatus.COVERED: "#4c9a2a",
    ClauseStatus.MISMATCHED: "#e0a526",
    ClauseStatus.UNCOVERED: "#c0392b",
}


# no timestamps or version strings, so reruns write identical files
_METADATA = {
    ".png": {"Software": None},
    ".svg": {"Date": None, "Creator": None},
    ".pdf": {"CreationDate": None, "Creator": None, "Producer": None},
}


def _save(fig, path) -> None:
    fig.tight_layout()
    suffix = Path(path).suffix.lower()
    with matplotlib.rc_context({"svg.hashsalt": "cascade-sac"}):
        fig.savefig(path, dpi=120, metadata=_METADATA.get(suffix))
    plt.close(fig)


def plot_lopo(report, path, level: str = "requirements") -> None:
    """Grouped precision / recall / F1 bars per held-out project, macro averages as dashed lines."""
    attr = "metrics" if level == "requirements" else "section_metrics"
    names = ("precision", "recall", "f1")
    projects = [f.project for f in report.folds]
    x = np.arange(len(projects))
    width = 0.26
    fig, ax = plt.subplots(figsize=(max(6.0, 1.1 * len(projects) + 2), 3.6))
    macro = report.macro() if level == "requirements" else report.section_macro()
    for i, name in enumerate(names):
        values = [getattr(getattr(f, attr), name) for f in report.folds]
        bars = ax.bar(x + (i - 1) * width, values, width, label=name)
        ax.axhline(macro[name], color=bars.patches[0].get_facecolor(), lw=0.8, ls="--")
    ax.set_xticks(x)
    ax.set_xticklabels(projects, rotation=30, ha="right")
    ax.set_ylim(0, 105)
    ax.set_ylabel("%")
    ax.set_title(f"Leave-one-project-out ({level})")
    ax.legend(loc="upper left", bbox_to_anchor=(1.01, 1.0), fontsize=8, frameon=False)
    _save(fig, path)


def plot_coverage(report: CoverageReport, path) -> None:
    """One bar per clause, colored by coverage status."""
    clauses = [c.clause_id for c in report.clauses]
    colors = [_STATUS_COLORS[c.status] for c in report.clauses]
    fig, ax = plt.subplots(figsize=(6.0, 0.3 * len(clauses) + 1.2))
    y = np.arange(len(clauses))
    ax.barh(y, np.ones(len(clauses)), color=colors)
    ax.set_yticks(y)
    ax.set_yticklabels(clauses, fontsize=8)
    ax.invert_yaxis()
    ax.set_xticks([])
    handles = [Patch(color=c, label=f"{s.value} ({report.count(s)})") for s, c in _STATUS_COLORS.items()]
    ax.legend(handles=handles, loc="upper center", bbox_to_anchor=(0.5, -0.02), ncol=3, fontsize=8, frameon=False)
    ax.set_title(f"Standard coverage {report.ratio} ({report.percent}%)")
    _save(fig, path)
