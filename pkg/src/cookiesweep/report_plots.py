"""Figure rendering for measurement reports.

Writes PNG files next to the delimited output; uses the Agg backend so the
CLI works headless.
"""

from __future__ import annotations

from collections import Counter
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .measure import MeasurementReport

_BAR_COLOR = "#4878a8"
_ACCENT = "#b04a4a"


def plot_m_counts(report: MeasurementReport, path: Path) -> Path:
    """Bar chart of the M1/M2/M3 counts against analyzed domains."""
    labels = ["analyzed", "M1 notice", "M2 no choice", "M3 enabled\nby default"]
    values = [
        report.domains_analyzed,
        report.m1_with_notice,
        report.m2_no_choice,
        report.m3_default_enabled,
    ]
    fig, ax = plt.subplots(figsize=(5.5, 3.4))
    bars = ax.bar(labels, values, color=[_BAR_COLOR, _BAR_COLOR, _ACCENT, _ACCENT])
    ax.bar_label(bars, padding=2)
    ax.set_ylabel("domains")
    ax.set_title(f"Cookie notice measurements ({report.region})")
    ax.spines[["top", "right"]].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_status_breakdown(report: MeasurementReport, path: Path) -> Path:
    """Horizontal bars of per-domain pipeline outcomes."""
    counts = Counter(row["status"] for row in report.per_domain)
    statuses = sorted(counts)
    values = [counts[s] for s in statuses]
    fig, ax = plt.subplots(figsize=(5.5, 0.5 + 0.4 * max(len(statuses), 1)))
    bars = ax.barh(statuses, values, color=_BAR_COLOR)
    ax.bar_label(bars, padding=2)
    ax.set_xlabel("domains")
    ax.set_title(f"Pipeline outcomes ({report.region})")
    ax.spines[["top", "right"]].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_report_figures(report: MeasurementReport, out_dir: Path) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return [
        plot_m_counts(report, out_dir / "m_counts.png"),
        plot_status_breakdown(report, out_dir / "status_breakdown.png"),
    ]
