"""Figures written next to the CLI's reports.  Always renders off-screen."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .metrics import DistanceReport  # noqa: E402
from .randomized import ProbabilityReport  # noqa: E402


def _save(fig, path: str | Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return Path(path)


def plot_distance_report(report: DistanceReport, path: str | Path) -> Path:
    """Per-sink d_min next to the refined Singleton bound δ_t + 1."""
    sinks = [s.sink for s in report.sinks]
    x = range(len(sinks))
    bound = [s.redundancy + 1 for s in report.sinks]
    dmin = [s.d_min or 0 for s in report.sinks]
    fig, ax = plt.subplots(figsize=(max(4, 0.6 * len(sinks) + 2), 3.5))
    ax.bar([i - 0.2 for i in x], bound, width=0.4, label="δ_t + 1", color="0.75")
    ax.bar([i + 0.2 for i in x], dmin, width=0.4, label="d_min", color="C0")
    ax.set_xticks(list(x))
    ax.set_xticklabels(sinks, rotation=45 if len(sinks) > 6 else 0)
    ax.set_ylabel("distance")
    ax.set_title(f"rate {report.rate} over GF({report.field}): {'MDS' if report.is_mds else 'not MDS'}")
    ax.legend(frameon=False)
    return _save(fig, path)


def plot_family(reports: Sequence[DistanceReport], path: str | Path) -> Path:
    """d_min against rate for every sink, with the Singleton line."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    rates = [r.rate for r in reports]
    for j, s in enumerate(reports[0].sinks):
        ax.plot(rates, [r.sinks[j].d_min or 0 for r in reports], "o-", label=s.sink, alpha=0.8)
    cut = reports[0].sinks[0].min_cut
    if all(s.min_cut == cut for s in reports[0].sinks):
        ax.plot(rates, [cut - w + 1 for w in rates], "k--", lw=1, label="C_t − ω + 1")
    ax.set_xlabel("rate ω")
    ax.set_ylabel("d_min")
    ax.invert_xaxis()
    if len(reports[0].sinks) <= 8:
        ax.legend(frameon=False, fontsize="small")
    return _save(fig, path)


def plot_probability(report: ProbabilityReport, path: str | Path) -> Path:
    """Empirical success with its Wilson interval against the lower bounds."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.errorbar(
        [0],
        [report.p_hat],
        yerr=[[report.p_hat - report.ci_low], [report.ci_high - report.p_hat]],
        fmt="o",
        capsize=6,
        color="C0",
        label=f"empirical ({report.successes}/{report.trials})",
    )
    styles = iter(["--", ":", "-.", (0, (5, 1))])
    for name, val in report.bounds.items():
        if val is not None:
            ax.axhline(val, ls=next(styles, "--"), color="0.3", lw=1, label=f"bound: {name} = {val:.3f}")
    ax.set_xlim(-1, 1)
    ax.set_xticks([])
    ax.set_ylim(0, 1.02)
    ax.set_ylabel("success probability")
    ax.set_title(f"target: {report.target}")
    ax.legend(frameon=False, fontsize="small", loc="lower right")
    return _save(fig, path)
