"""Render run-report figures to files, next to the delimited report."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render_figures(report, out_dir) -> list[Path]:
    """Write PNGs summarizing one run; returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if report.rows:
        idx = [r.index for r in report.rows]
        pos = [r.count if r.polarity == "+" else 0 for r in report.rows]
        neg = [-r.count if r.polarity == "-" else 0 for r in report.rows]
        fig, ax = plt.subplots(figsize=(7, 3))
        ax.bar(idx, pos, color="tab:green", label="positive")
        ax.bar(idx, neg, color="tab:red", label="negative")
        ax.axhline(0, color="black", linewidth=0.6)
        ax.set_xlabel("operation")
        ax.set_ylabel("matches")
        ax.legend(loc="best", fontsize=8)
        fig.tight_layout()
        path = out / "matches_per_op.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)

        fig, ax = plt.subplots(figsize=(7, 3))
        ax.plot(idx, [r.stats.visited_edges for r in report.rows], label="visited edges")
        ax.plot(idx, [r.stats.updated_vertices for r in report.rows], label="updated vertices")
        ax.plot(idx, [r.stats.e_dcs_size for r in report.rows], label="changed index edges")
        ax.set_xlabel("operation")
        ax.set_ylabel("count")
        ax.legend(loc="best", fontsize=8)
        fig.tight_layout()
        path = out / "index_activity.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)

    fig, ax = plt.subplots(figsize=(5, 3))
    cells = [
        ("insert\nupdate", report.insert_update_seconds),
        ("insert\nbacktrack", report.insert_match_seconds),
        ("delete\nupdate", report.delete_update_seconds),
        ("delete\nbacktrack", report.delete_match_seconds),
    ]
    ax.bar([c[0] for c in cells], [c[1] for c in cells], color="tab:blue")
    ax.set_ylabel("seconds")
    fig.tight_layout()
    path = out / "phase_times.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)
    return written
