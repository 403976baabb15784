"""Timing figures for benchmark reports."""
from __future__ import annotations

import statistics
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "axes.labelsize": 10,
    "font.size": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "savefig.dpi": 150,
}


def timing_figure(reports, path: str | Path) -> Path:
    """Scatter matrix vs graph time (log-log) and speedup against model size.

    Points below the diagonal are models where the graph method was faster.
    """
    path = Path(path)
    rows = [r for r in reports if r.t_matrix_ms and r.t_graph_ms]
    with plt.rc_context(STYLE):
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8, 3.6))
        if rows:
            tm = [r.t_matrix_ms for r in rows]
            tg = [r.t_graph_ms for r in rows]
            ax1.scatter(tm, tg, s=12, alpha=0.7)
            lo = min(tm + tg)
            hi = max(tm + tg)
            ax1.plot([lo, hi], [lo, hi], "k--", lw=0.8, label="equal time")
            ax1.set_xscale("log")
            ax1.set_yscale("log")
            ax1.legend(loc="upper left")

            size = [max(r.n, r.r) for r in rows]
            ax2.scatter(size, [r.speedup for r in rows], s=12, alpha=0.7)
            ax2.axhline(1.0, color="k", ls="--", lw=0.8)
            if max(size) > 10 * max(1, min(size)):
                ax2.set_xscale("log")
            ax2.set_yscale("log")
            ax2.set_title(f"median speedup {statistics.median(r.speedup for r in rows):.2f}")
        ax1.set_xlabel("matrix method [ms]")
        ax1.set_ylabel("graph method [ms]")
        ax2.set_xlabel("max(species, reactions)")
        ax2.set_ylabel("matrix time / graph time")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path
