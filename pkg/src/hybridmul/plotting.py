"""Matplotlib figures for the report path.  Files only; never opens a window."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .cost_model import ThresholdScan  # noqa: E402


def plot_scans(scans: list[ThresholdScan], path, marks: dict[int, int] | None = None) -> None:
    """Model ADP against leaf width, one line per field size.

    ``marks`` maps m to a leaf width to highlight (e.g. the preset threshold).
    """
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for scan in scans:
        leaves = [r.leaf for r in scan.rows]
        ax.plot(leaves, [r.adp for r in scan.rows], marker="o", label=f"m={scan.m}")
        ax.scatter([scan.best_leaf], [scan.row(scan.best_k).adp], s=90, facecolors="none", edgecolors="k")
        if marks and scan.m in marks:
            leaf = marks[scan.m]
            hit = [r for r in scan.rows if r.leaf == leaf]
            if hit:
                ax.scatter([leaf], [hit[0].adp], marker="x", s=70, color="k")
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel("CM leaf width")
    ax.set_ylabel("model ADP (gates x unit delays)")
    ax.set_title("Hybrid cutover scan (o = model optimum, x = preset)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_model_vs_netlist(rows: list[dict], path) -> None:
    """Grouped bars of model and built gate counts.

    ``rows`` carry ``label``, ``model_and``, ``net_and``, ``model_xor``, ``net_xor``.
    """
    labels = [r["label"] for r in rows]
    xs = range(len(rows))
    w = 0.2
    fig, ax = plt.subplots(figsize=(max(6.4, 0.9 * len(rows)), 4.2))
    ax.bar([x - 1.5 * w for x in xs], [r["model_and"] for r in rows], w, label="AND model")
    ax.bar([x - 0.5 * w for x in xs], [r["net_and"] for r in rows], w, label="AND netlist")
    ax.bar([x + 0.5 * w for x in xs], [r["model_xor"] for r in rows], w, label="XOR model")
    ax.bar([x + 1.5 * w for x in xs], [r["net_xor"] for r in rows], w, label="XOR netlist")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, rotation=30, ha="right")
    ax.set_yscale("log")
    ax.set_ylabel("gates")
    ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
