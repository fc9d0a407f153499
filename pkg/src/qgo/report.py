"""Report rendering: per-block CSV tables and matplotlib figures.

Consumes the JSON report emitted by the optimize pipeline and writes
delimited data plus publication-style PNG figures next to it.
"""
from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

ERROR_SWEEP = np.linspace(0.001, 0.025, 25)


def write_blocks_csv(report: dict, path: str) -> None:
    """One row per partitioned block."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["block", "group", "cnot_before", "cnot_after", "distance", "status"])
        for i, b in enumerate(report["blocks"]):
            w.writerow([
                i,
                " ".join(str(q) for q in b["group"]),
                b["cnot_before"],
                b["cnot_after"],
                "" if b["distance"] is None else f"{b['distance']:.3e}",
                b["status"],
            ])


def write_summary_csv(reports: list[tuple[str, dict]], path: str) -> None:
    """One row per report: totals and reduction rate."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["name", "k", "seed", "cnot_before", "cnot_after", "reduction_rate", "blocks"])
        for name, rep in reports:
            w.writerow([
                name, rep["k"], rep["seed"], rep["cnot_before"], rep["cnot_after"],
                f"{rep['reduction_rate']:.4f}", len(rep["blocks"]),
            ])


def render_block_figure(report: dict, path: str) -> None:
    """Grouped bars: CNOT count per block, before vs after synthesis."""
    blocks = report["blocks"]
    idx = np.arange(len(blocks))
    before = [b["cnot_before"] for b in blocks]
    after = [b["cnot_after"] for b in blocks]
    fig, ax = plt.subplots(figsize=(max(4.0, 0.5 * len(blocks) + 2), 3.2))
    ax.bar(idx - 0.2, before, width=0.4, label="original", color="#888888")
    ax.bar(idx + 0.2, after, width=0.4, label="optimized", color="#2166ac")
    ax.set_xlabel("block")
    ax.set_ylabel("CNOT count")
    ax.set_title(f"per-block CNOTs (total {report['cnot_before']} → {report['cnot_after']})")
    ax.set_xticks(idx)
    ax.legend(frameon=False)
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    fig.savefig(path, bbox_inches="tight", dpi=150)
    plt.close(fig)


def render_success_rate_figure(report: dict, path: str) -> None:
    """Modeled circuit success rate (1-p)^cnots over a two-qubit error sweep."""
    fig, ax = plt.subplots(figsize=(4.2, 3.2))
    for label, count, style in (
        ("original", report["cnot_before"], "--"),
        ("optimized", report["cnot_after"], "-"),
    ):
        rates = (1.0 - ERROR_SWEEP) ** count
        ax.plot(ERROR_SWEEP * 100, rates, style, label=f"{label} ({count} CNOTs)")
    ax.set_xlabel("two-qubit gate error (%)")
    ax.set_ylabel("estimated success rate")
    ax.set_ylim(0, 1.02)
    ax.legend(frameon=False)
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    fig.savefig(path, bbox_inches="tight", dpi=150)
    plt.close(fig)


def render_report(name: str, report: dict, out_dir: str) -> list[str]:
    """Write the CSV table and both figures for one report; returns paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = [
        os.path.join(out_dir, f"{name}_blocks.csv"),
        os.path.join(out_dir, f"{name}_cnots.png"),
        os.path.join(out_dir, f"{name}_success_rate.png"),
    ]
    write_blocks_csv(report, paths[0])
    render_block_figure(report, paths[1])
    render_success_rate_figure(report, paths[2])
    return paths
