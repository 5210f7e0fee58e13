"""Report rendering: delimited tables plus matplotlib figures."""
from __future__ import annotations

import os


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def write_growth_report(report_dir: str, name: str, profile) -> "list[str]":
    """TSV of the measured points and a log-log figure with the fit."""
    os.makedirs(report_dir, exist_ok=True)
    tsv_path = os.path.join(report_dir, f"{name}_growth.tsv")
    with open(tsv_path, "w") as fh:
        fh.write("input_leaves\toutput_leaves\n")
        for x, y in profile.points:
            fh.write(f"{x}\t{y}\n")

    import numpy as np

    plt = _pyplot()
    xs = np.array([p[0] for p in profile.points], dtype=float)
    ys = np.array([p[1] for p in profile.points], dtype=float)
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.loglog(xs, ys, "o", label="measured")
    if np.ptp(xs) > 0:
        grid = np.geomspace(xs.min(), xs.max(), 64)
        anchor = ys[0] / xs[0] ** profile.slope if xs[0] > 0 else 1.0
        ax.loglog(grid, anchor * grid ** profile.slope, "-",
                  label=f"fit: degree {profile.slope:.3f}")
    ax.set_xlabel("input leaves")
    ax.set_ylabel("output leaves")
    ax.set_title(f"{name}: fitted degree {profile.degree}")
    ax.legend()
    fig.tight_layout()
    png_path = os.path.join(report_dir, f"{name}_growth.png")
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return [tsv_path, png_path]


def write_catalog_report(report_dir: str, reports) -> "list[str]":
    """TSV of per-entry results and a bar figure of trial counts."""
    os.makedirs(report_dir, exist_ok=True)
    tsv_path = os.path.join(report_dir, "catalog_report.tsv")
    with open(tsv_path, "w") as fh:
        fh.write("name\ttrials\tresult\n")
        for rep in reports:
            fh.write(f"{rep.name}\t{rep.trials}\t"
                     f"{'pass' if rep.passed else 'fail'}\n")

    plt = _pyplot()
    names = [rep.name for rep in reports]
    trials = [rep.trials for rep in reports]
    colors = ["tab:green" if rep.passed else "tab:red" for rep in reports]
    fig, ax = plt.subplots(figsize=(max(6, 0.45 * len(names)), 4))
    ax.bar(range(len(names)), trials, color=colors)
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=60, ha="right", fontsize=7)
    ax.set_ylabel("trials run")
    ax.set_title("catalog check (green = pass)")
    fig.tight_layout()
    png_path = os.path.join(report_dir, "catalog_report.png")
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return [tsv_path, png_path]
