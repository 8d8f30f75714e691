"""Report files: CSV rows, JSON summary, plot-data text and rendered figures.

Every statistic in the JSON summary carries exactly one provenance tag in
{certified-bound, estimate, diagnostic}.  CSV and JSON content is a pure
function of (config, seed); wall time lives in a separate "timing" block
that byte-level comparisons are expected to strip.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field

from . import __version__


@dataclass
class RunReport:
    experiment: str
    config_echo: dict
    seed: int
    stats: dict = field(default_factory=dict)   # name -> {value, stderr, provenance}
    wall_s: float = 0.0

    def add(self, name: str, value, provenance: str, stderr=None):
        if provenance not in ("certified-bound", "estimate", "diagnostic"):
            raise ValueError(f"bad provenance tag {provenance!r}")
        self.stats[name] = {"value": value, "stderr": stderr, "provenance": provenance}

    def to_json_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "config": self.config_echo,
            "seed": self.seed,
            "version": __version__,
            "stats": {k: self.stats[k] for k in sorted(self.stats)},
            "timing": {"wall_s": round(self.wall_s, 3)},
        }


def write_csv(path: str, header: list, rows: list):
    """RFC-4180-style CSV with a header row ('\\n' line endings)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow(row)


def write_json(path: str, report: RunReport):
    with open(path, "w") as fh:
        json.dump(report.to_json_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_plotdata(path: str, columns: list, rows: list, comment: str = ""):
    """Whitespace-separated columns, sorted by the first column.

    The sidecar header comments document the column meanings.
    """
    rows = sorted(rows, key=lambda r: r[0])
    with open(path, "w") as fh:
        if comment:
            for line in comment.splitlines():
                fh.write(f"# {line}\n")
        fh.write("# columns: " + " ".join(columns) + "\n")
        for row in rows:
            fh.write(" ".join(_fmt(x) for x in row) + "\n")


def _fmt(x):
    if isinstance(x, float):
        return repr(x)
    return str(x)


def render_figure(path: str, columns: list, rows: list, title: str = "",
                  logy: bool = False, hlines: dict | None = None):
    """Render the plot-data curve to a PNG next to the .dat file."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = sorted(rows, key=lambda r: r[0])
    xs = [r[0] for r in rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for j in range(1, len(columns)):
        ys = [r[j] for r in rows]
        ax.plot(xs, ys, marker="o", markersize=3, linewidth=1.0, label=columns[j])
    if hlines:
        for lbl, y in hlines.items():
            ax.axhline(y, color="gray", linestyle="--", linewidth=0.8, label=lbl)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(columns[0])
    if len(columns) == 2:
        ax.set_ylabel(columns[1])
    if len(columns) > 2 or hlines:
        ax.legend(fontsize=8)
    if title:
        ax.set_title(title, fontsize=10)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def emit_plotdata(out_dir: str, name: str, columns: list, rows: list,
                  comment: str = "", title: str = "", logy: bool = False,
                  hlines: dict | None = None, figures: bool = True) -> list:
    """Write <name>.dat and (unless disabled) render <name>.png; returns paths."""
    paths = []
    dat = os.path.join(out_dir, f"{name}.dat")
    write_plotdata(dat, columns, rows, comment)
    paths.append(dat)
    if figures and rows:
        png = os.path.join(out_dir, f"{name}.png")
        render_figure(png, columns, rows, title=title, logy=logy, hlines=hlines)
        paths.append(png)
    return paths
