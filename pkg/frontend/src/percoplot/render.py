"""Render campaign CSVs into per-radius multi-series figures.

Input files are the experiment harness CSV outputs; each figure groups
records by radius label and plots one series per label against n.  Cost
figures draw the original cost dashed and the simplified cost solid, on a
fixed palette indexed by radius rank so figures stay comparable across runs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd

KINDS = ("cost", "success", "time", "components", "decay")

# fixed ordered palette indexed by radius rank
PALETTE = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
    "#98df8a", "#ff9896", "#c5b0d5", "#c49c94",
]

REQUIRED_COLUMNS = {
    "cost": ["n", "radius_label", "success", "cost", "simplified_cost"],
    "success": ["n", "radius_label", "success"],
    "time": ["n", "radius_label", "wall_time_ms"],
    "components": ["d", "n", "radius_label", "largest_frac_mean", "second_frac_mean"],
    "decay": ["k", "frequency"],
}


class SchemaError(ValueError):
    """Raised when the input CSV lacks columns the plot kind needs."""


class EmptyGroupError(ValueError):
    """Raised when the grouped data has nothing to draw."""


@dataclass(frozen=True)
class PlotSpec:
    records: str
    kind: str
    out: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown plot kind {self.kind!r}; choose from {KINDS}")


def _radius_rank(label: str) -> tuple:
    m = re.fullmatch(r"r_(\d+)", str(label))
    return (0, int(m.group(1))) if m else (1, str(label))


def _color(rank_index: int) -> str:
    return PALETTE[rank_index % len(PALETTE)]


def load_frame(path: str, kind: str) -> pd.DataFrame:
    frame = pd.read_csv(path)
    missing = [c for c in REQUIRED_COLUMNS[kind] if c not in frame.columns]
    if missing:
        raise SchemaError(f"records file is missing column(s): {', '.join(missing)}")
    return frame


def _sorted_labels(frame: pd.DataFrame) -> list:
    return sorted(frame["radius_label"].unique(), key=_radius_rank)


def _new_axes(title: str, xlabel: str, ylabel: str):
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    return fig, ax


def _plot_cost(frame: pd.DataFrame, ax) -> int:
    series = 0
    ok = frame[frame["success"] == 1]
    if ok.empty:
        raise EmptyGroupError("no successful records to plot")
    for i, label in enumerate(_sorted_labels(ok)):
        grp = ok[ok["radius_label"] == label]
        cost = grp.groupby("n")["cost"].mean()
        ax.plot(cost.index, cost.values, linestyle="--", marker="o",
                color=_color(i), label=f"{label} cost")
        series += 1
        simplified = grp.dropna(subset=["simplified_cost"])
        if not simplified.empty:
            simp = simplified.groupby("n")["simplified_cost"].mean()
            ax.plot(simp.index, simp.values, linestyle="-", marker="s",
                    color=_color(i), label=f"{label} simplified")
            series += 1
    return series


def _plot_metric(frame: pd.DataFrame, ax, column: str, agg: str = "mean") -> int:
    series = 0
    for i, label in enumerate(_sorted_labels(frame)):
        grp = frame[frame["radius_label"] == label]
        values = grp.groupby("n")[column].agg(agg)
        if values.empty:
            continue
        ax.plot(values.index, values.values, linestyle="-", marker="o",
                color=_color(i), label=str(label))
        series += 1
    if series == 0:
        raise EmptyGroupError(f"no data for column {column!r}")
    return series


def _plot_components(frame: pd.DataFrame, ax) -> int:
    series = 0
    for i, label in enumerate(_sorted_labels(frame)):
        grp = frame[frame["radius_label"] == label].sort_values("n")
        if grp.empty:
            continue
        ax.plot(grp["n"], grp["largest_frac_mean"], linestyle="-", marker="o",
                color=_color(i), label=f"{label} largest")
        ax.plot(grp["n"], grp["second_frac_mean"], linestyle="--", marker="s",
                color=_color(i), label=f"{label} second")
        series += 2
    if series == 0:
        raise EmptyGroupError("no component rows to plot")
    return series


def _plot_decay(frame: pd.DataFrame, ax) -> int:
    positive = frame[frame["frequency"] > 0]
    if positive.empty:
        raise EmptyGroupError("no positive reach frequencies to plot")
    ax.semilogy(positive["k"], positive["frequency"], linestyle="-", marker="o",
                color=PALETTE[0], label="reach frequency")
    return 1


def render(spec: PlotSpec) -> str:
    """Draw the figure for the spec and write it to spec.out."""
    frame = load_frame(spec.records, spec.kind)
    if spec.kind == "cost":
        fig, ax = _new_axes("cost vs n", "n", "path cost")
        _plot_cost(frame, ax)
    elif spec.kind == "success":
        fig, ax = _new_axes("success rate vs n", "n", "success rate")
        _plot_metric(frame, ax, "success")
    elif spec.kind == "time":
        fig, ax = _new_axes("wall time vs n", "n", "wall time [ms]")
        _plot_metric(frame, ax, "wall_time_ms")
    elif spec.kind == "components":
        fig, ax = _new_axes("component fractions vs n", "n", "fraction of vertices")
        _plot_components(frame, ax)
    else:
        fig, ax = _new_axes("origin reach decay", "k", "frequency")
        _plot_decay(frame, ax)
    ax.legend(fontsize=7, ncols=2)
    fig.tight_layout()
    fig.savefig(spec.out, dpi=120)
    plt.close(fig)
    return spec.out


def series_count(spec: PlotSpec) -> int:
    """Number of line series the spec would draw (drawn to an off-screen figure)."""
    frame = load_frame(spec.records, spec.kind)
    fig, ax = _new_axes("", "", "")
    try:
        if spec.kind == "cost":
            return _plot_cost(frame, ax)
        if spec.kind == "success":
            return _plot_metric(frame, ax, "success")
        if spec.kind == "time":
            return _plot_metric(frame, ax, "wall_time_ms")
        if spec.kind == "components":
            return _plot_components(frame, ax)
        return _plot_decay(frame, ax)
    finally:
        plt.close(fig)
