"""Static figure panels from nkgroups result tables.

Four kinds, matching the tables the simulation CLI writes:

- ``overview``: the four single-factor partial-dependence tables
  (``pd_tau.csv``, ``pd_learn_prob.csv``, ``pd_k.csv``, ``pd_pattern.csv``)
  as one 2 x 2 panel figure;
- ``learning``: learning-probability curves per adaptation cadence from
  the block-pattern rows of ``cells.csv``, one panel per K;
- ``structure``: structure-by-cadence bars from the no-learning rows of
  ``cells.csv``, one panel per K;
- ``surfaces``: learning x pattern heat maps of all cell means, one
  panel per (K, cadence).

Rendering is a pure function of the table contents and style options;
no statistics are computed here beyond plotting transforms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

KINDS = ("overview", "learning", "structure", "surfaces")

CELL_COLUMNS = ["k", "pattern", "tau", "learn_prob", "mean_normalized", "stderr"]
PD_TABLES = {
    "pd_tau": ["tau", "pd"],
    "pd_learn_prob": ["learn_prob", "pd"],
    "pd_k": ["k", "pd"],
    "pd_pattern": ["pattern", "pd"],
}

_HASH_SALT = "nkfigures"


class SchemaError(ValueError):
    """Input table does not match the schema the kind requires."""


@dataclass(frozen=True)
class StyleOptions:
    panel_width: float = 3.4
    panel_height: float = 2.6
    value_label: str = "normalized performance"
    show_legend: bool = True


@dataclass(frozen=True)
class FigureRequest:
    kind: str
    in_path: str
    out_path: str
    style: StyleOptions = field(default_factory=StyleOptions)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")


def _tau_sort_key(value) -> float:
    text = str(value)
    return -1.0 if text == "never" else float(text)


def _check_columns(frame: pd.DataFrame, required, source: str) -> None:
    missing = [c for c in required if c not in frame.columns]
    if missing:
        raise SchemaError(f"{source}: missing columns {missing}; found {list(frame.columns)}")


def load_cells(path) -> pd.DataFrame:
    frame = pd.read_csv(path)
    _check_columns(frame, CELL_COLUMNS, str(path))
    return frame


def load_pd_tables(path) -> dict[str, pd.DataFrame]:
    """The four single-factor pd tables; `path` is the directory that
    holds them (the simulation CLI's output directory)."""
    directory = Path(path)
    if directory.is_file():
        directory = directory.parent
    out = {}
    for name, columns in PD_TABLES.items():
        table_path = directory / f"{name}.csv"
        if not table_path.exists():
            raise SchemaError(f"{table_path}: file not found (overview needs all of {sorted(PD_TABLES)})")
        frame = pd.read_csv(table_path)
        _check_columns(frame, columns, str(table_path))
        out[name] = frame
    return out


def _blank(ax, note: str) -> None:
    ax.set_xticks([])
    ax.set_yticks([])
    ax.text(0.5, 0.5, note, ha="center", va="center", transform=ax.transAxes, color="0.5")


def _new_figure(n_rows: int, n_cols: int, style: StyleOptions):
    fig, axes = plt.subplots(
        n_rows,
        n_cols,
        figsize=(style.panel_width * n_cols, style.panel_height * n_rows),
        squeeze=False,
        constrained_layout=True,
    )
    return fig, axes


def build_overview(tables: dict[str, pd.DataFrame], style: StyleOptions = StyleOptions()):
    """One panel per moderating factor: bars for the discrete factors,
    a line for the learning probability."""
    fig, axes = _new_figure(2, 2, style)
    specs = [
        ("pd_tau", "tau", axes[0][0], "A: adaptation cadence"),
        ("pd_learn_prob", "learn_prob", axes[0][1], "B: learning probability"),
        ("pd_k", "k", axes[1][0], "C: complexity K"),
        ("pd_pattern", "pattern", axes[1][1], "D: interdependence pattern"),
    ]
    for name, factor, ax, title in specs:
        table = tables[name]
        ax.set_title(title, fontsize=9)
        if len(table) == 0:
            _blank(ax, "no data")
            continue
        if factor == "learn_prob":
            table = table.sort_values(factor)
            ax.plot(table[factor], table["pd"], marker="o", ms=3, color="C0")
            ax.set_xlabel(factor)
        else:
            if factor == "tau":
                table = table.sort_values(factor, key=lambda s: s.map(_tau_sort_key))
            labels = table[factor].astype(str)
            ax.bar(labels, table["pd"], color="C0")
            ax.set_xlabel(factor)
            if factor == "pattern":
                ax.tick_params(axis="x", labelrotation=45, labelsize=7)
        ax.set_ylabel(style.value_label, fontsize=8)
    return fig


def build_learning(cells: pd.DataFrame, style: StyleOptions = StyleOptions()):
    """Block-pattern cell means against learning probability, one curve
    per adaptation cadence, one panel per K."""
    block = cells[cells["pattern"] == "block"]
    k_levels = sorted(block["k"].unique())
    if not k_levels:
        fig, axes = _new_figure(1, 1, style)
        _blank(axes[0][0], "no data")
        return fig
    fig, axes = _new_figure(1, len(k_levels), style)
    for ax, k in zip(axes[0], k_levels):
        panel = block[block["k"] == k]
        for i, tau in enumerate(sorted(panel["tau"].unique(), key=_tau_sort_key)):
            curve = panel[panel["tau"] == tau].sort_values("learn_prob")
            ax.errorbar(
                curve["learn_prob"],
                curve["mean_normalized"],
                yerr=curve["stderr"],
                marker="o",
                ms=3,
                capsize=2,
                color=f"C{i}",
                label=f"tau={tau}",
            )
        ax.set_title(f"K = {k}", fontsize=9)
        ax.set_xlabel("learning probability")
        ax.set_ylabel(style.value_label, fontsize=8)
        if style.show_legend:
            ax.legend(fontsize=7)
    return fig


def build_structure(cells: pd.DataFrame, style: StyleOptions = StyleOptions()):
    """No-learning cell means, grouped bars pattern x cadence, one panel
    per K."""
    frame = cells[cells["learn_prob"] == 0.0]
    k_levels = sorted(frame["k"].unique())
    if not k_levels:
        fig, axes = _new_figure(1, 1, style)
        _blank(axes[0][0], "no data")
        return fig
    fig, axes = _new_figure(1, len(k_levels), style)
    for ax, k in zip(axes[0], k_levels):
        panel = frame[frame["k"] == k]
        patterns = sorted(panel["pattern"].unique())
        taus = sorted(panel["tau"].unique(), key=_tau_sort_key)
        width = 0.8 / max(1, len(taus))
        x = np.arange(len(patterns))
        for i, tau in enumerate(taus):
            sub = panel[panel["tau"] == tau].set_index("pattern")
            heights = [sub.loc[p, "mean_normalized"] if p in sub.index else 0.0 for p in patterns]
            errors = [sub.loc[p, "stderr"] if p in sub.index else 0.0 for p in patterns]
            ax.bar(x + i * width, heights, width, yerr=errors, capsize=2, color=f"C{i}", label=f"tau={tau}")
        ax.set_xticks(x + width * (len(taus) - 1) / 2)
        ax.set_xticklabels(patterns, rotation=45, fontsize=7)
        ax.set_title(f"K = {k}", fontsize=9)
        ax.set_ylabel(style.value_label, fontsize=8)
        if style.show_legend:
            ax.legend(fontsize=7)
    return fig


def build_surfaces(cells: pd.DataFrame, style: StyleOptions = StyleOptions()):
    """Learning x pattern heat maps of all cell means, one panel per
    (K, cadence)."""
    k_levels = sorted(cells["k"].unique())
    taus = sorted(cells["tau"].unique(), key=_tau_sort_key)
    if not k_levels or not taus:
        fig, axes = _new_figure(1, 1, style)
        _blank(axes[0][0], "no data")
        return fig
    fig, axes = _new_figure(len(k_levels), len(taus), style)
    for row, k in enumerate(k_levels):
        for col, tau in enumerate(taus):
            ax = axes[row][col]
            panel = cells[(cells["k"] == k) & (cells["tau"] == tau)]
            grid = panel.pivot_table(index="pattern", columns="learn_prob", values="mean_normalized", sort=True)
            if grid.empty:
                _blank(ax, "no data")
                continue
            image = ax.imshow(grid.to_numpy(), aspect="auto", origin="upper", cmap="viridis")
            ax.set_yticks(range(len(grid.index)), grid.index, fontsize=6)
            ax.set_xticks(range(len(grid.columns)), [f"{p:g}" for p in grid.columns], fontsize=6)
            ax.set_title(f"K = {k}, tau = {tau}", fontsize=8)
            ax.set_xlabel("learning probability", fontsize=7)
            fig.colorbar(image, ax=ax, shrink=0.85)
    return fig


def build_figure(kind: str, in_path, style: StyleOptions = StyleOptions()):
    if kind == "overview":
        return build_overview(load_pd_tables(in_path), style)
    builders = {"learning": build_learning, "structure": build_structure, "surfaces": build_surfaces}
    if kind not in builders:
        raise ValueError(f"unknown figure kind {kind!r}; expected one of {KINDS}")
    return builders[kind](load_cells(in_path), style)


def save_figure(fig, out_path) -> None:
    """Write the figure with timestamp-free metadata and a fixed hash
    salt so identical inputs give byte-identical files."""
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with plt.rc_context({"svg.hashsalt": _HASH_SALT}):
        metadata = {"Date": None} if out_path.suffix.lower() == ".svg" else None
        fig.savefig(out_path, metadata=metadata)
    plt.close(fig)


def render(request: FigureRequest) -> Path:
    fig = build_figure(request.kind, request.in_path, request.style)
    save_figure(fig, request.out_path)
    return Path(request.out_path)
