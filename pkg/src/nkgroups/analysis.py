"""Aggregation of run records into per-cell summaries and exact partial
dependence by marginalisation over the complementary factors.

On a fully enumerated factorial grid the unweighted mean of cell means
equals the partial dependence of any perfect-fit model of the grid, so no
surrogate regression is involved.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
import pandas as pd

FACTORS = ("k", "pattern", "tau", "learn_prob")

_TAU_ORDER = {"never": 0}


class MissingCellsError(ValueError):
    """The grid lacks cells needed for an exact marginalisation."""


@dataclass(frozen=True)
class CellSummary:
    k: int
    pattern: str
    tau: str
    learn_prob: float
    mean_normalized: float
    stderr: float
    n_obs: int


@dataclass(frozen=True)
class PartialDependenceTable:
    scope: tuple[str, ...]
    table: pd.DataFrame  # scope columns + "pd"


def _tau_sort_key(value: str):
    return _TAU_ORDER.get(value, int(value) if str(value).isdigit() else 10**9)


def records_to_frame(records) -> pd.DataFrame:
    if isinstance(records, pd.DataFrame):
        return records
    frame = pd.DataFrame.from_records(records, columns=type(records[0])._fields)
    return frame


def replication_means(records) -> pd.DataFrame:
    """Mean normalized performance per (cell, replication); the unit used
    for dispersion estimates, respecting within-run autocorrelation."""
    frame = records_to_frame(records)
    group_cols = ["scenario_id", *FACTORS, "replication"]
    # canonical order so aggregation is exactly record-order invariant
    frame = frame.sort_values([*group_cols, "t"], kind="stable")
    out = (
        frame.groupby(group_cols, sort=False)["normalized"]
        .agg(mean_normalized="mean", n_obs="size")
        .reset_index()
    )
    return out


def summarize(records) -> list[CellSummary]:
    """Per-cell mean and standard error (over replication means)."""
    if records is None or len(records) == 0:
        raise ValueError("no records to summarise")
    reps = records if isinstance(records, pd.DataFrame) and "mean_normalized" in getattr(records, "columns", ()) else replication_means(records)
    return summaries_from_replication_means(reps)


def summaries_from_replication_means(reps: pd.DataFrame) -> list[CellSummary]:
    if len(reps) == 0:
        raise ValueError("no records to summarise")
    out = []
    for levels, grp in reps.groupby(list(FACTORS), sort=False):
        means = grp["mean_normalized"].to_numpy()
        stderr = float(np.std(means, ddof=1) / np.sqrt(len(means))) if len(means) > 1 else 0.0
        out.append(
            CellSummary(
                k=int(levels[0]),
                pattern=str(levels[1]),
                tau=str(levels[2]),
                learn_prob=float(levels[3]),
                mean_normalized=float(np.mean(means)),
                stderr=stderr,
                n_obs=int(grp["n_obs"].sum()),
            )
        )
    return out


def summaries_to_frame(summaries) -> pd.DataFrame:
    if isinstance(summaries, pd.DataFrame):
        return summaries
    return pd.DataFrame([s.__dict__ for s in summaries])


def _sorted_levels(frame: pd.DataFrame, factor: str) -> list:
    levels = frame[factor].unique().tolist()
    if factor == "tau":
        return sorted(levels, key=_tau_sort_key)
    return sorted(levels)


def partial_dependence(summaries, scope) -> PartialDependenceTable:
    """Unweighted mean of cell means per scope level, marginalising the
    complementary factors; errors if any complementary cell is missing."""
    if isinstance(scope, str):
        scope = (scope,)
    scope = tuple(scope)
    if not 1 <= len(scope) <= 2:
        raise ValueError("scope must name one or two factors")
    for f in scope:
        if f not in FACTORS:
            raise ValueError(f"unknown factor {f!r}")
    frame = summaries_to_frame(summaries)
    comp = [f for f in FACTORS if f not in scope and frame[f].nunique() > 0]
    comp = [f for f in comp if f not in scope]
    comp_levels = {f: _sorted_levels(frame, f) for f in comp}
    expected = set(itertools.product(*(comp_levels[f] for f in comp)))

    rows = []
    for levels, grp in frame.groupby(list(scope), sort=False):
        if not isinstance(levels, tuple):
            levels = (levels,)
        present = set(map(tuple, grp[comp].itertuples(index=False, name=None))) if comp else set()
        if comp and present != expected:
            missing = sorted(expected - present)
            raise MissingCellsError(
                f"scope level {dict(zip(scope, levels))} is missing complementary cells: {missing[:10]}"
                + ("..." if len(missing) > 10 else "")
            )
        rows.append((*levels, float(grp["mean_normalized"].mean())))

    table = pd.DataFrame(rows, columns=[*scope, "pd"])
    sort_keys = [table[f].map(_tau_sort_key) if f == "tau" else table[f] for f in scope]
    table = table.iloc[np.lexsort([k.to_numpy() for k in reversed(sort_keys)])].reset_index(drop=True)
    return PartialDependenceTable(scope=scope, table=table)


def _require_levels(frame: pd.DataFrame, factor: str, levels) -> None:
    have = set(frame[factor].unique().tolist())
    missing = [lv for lv in levels if lv not in have]
    if missing:
        raise MissingCellsError(f"factor {factor!r} is missing levels {missing}")


def figure_tables(summaries) -> dict[str, pd.DataFrame]:
    """Tidy long-format tables backing the four figure families:

    - pd_tau / pd_learn_prob / pd_k / pd_pattern: single-factor partial
      dependence over the full grid (overview panels);
    - learning: cell means conditioned on the block pattern (learning
      probability curves per adaptation cadence and complexity);
    - structure: cell means conditioned on learn_prob = 0 (structure
      bars per adaptation cadence and complexity);
    - surfaces: all cell means (learning x pattern surfaces).
    """
    frame = summaries_to_frame(summaries)
    out = {}
    for factor in ("tau", "learn_prob", "k", "pattern"):
        out[f"pd_{factor}"] = partial_dependence(frame, (factor,)).table

    _require_levels(frame, "pattern", ["block"])
    learning = frame[frame["pattern"] == "block"]
    out["learning"] = (
        learning[["k", "tau", "learn_prob", "mean_normalized", "stderr"]]
        .sort_values(["k", "tau", "learn_prob"], key=lambda s: s.map(_tau_sort_key) if s.name == "tau" else s)
        .reset_index(drop=True)
    )

    if 0.0 not in set(frame["learn_prob"].unique().tolist()):
        raise MissingCellsError("structure table requires learn_prob = 0 cells")
    structure = frame[frame["learn_prob"] == 0.0]
    out["structure"] = (
        structure[["k", "pattern", "tau", "mean_normalized", "stderr"]]
        .sort_values(["k", "pattern", "tau"], key=lambda s: s.map(_tau_sort_key) if s.name == "tau" else s)
        .reset_index(drop=True)
    )

    out["surfaces"] = (
        frame[["k", "pattern", "tau", "learn_prob", "mean_normalized"]]
        .sort_values(["k", "pattern", "tau", "learn_prob"], key=lambda s: s.map(_tau_sort_key) if s.name == "tau" else s)
        .reset_index(drop=True)
    )
    return out
