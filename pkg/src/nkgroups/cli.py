"""Experiment orchestration: config parsing, grid expansion, execution,
and CSV/JSON emission.

Config files are flat ``key = value`` text; list-valued keys take
comma-separated entries. See configs/paper.cfg for the full grid.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import pandas as pd

from . import __version__
from .adaptation import Schedule
from .analysis import figure_tables, replication_means, summaries_from_replication_means
from .engine import ScenarioConfig, run_scenario
from .landscape import Pattern

ENV_OUT = "NKGROUPS_OUT"
ENV_PARALLELISM = "NKGROUPS_PARALLELISM"

RECORD_COLUMNS = ["scenario_id", "k", "pattern", "tau", "learn_prob", "replication", "t", "raw", "normalized", "adapted", "m1", "m2", "m3"]
CELL_COLUMNS = ["k", "pattern", "tau", "learn_prob", "mean_normalized", "stderr", "n_obs"]

PAPER_PATTERNS = [p.value for p in Pattern]
PAPER_TAUS = ["never", "1", "10"]
PAPER_LEARN_PROBS = [round(0.1 * i, 1) for i in range(11)]


@dataclass
class ExperimentSpec:
    """Factor levels plus the shared constants of one experiment."""

    k_levels: list[int] = field(default_factory=lambda: [3, 5])
    patterns: list[str] = field(default_factory=lambda: list(PAPER_PATTERNS))
    taus: list[str] = field(default_factory=lambda: list(PAPER_TAUS))
    learn_probs: list[float] = field(default_factory=lambda: list(PAPER_LEARN_PROBS))
    n: int = 12
    m_subtasks: int = 3
    p_agents: int = 30
    horizon: int = 100
    replications: int = 1500
    base_seed: int = 0
    learn_scope: str = "all"
    out_dir: str = "out"
    parallelism: int = 1
    emit_records: bool = False


def smoke_spec() -> ExperimentSpec:
    return ExperimentSpec(
        k_levels=[3],
        patterns=["block"],
        taus=["10"],
        learn_probs=[0.1],
        horizon=10,
        replications=5,
    )


_LIST_KEYS = {"k_levels", "patterns", "taus", "learn_probs"}
_INT_KEYS = {"n", "m_subtasks", "p_agents", "horizon", "replications", "base_seed", "parallelism"}
_BOOL_KEYS = {"emit_records"}


def parse_config(path) -> ExperimentSpec:
    spec = ExperimentSpec()
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not hasattr(spec, key):
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            if key in _LIST_KEYS:
                items = [v.strip() for v in value.split(",") if v.strip()]
                if key == "k_levels":
                    setattr(spec, key, [int(v) for v in items])
                elif key == "learn_probs":
                    setattr(spec, key, [float(v) for v in items])
                else:
                    setattr(spec, key, items)
            elif key in _INT_KEYS:
                setattr(spec, key, int(value))
            elif key in _BOOL_KEYS:
                setattr(spec, key, value.lower() in ("1", "true", "yes"))
            else:
                setattr(spec, key, value)
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: bad value for {key!r}: {exc}") from exc
    return spec


def expand_grid(spec: ExperimentSpec) -> list[ScenarioConfig]:
    """One ScenarioConfig per factor combination, in (k, pattern, tau,
    learn_prob) order as listed in the spec."""
    configs = []
    for k in spec.k_levels:
        for pattern in spec.patterns:
            Pattern(pattern)
            for tau in spec.taus:
                for lp in spec.learn_probs:
                    configs.append(
                        ScenarioConfig(
                            k=k,
                            pattern=pattern,
                            tau=Schedule.parse(tau),
                            learn_prob=lp,
                            n=spec.n,
                            m_subtasks=spec.m_subtasks,
                            p_agents=spec.p_agents,
                            horizon=spec.horizon,
                            replications=spec.replications,
                            base_seed=spec.base_seed,
                            learn_scope=spec.learn_scope,
                        )
                    )
    return configs


def _records_rows(records):
    for r in records:
        yield [r.scenario_id, r.k, r.pattern, r.tau, repr(r.learn_prob), r.replication, r.t, repr(r.raw), repr(r.normalized), int(r.adapted), *r.members]


def run_experiment(spec: ExperimentSpec) -> dict[str, str]:
    """Run every scenario and write cells.csv, rep_means.csv, the pd_*
    tables, manifest.json, and optionally records.csv. Returns the paths
    written. Partial outputs are removed on failure."""
    started = time.time()
    out_dir = Path(spec.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    configs = expand_grid(spec)
    written: list[Path] = []
    executor = None
    try:
        if spec.parallelism > 1:
            from concurrent.futures import ProcessPoolExecutor

            executor = ProcessPoolExecutor(max_workers=spec.parallelism)

        records_file = records_writer = None
        if spec.emit_records:
            records_path = out_dir / "records.csv"
            written.append(records_path)
            records_file = records_path.open("w", newline="")
            records_writer = csv.writer(records_file)
            records_writer.writerow(RECORD_COLUMNS)

        rep_frames = []
        for config in configs:
            records = run_scenario(config, parallelism=spec.parallelism, executor=executor)
            rep_frames.append(replication_means(records))
            if records_writer is not None:
                records_writer.writerows(_records_rows(records))
        if records_file is not None:
            records_file.close()

        reps = pd.concat(rep_frames, ignore_index=True)
        rep_means_path = out_dir / "rep_means.csv"
        written.append(rep_means_path)
        reps.to_csv(rep_means_path, index=False)

        summaries = summaries_from_replication_means(reps)
        cells = pd.DataFrame([s.__dict__ for s in summaries])[CELL_COLUMNS]
        cells_path = out_dir / "cells.csv"
        written.append(cells_path)
        cells.to_csv(cells_path, index=False)

        paths = {"cells": str(cells_path), "rep_means": str(rep_means_path)}
        if spec.emit_records:
            paths["records"] = str(out_dir / "records.csv")
        try:
            tables = figure_tables(summaries)
        except ValueError:
            tables = {}  # partial grids get cells.csv only
        for name, table in tables.items():
            path = out_dir / f"{name}.csv"
            written.append(path)
            table.to_csv(path, index=False)
            paths[name] = str(path)

        manifest_path = out_dir / "manifest.json"
        written.append(manifest_path)
        manifest = {
            "spec": {k: v for k, v in spec.__dict__.items()},
            "scenarios": len(configs),
            "base_seed": spec.base_seed,
            "version": __version__,
            "wall_time_s": round(time.time() - started, 3),
        }
        manifest_path.write_text(json.dumps(manifest, indent=2) + "\n")
        paths["manifest"] = str(manifest_path)
        return paths
    except BaseException:
        for path in written:
            try:
                path.unlink()
            except OSError:
                pass
        raise
    finally:
        if executor is not None:
            executor.shutdown()


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="nkgroups", description="Batch simulator for adaptive groups on NK tasks")
    parser.add_argument("--config", help="experiment config file (flat key = value)")
    parser.add_argument("--out", help=f"output directory (env {ENV_OUT})")
    parser.add_argument("--parallelism", type=int, help=f"worker processes (env {ENV_PARALLELISM})")
    parser.add_argument("--emit-records", action="store_true", help="also write the full records.csv (large)")
    parser.add_argument("--seed", type=int, help="override the base seed")
    parser.add_argument("--smoke", action="store_true", help="run the built-in tiny grid")
    args = parser.parse_args(argv)

    try:
        if args.smoke:
            spec = smoke_spec()
        elif args.config:
            spec = parse_config(args.config)
        else:
            spec = ExperimentSpec()
        if args.out:
            spec.out_dir = args.out
        elif os.environ.get(ENV_OUT):
            spec.out_dir = os.environ[ENV_OUT]
        if args.parallelism:
            spec.parallelism = args.parallelism
        elif os.environ.get(ENV_PARALLELISM):
            spec.parallelism = int(os.environ[ENV_PARALLELISM])
        if args.emit_records:
            spec.emit_records = True
        if args.seed is not None:
            spec.base_seed = args.seed
        paths = run_experiment(spec)
    except Exception as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    print(json.dumps({"written": paths}, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
