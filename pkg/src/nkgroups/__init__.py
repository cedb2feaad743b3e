"""Agent-based simulation of adaptive groups solving complex NK tasks."""

__version__ = "0.1.0"

from .adaptation import GroupState, Schedule, adapt_group, collect_signals, should_adapt
from .analysis import (
    CellSummary,
    MissingCellsError,
    PartialDependenceTable,
    figure_tables,
    partial_dependence,
    summarize,
)
from .engine import RunRecord, ScenarioConfig, run_once, run_scenario
from .landscape import (
    InterdependenceMatrix,
    Landscape,
    Pattern,
    build_landscape,
    build_matrix,
    count_local_optima,
    performance,
    subtask_performance,
)
from .population import Agent, Population, best_known, estimate_utility, init_population, learn_step

__all__ = [
    "Agent",
    "CellSummary",
    "GroupState",
    "InterdependenceMatrix",
    "Landscape",
    "MissingCellsError",
    "PartialDependenceTable",
    "Pattern",
    "Population",
    "RunRecord",
    "ScenarioConfig",
    "Schedule",
    "adapt_group",
    "best_known",
    "build_landscape",
    "build_matrix",
    "collect_signals",
    "count_local_optima",
    "estimate_utility",
    "figure_tables",
    "init_population",
    "learn_step",
    "partial_dependence",
    "performance",
    "run_once",
    "run_scenario",
    "should_adapt",
    "subtask_performance",
    "summarize",
]
