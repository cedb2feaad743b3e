"""Signal-based group formation and the adaptation schedule."""

from __future__ import annotations

from dataclasses import dataclass

from .landscape import Landscape
from .population import Population, best_known


@dataclass(frozen=True)
class Schedule:
    """Adaptation cadence: the group always forms at t=1 and thereafter
    re-forms whenever (t - 1) is a multiple of `every` (None = never)."""

    every: int | None

    def __post_init__(self):
        if self.every is not None and self.every < 1:
            raise ValueError(f"adaptation gap must be >= 1, got {self.every}")

    @classmethod
    def parse(cls, value) -> "Schedule":
        if isinstance(value, Schedule):
            return value
        if value is None or (isinstance(value, str) and value.strip().lower() == "never"):
            return cls(every=None)
        return cls(every=int(value))

    def __str__(self) -> str:
        return "never" if self.every is None else str(self.every)


def should_adapt(schedule: Schedule, t: int) -> bool:
    if t < 1:
        raise ValueError(f"period index must be >= 1, got {t}")
    if t == 1:
        return True
    return schedule.every is not None and (t - 1) % schedule.every == 0


@dataclass
class GroupState:
    members: list[int] | None  # agent id per subtask; None before first formation
    last_strategy: int  # full-solution encoding implemented in the previous period


def collect_signals(population: Population, landscape: Landscape, subtask: int, residual, m_subtasks: int = 3) -> list[tuple[int, float]]:
    """Honest signals: each same-expertise agent's best estimated utility."""
    if not 0 <= subtask < m_subtasks:
        raise ValueError(f"subtask {subtask} out of range")
    out = []
    for aid in population.per_subtask[subtask]:
        agent = population.agents[aid]
        _, sig = best_known(agent, landscape, residual, m_subtasks)
        out.append((aid, sig))
    return out


def adapt_group(population: Population, landscape: Landscape, previous: GroupState, m_subtasks: int = 3) -> GroupState:
    """Select, per subtask, the agent signalling the highest estimated
    utility. Ties keep the incumbent if tied, otherwise the lowest id."""
    members = []
    for m in range(m_subtasks):
        incumbent = previous.members[m] if previous.members is not None else -1
        best_id, best_sig = -1, -1.0
        for aid, sig in collect_signals(population, landscape, m, previous.last_strategy, m_subtasks):
            if sig > best_sig:
                best_id, best_sig = aid, sig
            elif sig == best_sig and aid == incumbent:
                best_id = aid
        members.append(best_id)
    return GroupState(members=members, last_strategy=previous.last_strategy)
