"""The agent population: expertise assignment, known-solution sets,
utility estimation, and the per-period discovery/forgetting step.

Subtask solutions are encoded as integers in [0, 2^S), most significant
bit first, matching the full-solution encoding in :mod:`.landscape`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .landscape import Landscape, _as_index, utility_table
from .seeding import derive_seed


@dataclass
class Agent:
    id: int
    expertise: int
    known: list[int]  # sorted ascending, never empty
    rng: np.random.Generator = field(repr=False)


@dataclass
class Population:
    agents: list[Agent]
    per_subtask: list[list[int]]  # agent ids grouped by expertise

    @property
    def size(self) -> int:
        return len(self.agents)


def init_population(p: int, m_subtasks: int, s_len: int, seed) -> Population:
    """Assign expertise uniformly (resampling until every subtask is
    covered) and endow each agent with one random subtask solution."""
    if p < m_subtasks:
        raise ValueError(f"population size {p} cannot cover {m_subtasks} subtasks")
    rng = np.random.default_rng(derive_seed(seed, "assign"))
    while True:
        expertise = rng.integers(0, m_subtasks, size=p)
        if len(set(expertise.tolist())) == m_subtasks:
            break
    endowments = rng.integers(0, 1 << s_len, size=p)
    agents = [
        Agent(
            id=i,
            expertise=int(expertise[i]),
            known=[int(endowments[i])],
            rng=np.random.default_rng(derive_seed(seed, "agent", i)),
        )
        for i in range(p)
    ]
    per_subtask = [[a.id for a in agents if a.expertise == m] for m in range(m_subtasks)]
    return Population(agents=agents, per_subtask=per_subtask)


def _context_index(landscape: Landscape, subtask: int, m_subtasks: int, candidate: int, residual) -> int:
    n = landscape.n
    s = n // m_subtasks
    shift = n - s * (subtask + 1)
    mask = ((1 << s) - 1) << shift
    res_idx = _as_index(residual, n)
    if not 0 <= candidate < (1 << s):
        raise ValueError(f"candidate {candidate} out of range for subtask length {s}")
    return (res_idx & ~mask) | (candidate << shift)


def estimate_utility(agent: Agent, landscape: Landscape, candidate: int, residual, m_subtasks: int = 3) -> float:
    """Estimated utility of implementing `candidate` for the agent's
    subtask while the other subtasks repeat the residual strategy: half
    the own-subtask performance plus half the mean of the others'."""
    full = _context_index(landscape, agent.expertise, m_subtasks, candidate, residual)
    return float(utility_table(landscape, m_subtasks)[agent.expertise][full])


def best_known(agent: Agent, landscape: Landscape, residual, m_subtasks: int = 3) -> tuple[int, float]:
    """Utility-maximising element of the agent's known set against the
    residual strategy; ties go to the lowest encoding."""
    util = utility_table(landscape, m_subtasks)[agent.expertise]
    n = landscape.n
    s = n // m_subtasks
    shift = n - s * (agent.expertise + 1)
    base = _as_index(residual, n) & ~(((1 << s) - 1) << shift)
    best_c, best_u = -1, -1.0
    for c in agent.known:  # ascending, so strict improvement keeps lowest on ties
        u = util[base | (c << shift)]
        if u > best_u:
            best_c, best_u = c, u
    return best_c, float(best_u)


def learn_step(agent: Agent, landscape: Landscape, residual, prob: float, m_subtasks: int = 3, draws=None) -> None:
    """One end-of-period learning step, in place.

    Two independent coin flips at probability `prob`: discovery flips one
    random bit of one random known solution and inserts the result;
    forgetting drops one random known solution other than the current
    best. Both mechanisms act on the set as it stood at the start of the
    step, so a just-discovered solution is never forgotten immediately.
    Always consumes exactly five uniform draws from the agent's stream so
    parallel pre-generation stays aligned.
    """
    if not 0.0 <= prob <= 1.0:
        raise ValueError(f"probability {prob} outside [0, 1]")
    s_len = landscape.n // m_subtasks
    if draws is None:
        draws = agent.rng.random(5)
    known = agent.known
    start = list(known)
    if draws[0] < prob:
        base = start[int(draws[1] * len(start))]
        found = base ^ (1 << int(draws[2] * s_len))
        if found not in known:
            known.append(found)
            known.sort()
    if draws[3] < prob:
        util = utility_table(landscape, m_subtasks)[agent.expertise]
        n = landscape.n
        s = n // m_subtasks
        shift = n - s * (agent.expertise + 1)
        base_idx = _as_index(residual, n) & ~(((1 << s) - 1) << shift)
        best_c, best_u = -1, -1.0
        for c in start:
            u = util[base_idx | (c << shift)]
            if u > best_u:
                best_c, best_u = c, u
        others = [c for c in start if c != best_c]
        if others:
            known.remove(others[int(draws[4] * len(others))])
