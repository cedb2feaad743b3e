"""One-run period loop, replication management, and normalisation.

The per-period dynamics (adapt if scheduled, members decide against the
previous strategy, performance realised, everyone observes, everyone
learns) run inside a numba kernel operating on integer-encoded solutions
and per-agent known-set bitmasks; everything random is pre-drawn from
named streams so results are a pure function of (config, replication).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np
from numba import njit

from .adaptation import Schedule
from .landscape import Landscape, Pattern, build_landscape, build_matrix, utility_table
from .population import Population, init_population
from .seeding import derive_seed


@dataclass(frozen=True)
class ScenarioConfig:
    """One cell of the factorial grid plus the shared constants."""

    k: int
    pattern: str
    tau: Schedule
    learn_prob: float
    n: int = 12
    m_subtasks: int = 3
    p_agents: int = 30
    horizon: int = 100
    replications: int = 1500
    base_seed: int = 0
    learn_scope: str = "all"  # "all" or "members"

    def __post_init__(self):
        Pattern(self.pattern)
        object.__setattr__(self, "tau", Schedule.parse(self.tau))
        if self.n % self.m_subtasks != 0:
            raise ValueError(f"n={self.n} not divisible by m_subtasks={self.m_subtasks}")
        if not 0.0 <= self.learn_prob <= 1.0:
            raise ValueError(f"learn_prob {self.learn_prob} outside [0, 1]")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if self.p_agents < self.m_subtasks:
            raise ValueError("need at least one agent per subtask")
        if self.learn_scope not in ("all", "members"):
            raise ValueError(f"unknown learn_scope {self.learn_scope!r}")
        if (1 << self.s_len) > 62:
            raise ValueError(f"subtask length {self.s_len} exceeds the bitmask limit")

    @property
    def s_len(self) -> int:
        return self.n // self.m_subtasks

    @property
    def scenario_id(self) -> str:
        return f"k{self.k}-{self.pattern}-tau{self.tau}-p{self.learn_prob:g}"


class RunRecord(NamedTuple):
    scenario_id: str
    k: int
    pattern: str
    tau: str
    learn_prob: float
    replication: int
    t: int
    raw: float
    normalized: float
    adapted: bool
    members: tuple
    solution: int


@dataclass
class RunResult:
    records: list
    landscape: Landscape
    population: Population  # known sets reflect the end of the run
    members: list[int]
    known_trace: list[list[frozenset]] | None = None


@njit(cache=True)
def _best_candidate(util_m, known_mask, base, shift, n_candidates):
    best_c = -1
    best_u = -1.0
    for c in range(n_candidates):
        if (known_mask >> c) & 1:
            u = util_m[base | (c << shift)]
            if u > best_u:  # strict, so the lowest encoding wins ties
                best_u = u
                best_c = c
    return best_c, best_u


@njit(cache=True)
def _period_loop(horizon, every, m_subtasks, s_len, p_agents,
                 util, expertise, known, draws, learn_prob, strategy0,
                 members_only, shifts, inv_masks,
                 out_sol, out_members, out_adapt):
    n_candidates = 1 << s_len
    members = np.full(m_subtasks, -1, dtype=np.int64)
    last = strategy0
    for tt in range(horizon):
        t = tt + 1
        adapt = t == 1 or (every > 0 and (t - 1) % every == 0)
        if adapt:
            for m in range(m_subtasks):
                base = last & inv_masks[m]
                incumbent = members[m]
                best_id = -1
                best_sig = -1.0
                for a in range(p_agents):
                    if expertise[a] != m:
                        continue
                    _, sig = _best_candidate(util[m], known[a], base, shifts[m], n_candidates)
                    if sig > best_sig:
                        best_id = a
                        best_sig = sig
                    elif sig == best_sig and a == incumbent:
                        best_id = a
                members[m] = best_id
        sol = 0
        for m in range(m_subtasks):
            base = last & inv_masks[m]
            c, _ = _best_candidate(util[m], known[members[m]], base, shifts[m], n_candidates)
            sol |= c << shifts[m]
        out_sol[tt] = sol
        out_adapt[tt] = adapt
        for m in range(m_subtasks):
            out_members[tt, m] = members[m]
        last = sol
        for a in range(p_agents):
            if members_only:
                in_group = False
                for m in range(m_subtasks):
                    if members[m] == a:
                        in_group = True
                if not in_group:
                    continue
            km = known[a]
            km_start = km  # both mechanisms act on the start-of-step set
            if draws[tt, a, 0] < learn_prob:
                cnt = 0
                x = km_start
                while x:
                    x &= x - 1
                    cnt += 1
                j = int(draws[tt, a, 1] * cnt)
                elem = -1
                for c in range(n_candidates):
                    if (km_start >> c) & 1:
                        if j == 0:
                            elem = c
                            break
                        j -= 1
                km |= 1 << (elem ^ (1 << int(draws[tt, a, 2] * s_len)))
            if draws[tt, a, 3] < learn_prob:
                m = expertise[a]
                base = last & inv_masks[m]
                best_c, _ = _best_candidate(util[m], km_start, base, shifts[m], n_candidates)
                cnt = 0
                x = km_start
                while x:
                    x &= x - 1
                    cnt += 1
                if cnt > 1:
                    j = int(draws[tt, a, 4] * (cnt - 1))
                    for c in range(n_candidates):
                        if c != best_c and (km_start >> c) & 1:
                            if j == 0:
                                km &= ~(1 << c)
                                break
                            j -= 1
            known[a] = km


def _mask_to_sorted(mask: int) -> list[int]:
    return [c for c in range(mask.bit_length()) if (mask >> c) & 1]


def _simulate(config: ScenarioConfig, replication: int, detailed: bool = False):
    base, rep = config.base_seed, replication
    matrix = build_matrix(config.pattern, config.n, config.k, seed=derive_seed(base, rep, "matrix"))
    landscape = build_landscape(matrix, derive_seed(base, rep, "landscape"))
    population = init_population(config.p_agents, config.m_subtasks, config.s_len, derive_seed(base, rep, "population"))
    strategy0 = int(np.random.default_rng(derive_seed(base, rep, "strategy0")).integers(0, 1 << config.n))

    horizon, p, m_sub, s = config.horizon, config.p_agents, config.m_subtasks, config.s_len
    util = utility_table(landscape, m_sub)
    expertise = np.array([a.expertise for a in population.agents], dtype=np.int64)
    known = np.zeros(p, dtype=np.int64)
    for a in population.agents:
        for c in a.known:
            known[a.id] |= 1 << c
    draws = np.empty((horizon, p, 5))
    for a in population.agents:
        draws[:, a.id, :] = a.rng.random((horizon, 5))
    shifts = np.array([config.n - s * (m + 1) for m in range(m_sub)], dtype=np.int64)
    inv_masks = np.array([~(((1 << s) - 1) << sh) for sh in shifts], dtype=np.int64)

    out_sol = np.empty(horizon, dtype=np.int64)
    out_members = np.empty((horizon, m_sub), dtype=np.int64)
    out_adapt = np.empty(horizon, dtype=np.bool_)
    _period_loop(
        horizon, config.tau.every or 0, m_sub, s, p,
        util, expertise, known, draws, config.learn_prob, strategy0,
        config.learn_scope == "members", shifts, inv_masks,
        out_sol, out_members, out_adapt,
    )

    sid, tau_str = config.scenario_id, str(config.tau)
    gmax = landscape.global_max
    records = [
        RunRecord(
            scenario_id=sid,
            k=config.k,
            pattern=config.pattern,
            tau=tau_str,
            learn_prob=config.learn_prob,
            replication=replication,
            t=tt + 1,
            raw=float(landscape.perf_all[out_sol[tt]]),
            normalized=float(landscape.perf_all[out_sol[tt]]) / gmax,
            adapted=bool(out_adapt[tt]),
            members=tuple(int(x) for x in out_members[tt]),
            solution=int(out_sol[tt]),
        )
        for tt in range(horizon)
    ]
    if not detailed:
        return records
    for a in population.agents:
        a.known = _mask_to_sorted(int(known[a.id]))
    return RunResult(
        records=records,
        landscape=landscape,
        population=population,
        members=[int(x) for x in out_members[-1]],
    )


def run_once(config: ScenarioConfig, replication: int) -> list[RunRecord]:
    """All horizon records of one replication; pure in (config, replication)."""
    return _simulate(config, replication)


def run_detailed(config: ScenarioConfig, replication: int) -> RunResult:
    """Like run_once but also returns the landscape and end-of-run population."""
    return _simulate(config, replication, detailed=True)


def _replication_task(args):
    config, replication = args
    return _simulate(config, replication)


def run_scenario(config: ScenarioConfig, parallelism: int = 1, executor=None) -> list[RunRecord]:
    """All replications of one scenario, in canonical (replication, t)
    order regardless of execution order."""
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    reps = range(config.replications)
    if parallelism == 1 and executor is None:
        chunks = [_simulate(config, r) for r in reps]
    else:
        own = None
        if executor is None:
            from concurrent.futures import ProcessPoolExecutor

            own = executor = ProcessPoolExecutor(max_workers=parallelism)
        try:
            chunksize = max(1, math.ceil(config.replications / (parallelism * 4)))
            chunks = list(executor.map(_replication_task, [(config, r) for r in reps], chunksize=chunksize))
        finally:
            if own is not None:
                own.shutdown()
    return [rec for chunk in chunks for rec in chunk]
