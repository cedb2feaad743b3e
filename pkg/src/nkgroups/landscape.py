"""NK task environments: interdependence matrices, contribution tables,
performance evaluation, and exhaustive global-optimum search.

Solutions are length-n bitstrings. Internally a solution is encoded as an
integer with decision 0 in the most significant bit, so "lowest bitstring
value" coincides with the lowest integer encoding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .seeding import derive_seed

ENUMERATION_CAP = 24
_CHUNK = 1 << 16


class Pattern(str, Enum):
    BLOCK = "block"
    CENTRALISED = "centralised"
    DEPENDENT = "dependent"
    HIERARCHICAL = "hierarchical"
    LOCAL = "local"
    RANDOM = "random"


def bits_to_index(bits: Sequence[int]) -> int:
    """Pack a bit sequence (decision 0 first) into the integer encoding."""
    idx = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"non-binary decision value {b!r}")
        idx = (idx << 1) | b
    return idx


def index_to_bits(idx: int, n: int) -> tuple[int, ...]:
    return tuple((idx >> (n - 1 - j)) & 1 for j in range(n))


def _as_index(solution, n: int) -> int:
    if isinstance(solution, (int, np.integer)):
        idx = int(solution)
        if not 0 <= idx < (1 << n):
            raise ValueError(f"solution index {idx} out of range for n={n}")
        return idx
    bits = list(solution)
    if len(bits) != n:
        raise ValueError(f"solution length {len(bits)} != n={n}")
    return bits_to_index(bits)


@dataclass(frozen=True)
class InterdependenceMatrix:
    """Which other decisions each performance contribution depends on.

    Self-dependence is implicit; ``rows[i]`` holds the k off-diagonal
    dependency indices of decision i, sorted ascending.
    """

    n: int
    k: int
    pattern: Pattern
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} rows, got {len(self.rows)}")
        for i, row in enumerate(self.rows):
            if len(row) != self.k or len(set(row)) != self.k:
                raise ValueError(f"row {i} must have exactly k={self.k} distinct entries")
            for j in row:
                if not 0 <= j < self.n:
                    raise ValueError(f"row {i} entry {j} out of range")
                if j == i:
                    raise ValueError(f"row {i} depends on itself")


def matrix_grid(matrix: InterdependenceMatrix) -> str:
    """Render the matrix as an n x n grid of 'x'/'-' (diagonal always 'x')."""
    lines = []
    for i in range(matrix.n):
        deps = set(matrix.rows[i]) | {i}
        lines.append("".join("x" if j in deps else "-" for j in range(matrix.n)))
    return "\n".join(lines)


def _block_rows(n: int, k: int) -> list[tuple[int, ...]]:
    size = k + 1
    if n % size != 0:
        raise ValueError(f"block pattern needs (k+1)={size} to divide n={n}")
    rows = []
    for i in range(n):
        start = (i // size) * size
        rows.append(tuple(j for j in range(start, start + size) if j != i))
    return rows


def _centralised_rows(n: int, k: int) -> list[tuple[int, ...]]:
    rows = []
    for i in range(n):
        if i <= k:
            rows.append(tuple(j for j in range(k + 1) if j != i))
        else:
            rows.append(tuple(range(k)))
    return rows


def _dependent_rows(n: int, k: int) -> list[tuple[int, ...]]:
    if (n, k) == (12, 3):
        rows = _block_rows(8, 3)[:8]
        rows += [(0, 1, 4), (0, 1, 4), (2, 4, 5), (2, 4, 5)]
        return rows
    if (n, k) == (12, 5):
        rows = []
        for r in range(8):
            block = [j for j in range(4 * (r // 4), 4 * (r // 4) + 4) if j != r]
            deps = set(block)
            # extend cyclically through the first 8 indices until degree k
            c = r + 4
            while len(deps) < k:
                j = c % 8
                if j != r:
                    deps.add(j)
                c += 1
            rows.append(tuple(sorted(deps)))
        rows += [(0, 1, 2, 4, 5)] * 4
        return rows
    raise ValueError(f"dependent pattern is defined only for (n, k) in (12, 3)/(12, 5), got ({n}, {k})")


def _hierarchical_rows(n: int, k: int) -> list[tuple[int, ...]]:
    if (n, k) == (12, 3):
        rows = [tuple(j for j in range(4) if j != i) for i in range(4)]
        rows += [(1, 2, 3)] * 8
        return rows
    if (n, k) == (12, 5):
        rows = [tuple(j for j in range(8) if j != i)[:5] for i in range(8)]
        rows += [(0, 1, 2, 4, 5)] * 4
        return rows
    raise ValueError(f"hierarchical pattern is defined only for (n, k) in (12, 3)/(12, 5), got ({n}, {k})")


def _local_rows(n: int, k: int) -> list[tuple[int, ...]]:
    return [tuple(sorted((i - d) % n for d in range(1, k + 1))) for i in range(n)]


def _random_rows(n: int, k: int, rng: np.random.Generator) -> list[tuple[int, ...]]:
    rows = []
    for i in range(n):
        others = np.array([j for j in range(n) if j != i])
        rows.append(tuple(sorted(rng.choice(others, size=k, replace=False).tolist())))
    return rows


def build_matrix(pattern, n: int, k: int, seed=None) -> InterdependenceMatrix:
    """Construct the interdependence matrix for one of the six patterns.

    Non-random patterns are pure functions of (n, k); the random pattern
    additionally requires a seed (or a Generator to draw from).
    """
    pattern = Pattern(pattern)
    if k >= n:
        raise ValueError(f"k={k} must be smaller than n={n}")
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    if pattern is Pattern.BLOCK:
        rows = _block_rows(n, k)
    elif pattern is Pattern.CENTRALISED:
        rows = _centralised_rows(n, k)
    elif pattern is Pattern.DEPENDENT:
        rows = _dependent_rows(n, k)
    elif pattern is Pattern.HIERARCHICAL:
        rows = _hierarchical_rows(n, k)
    elif pattern is Pattern.LOCAL:
        rows = _local_rows(n, k)
    else:
        if seed is None:
            raise ValueError("random pattern requires a seed")
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(derive_seed(seed, "matrix-rows"))
        rows = _random_rows(n, k, rng)
    return InterdependenceMatrix(n=n, k=k, pattern=pattern, rows=tuple(rows))


@dataclass
class Landscape:
    """A realised NK task: matrix, contribution tables, and the cached
    global optimum found by exhaustive enumeration."""

    matrix: InterdependenceMatrix
    tables: np.ndarray  # shape (n, 2^(k+1)), values in [0, 1]
    perf_all: np.ndarray  # shape (2^n,), performance of every solution
    global_max: float
    global_argmax: int
    _subtask_cache: dict = field(default_factory=dict, repr=False)
    _utility_cache: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def k(self) -> int:
        return self.matrix.k


def _contribution_indices(matrix: InterdependenceMatrix, idx: np.ndarray, j: int) -> np.ndarray:
    """Table index for decision j over an array of solution encodings."""
    n, k = matrix.n, matrix.k
    ti = ((idx >> (n - 1 - j)) & 1) << k
    for pos, dep in enumerate(matrix.rows[j]):
        ti = ti | (((idx >> (n - 1 - dep)) & 1) << (k - 1 - pos))
    return ti


def _sum_contributions(matrix: InterdependenceMatrix, tables: np.ndarray, decisions: Iterable[int]) -> np.ndarray:
    size = 1 << matrix.n
    out = np.zeros(size)
    for lo in range(0, size, _CHUNK):
        idx = np.arange(lo, min(lo + _CHUNK, size), dtype=np.int64)
        acc = np.zeros(len(idx))
        for j in decisions:
            acc += tables[j][_contribution_indices(matrix, idx, j)]
        out[lo : lo + len(idx)] = acc
    return out


def build_landscape(matrix: InterdependenceMatrix, seed, cap: int = ENUMERATION_CAP) -> Landscape:
    """Draw uniform contribution tables and enumerate all 2^n solutions to
    cache the global optimum (ties resolved to the lowest encoding)."""
    if matrix.n > cap:
        raise ValueError(f"n={matrix.n} exceeds the enumeration cap {cap}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(derive_seed(seed, "tables"))
    tables = rng.random((matrix.n, 1 << (matrix.k + 1)))
    perf_all = _sum_contributions(matrix, tables, range(matrix.n)) / matrix.n
    argmax = int(np.argmax(perf_all))  # first occurrence = lowest encoding
    return Landscape(
        matrix=matrix,
        tables=tables,
        perf_all=perf_all,
        global_max=float(perf_all[argmax]),
        global_argmax=argmax,
    )


def performance(landscape: Landscape, solution) -> float:
    """Mean of the n contribution lookups for one solution (scalar path,
    independent of the vectorised enumeration)."""
    m = landscape.matrix
    idx = _as_index(solution, m.n)
    total = 0.0
    for j in range(m.n):
        ti = ((idx >> (m.n - 1 - j)) & 1) << m.k
        for pos, dep in enumerate(m.rows[j]):
            ti |= ((idx >> (m.n - 1 - dep)) & 1) << (m.k - 1 - pos)
        total += landscape.tables[j][ti]
    return total / m.n


def subtask_performance(landscape: Landscape, solution, subtask: int, m_subtasks: int = 3) -> float:
    """Mean of the contributions whose decisions belong to one subtask."""
    m = landscape.matrix
    if m.n % m_subtasks != 0:
        raise ValueError(f"n={m.n} not divisible into {m_subtasks} subtasks")
    if not 0 <= subtask < m_subtasks:
        raise ValueError(f"subtask {subtask} out of range [0, {m_subtasks})")
    idx = _as_index(solution, m.n)
    s = m.n // m_subtasks
    total = 0.0
    for j in range(subtask * s, (subtask + 1) * s):
        ti = ((idx >> (m.n - 1 - j)) & 1) << m.k
        for pos, dep in enumerate(m.rows[j]):
            ti |= ((idx >> (m.n - 1 - dep)) & 1) << (m.k - 1 - pos)
        total += landscape.tables[j][ti]
    return total / s


def subtask_performance_table(landscape: Landscape, m_subtasks: int) -> np.ndarray:
    """Per-solution subtask means for all subtasks, shape (M, 2^n). Cached."""
    key = m_subtasks
    if key not in landscape._subtask_cache:
        m = landscape.matrix
        if m.n % m_subtasks != 0:
            raise ValueError(f"n={m.n} not divisible into {m_subtasks} subtasks")
        s = m.n // m_subtasks
        out = np.empty((m_subtasks, 1 << m.n))
        for st in range(m_subtasks):
            out[st] = _sum_contributions(m, landscape.tables, range(st * s, (st + 1) * s)) / s
        landscape._subtask_cache[key] = out
    return landscape._subtask_cache[key]


def utility_table(landscape: Landscape, m_subtasks: int) -> np.ndarray:
    """Per-solution agent utility for each subtask owner, shape (M, 2^n):
    half own-subtask performance, half the mean of the others'. Cached."""
    key = m_subtasks
    if key not in landscape._utility_cache:
        sub = subtask_performance_table(landscape, m_subtasks)
        total = sub.sum(axis=0)
        landscape._utility_cache[key] = 0.5 * (sub + (total - sub) / (m_subtasks - 1))
    return landscape._utility_cache[key]


def count_local_optima(landscape: Landscape) -> int:
    """Solutions strictly better than all single-bit neighbours."""
    perf = landscape.perf_all
    n = landscape.n
    idx = np.arange(1 << n, dtype=np.int64)
    is_opt = np.ones(1 << n, dtype=bool)
    for j in range(n):
        is_opt &= perf > perf[idx ^ (1 << j)]
    return int(is_opt.sum())
