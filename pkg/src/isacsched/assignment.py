"""Balanced linear assignment: Hungarian solver and an exhaustive oracle."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class Matching:
    """``columns[r]`` is the column assigned to row ``r``."""

    columns: tuple[int, ...]
    total_cost: float

    def pairs(self) -> list[tuple[int, int]]:
        return list(enumerate(self.columns))


def _as_square(cost) -> np.ndarray:
    c = np.asarray(cost, dtype=float)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ValueError(f"cost matrix must be square, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise ValueError("cost matrix must be finite")
    if np.any(c < 0):
        raise ValueError("cost matrix must be nonnegative")
    return c


def hungarian(cost) -> Matching:
    """Minimum-cost perfect matching of a square cost matrix, O(n^3).

    Rows are inserted one at a time (lowest index first), each by a
    Dijkstra-like search for the cheapest augmenting path over reduced
    costs. Ties go to the lowest column index, which makes the result
    deterministic.
    """
    c = _as_square(cost)
    n = c.shape[0]
    if n == 0:
        return Matching((), 0.0)
    a = c.tolist()
    inf = math.inf
    # 1-based with a virtual column 0, as in the classic potential formulation
    u = [0.0] * (n + 1)
    v = [0.0] * (n + 1)
    p = [0] * (n + 1)  # p[j]: row matched to column j
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [inf] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            row = a[i0 - 1]
            ui0 = u[i0]
            delta = inf
            j1 = 0
            for j in range(1, n + 1):
                if not used[j]:
                    cur = row[j - 1] - ui0 - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while True:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
            if j0 == 0:
                break
    columns = [0] * n
    for j in range(1, n + 1):
        columns[p[j] - 1] = j - 1
    total = float(sum(a[r][columns[r]] for r in range(n)))
    return Matching(tuple(columns), total)


@lru_cache(maxsize=16)
def _permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp).reshape(math.factorial(n), n)


def brute_force_assignment(cost, max_size: int = 8) -> Matching:
    """Exhaustive minimum over all permutations; first optimum in lexicographic order."""
    c = _as_square(cost)
    n = c.shape[0]
    if n > max_size:
        raise ValueError(f"brute force limited to n <= {max_size}, got {n}")
    perms = _permutations(n)
    totals = c[np.arange(n), perms].sum(axis=1)
    best = int(np.argmin(totals))
    return Matching(tuple(int(j) for j in perms[best]), float(totals[best]))
