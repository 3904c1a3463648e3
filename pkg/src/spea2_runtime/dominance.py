"""Pareto dominance and SPEA2 fitness assignment (strength, raw fitness, density).

The array functions take an ``(s, m)`` integer matrix of objective vectors
and are what the engine uses; the per-individual functions wrap them for
the single-solution API.  Distances live in objective space and are kept
as exact squared integers until a density value is produced.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .problems import Individual, ObjectiveVector


class Relation(str, enum.Enum):
    DOMINATES = "dominates"
    DOMINATED_BY = "dominated_by"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def compare(u: Sequence[int], v: Sequence[int]) -> Relation:
    if len(u) != len(v):
        raise ValueError(f"objective vectors differ in length ({len(u)} vs {len(v)})")
    u_ge = all(a >= b for a, b in zip(u, v))
    v_ge = all(b >= a for a, b in zip(u, v))
    if u_ge and v_ge:
        return Relation.EQUAL
    if u_ge:
        return Relation.DOMINATES
    if v_ge:
        return Relation.DOMINATED_BY
    return Relation.INCOMPARABLE


def dominates(u: Sequence[int], v: Sequence[int]) -> bool:
    return compare(u, v) is Relation.DOMINATES


def objective_matrix(pool: Sequence[Individual]) -> np.ndarray:
    return np.array([ind.objectives for ind in pool], dtype=np.int64).reshape(len(pool), -1)


def dominance_matrix(objs: np.ndarray) -> np.ndarray:
    """``out[i, j]`` is True iff row ``i`` dominates row ``j``."""
    s, m = objs.shape
    ge = np.ones((s, s), dtype=bool)
    gt = np.zeros((s, s), dtype=bool)
    for c in range(m):
        col = objs[:, c]
        ge &= col[:, None] >= col[None, :]
        gt |= col[:, None] > col[None, :]
    return ge & gt


def nondominated_mask(objs: np.ndarray) -> np.ndarray:
    return ~dominance_matrix(objs).any(axis=0)


def squared_distances(objs: np.ndarray) -> np.ndarray:
    out = np.zeros((len(objs), len(objs)), dtype=np.int64)
    for c in range(objs.shape[1]):
        diff = objs[:, c][:, None] - objs[:, c][None, :]
        out += diff * diff
    return out


def strength_raw(objs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Strength and raw fitness of every row, from one pairwise dominance pass."""
    dom = dominance_matrix(objs)
    strength = dom.sum(axis=1)
    raw = (dom * strength[:, None]).sum(axis=0)
    return strength, raw


def kth_neighbor_sq(objs: np.ndarray, k: int) -> np.ndarray:
    """Squared distance from each row to its k-th nearest *other* row."""
    s = len(objs)
    if not 1 <= k <= s - 1:
        raise ValueError(f"neighbour index k={k} outside [1, {s - 1}] for a pool of {s}")
    d2 = squared_distances(objs)
    # self sits at index 0 after the partition (distance 0 is the row minimum)
    np.fill_diagonal(d2, -1)
    return np.partition(d2, k, axis=1)[:, k]


def grouped_strength_raw(uniq: np.ndarray, counts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Strength and raw fitness per distinct vector, each vector weighted by its count."""
    dom = dominance_matrix(uniq)
    strength = dom @ counts
    raw = (dom * (counts * strength)[:, None]).sum(axis=0)
    return strength, raw


def grouped_kth_neighbor_sq(uniq: np.ndarray, counts: np.ndarray, k: int) -> np.ndarray:
    """``kth_neighbor_sq`` per distinct vector, where duplicates sit at distance 0."""
    total = int(counts.sum())
    if not 1 <= k <= total - 1:
        raise ValueError(f"neighbour index k={k} outside [1, {total - 1}] for a pool of {total}")
    d2 = squared_distances(uniq)
    order = np.argsort(d2, axis=1, kind="stable")
    weights = counts[order]
    weights[:, 0] -= 1  # column 0 is the vector itself
    pos = (np.cumsum(weights, axis=1) < k).sum(axis=1)
    return np.take_along_axis(d2, order, axis=1)[np.arange(len(uniq)), pos]


def auto_density_k(pool_size: int) -> int:
    return min(max(1, math.isqrt(pool_size)), max(1, pool_size - 1))


def _index_of(x: Individual, pool: Sequence[Individual]) -> int:
    for i, y in enumerate(pool):
        if y is x:
            return i
    for i, y in enumerate(pool):
        if y == x:
            return i
    raise ValueError("individual is not a member of the pool")


def nondominated_subset(pool: Sequence[Individual]) -> list[Individual]:
    if not pool:
        raise ValueError("non-dominated subset of an empty pool")
    mask = nondominated_mask(objective_matrix(pool))
    return [ind for ind, keep in zip(pool, mask) if keep]


def strength(x: Individual, pool: Sequence[Individual]) -> int:
    i = _index_of(x, pool)
    return int(strength_raw(objective_matrix(pool))[0][i])


def raw_fitness(x: Individual, pool: Sequence[Individual]) -> int:
    i = _index_of(x, pool)
    return int(strength_raw(objective_matrix(pool))[1][i])


def density(x: Individual, pool: Sequence[Individual], k: int) -> float:
    i = _index_of(x, pool)
    return 1.0 / (math.sqrt(kth_neighbor_sq(objective_matrix(pool), k)[i]) + 2.0)


@dataclass(frozen=True)
class FitnessRecord:
    strength: int
    raw: int
    density: float

    @property
    def fitness(self) -> float:
        return self.raw + self.density


def fitness_records(pool: Sequence[Individual], k: int) -> list[FitnessRecord]:
    objs = objective_matrix(pool)
    s, r = strength_raw(objs)
    d2 = kth_neighbor_sq(objs, k)
    return [FitnessRecord(int(a), int(b), 1.0 / (math.sqrt(c) + 2.0)) for a, b, c in zip(s, r, d2)]


def fitness(x: Individual, pool: Sequence[Individual], k: int) -> float:
    return fitness_records(pool, k)[_index_of(x, pool)].fitness


def front_of(vectors: Sequence[ObjectiveVector]) -> set[ObjectiveVector]:
    """Distinct non-dominated vectors among ``vectors``."""
    objs = np.array(vectors, dtype=np.int64).reshape(len(vectors), -1)
    return {tuple(int(v) for v in row) for row in objs[nondominated_mask(objs)]}
