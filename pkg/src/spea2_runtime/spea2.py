"""SPEA2 on bitstrings: environmental selection, truncation, offspring, main loop."""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Collection, Sequence

import numba
import numpy as np

from .bitstring import MUTATIONS, RandomSource, make_rng, mutation_masks, random_bitstrings
from .dominance import (
    auto_density_k,
    dominance_matrix,
    grouped_kth_neighbor_sq,
    grouped_strength_raw,
    objective_matrix,
    squared_distances,
)
from .problems import Individual, ObjectiveVector, ProblemSpec, default_budget, make_individual, pareto_front
from .records import RunResult

Observer = Callable[[int, Sequence[Individual], Sequence[Individual]], None]


@dataclass(frozen=True)
class EngineConfig:
    spec: ProblemSpec
    mu: int
    archive_cap: int
    mutation: str = "bitwise"
    density_k: int | str = "auto"
    budget: int | None = None
    seed: int = 0
    stop_on_coverage: bool = True

    def __post_init__(self):
        if self.mu < 1:
            raise ValueError(f"population size mu must be >= 1, got {self.mu}")
        if self.archive_cap < 1:
            raise ValueError(f"archive size must be >= 1, got {self.archive_cap}")
        if self.mutation not in MUTATIONS:
            raise ValueError(f"unknown mutation {self.mutation!r}")
        if self.density_k != "auto" and not (isinstance(self.density_k, int) and self.density_k >= 1):
            raise ValueError(f"density_k must be 'auto' or a positive int, got {self.density_k!r}")
        if self.budget is not None and self.budget < self.mu:
            raise ValueError(f"budget {self.budget} is smaller than one population (mu={self.mu})")

    @property
    def effective_budget(self) -> int:
        return self.budget if self.budget is not None else default_budget(self.spec, self.mu)


# ---------------------------------------------------------------- distances

def _squared_sigma(i: int, objs: np.ndarray) -> np.ndarray:
    d2 = ((objs - objs[i]) ** 2).sum(axis=1)
    return np.sort(np.delete(d2, i))


def sigma_vector(x: Individual, members: Sequence[Individual]) -> tuple[float, ...]:
    """Sorted objective-space distances from ``x`` to every other member."""
    if len(members) < 2:
        raise ValueError("sigma vector needs at least two members")
    i = _member_index(x, members)
    return tuple(float(v) for v in np.sqrt(_squared_sigma(i, objective_matrix(members))))


def less_d(x: Individual, y: Individual, members: Sequence[Individual]) -> bool:
    """Whether ``x`` is at least as crowded as ``y`` (lexicographic on sigma vectors)."""
    objs = objective_matrix(members)
    sx = _squared_sigma(_member_index(x, members), objs)
    sy = _squared_sigma(_member_index(y, members), objs)
    diff = np.flatnonzero(sx != sy)
    return diff.size == 0 or sx[diff[0]] < sy[diff[0]]


def _member_index(x: Individual, members: Sequence[Individual]) -> int:
    for i, y in enumerate(members):
        if y is x:
            return i
    for i, y in enumerate(members):
        if y == x:
            return i
    raise ValueError("individual is not a member of the set")


# ---------------------------------------------------------------- truncation
#
# Members sharing an objective vector have identical sigma vectors, so the
# kernel works on distinct vectors ("groups") with multiplicities.  The
# sigma vector of a member of group g is the multiset
#   {0 x (count[g]-1)} + {D[g,h] x count[h] : h != g},
# walked in ascending order via the precomputed row ordering.

@numba.njit(cache=True)
def _lex_cmp(d2, order, counts, g, h):
    size = d2.shape[0]
    pg = 0
    ph = 0
    rg = 0
    rh = 0
    vg = 0
    vh = 0
    while True:
        while rg == 0 and pg < size:
            q = order[g, pg]
            pg += 1
            w = counts[q] - (1 if q == g else 0)
            if w > 0:
                rg = w
                vg = d2[g, q]
        while rh == 0 and ph < size:
            q = order[h, ph]
            ph += 1
            w = counts[q] - (1 if q == h else 0)
            if w > 0:
                rh = w
                vh = d2[h, q]
        if rg == 0 or rh == 0:
            return 0
        if vg != vh:
            return -1 if vg < vh else 1
        t = min(rg, rh)
        rg -= t
        rh -= t


@numba.njit(cache=True)
def _truncation_kernel(d2, order, counts, uniforms):
    size = d2.shape[0]
    steps = uniforms.shape[0]
    groups = np.empty(steps, dtype=np.int64)
    offsets = np.empty(steps, dtype=np.int64)
    tied = np.empty(size, dtype=np.int64)
    for step in range(steps):
        top = counts.max()
        ntied = 0
        for g in range(size):
            if counts[g] == 0 or (top >= 2 and counts[g] < top):
                continue
            if ntied == 0:
                tied[0] = g
                ntied = 1
                continue
            c = _lex_cmp(d2, order, counts, g, tied[0])
            if c < 0:
                tied[0] = g
                ntied = 1
            elif c == 0:
                tied[ntied] = g
                ntied += 1
        total = 0
        for i in range(ntied):
            total += counts[tied[i]]
        r = min(int(uniforms[step] * total), total - 1)
        for i in range(ntied):
            g = tied[i]
            if r < counts[g]:
                groups[step] = g
                offsets[step] = r
                counts[g] -= 1
                break
            r -= counts[g]
    return groups, offsets


def group_vectors(objs: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Distinct rows, the row-to-group map and the group multiplicities."""
    uniq, inverse, counts = np.unique(objs, axis=0, return_inverse=True, return_counts=True)
    return uniq, inverse.reshape(-1), counts.astype(np.int64)


def _grouped_removals(uniq, inverse, counts, n_remove, rng) -> list[int]:
    d2 = squared_distances(uniq)
    order = np.argsort(d2, axis=1, kind="stable")
    groups, offsets = _truncation_kernel(d2, order, counts.copy(), rng.random(n_remove))
    members: list[list[int]] = [[] for _ in range(len(uniq))]
    for i, g in enumerate(inverse.tolist()):
        members[g].append(i)
    return [members[g].pop(off) for g, off in zip(groups.tolist(), offsets.tolist())]


def truncation_removals(objs: np.ndarray, n_remove: int, rng: RandomSource) -> list[int]:
    """Row indices removed, in order, when truncating ``objs`` by ``n_remove`` rows.

    Each removal takes a uniformly random individual among the current
    sigma-vector minima, after which all sigma vectors are recomputed.
    """
    if not 0 <= n_remove < len(objs):
        raise ValueError(f"cannot remove {n_remove} of {len(objs)} individuals")
    return _grouped_removals(*group_vectors(objs), n_remove, rng)


def truncate(candidates: Sequence[Individual], cap: int, rng: RandomSource) -> list[Individual]:
    if not 1 <= cap < len(candidates):
        raise ValueError(f"truncation needs 1 <= cap < {len(candidates)}, got cap={cap}")
    removed = set(truncation_removals(objective_matrix(candidates), len(candidates) - cap, rng))
    return [ind for i, ind in enumerate(candidates) if i not in removed]


# ---------------------------------------------------------------- selection

def _resolve_k(density_k: int | str, pool_size: int) -> int:
    if density_k == "auto":
        return auto_density_k(pool_size)
    return min(int(density_k), pool_size - 1)


def environmental_selection(
    P: Sequence[Individual],
    A: Sequence[Individual],
    cap: int,
    density_k: int | str,
    rng: RandomSource,
) -> list[Individual]:
    """Next archive from ``P + A``: non-dominated set, truncated or filled to ``cap``.

    Fill order is ascending fitness R + 1/(sigma_k + 2) over the whole pool,
    ties broken at random.  An integer ``density_k`` larger than the pool
    allows is clamped to ``|pool| - 1``.
    """
    pool = [*P, *A]
    if not pool:
        raise ValueError("environmental selection on an empty pool")
    uniq, inverse, counts = group_vectors(objective_matrix(pool))
    dom = dominance_matrix(uniq)
    nd_groups = ~dom.any(axis=0)
    nd_idx = np.flatnonzero(nd_groups[inverse])
    if len(nd_idx) > cap:
        renumber = np.cumsum(nd_groups) - 1
        removed = set(_grouped_removals(
            uniq[nd_groups], renumber[inverse[nd_idx]], counts[nd_groups], len(nd_idx) - cap, rng
        ))
        keep = [int(i) for j, i in enumerate(nd_idx) if j not in removed]
    else:
        keep = nd_idx.tolist()
        short = min(cap, len(pool)) - len(keep)
        if short > 0:
            dominated = np.flatnonzero(~nd_groups[inverse])
            _, raw = grouped_strength_raw(uniq, counts)
            d2k = grouped_kth_neighbor_sq(uniq, counts, _resolve_k(density_k, len(pool)))
            g = inverse[dominated]
            # ascending R, then ascending density == descending sigma
            rank = np.lexsort((rng.random(len(dominated)), -d2k[g], raw[g]))
            keep.extend(dominated[rank[:short]].tolist())
    return [pool[i] for i in keep]


def select_parents(archive_size: int, mu: int, rng: RandomSource) -> np.ndarray:
    if archive_size < 1:
        raise ValueError("cannot select parents from an empty archive")
    return rng.integers(0, archive_size, size=mu)


def generate_offspring(
    A: Sequence[Individual],
    mu: int,
    mutation: str,
    spec: ProblemSpec,
    rng: RandomSource,
) -> list[Individual]:
    parents = select_parents(len(A), mu, rng)
    masks = mutation_masks(mutation, spec.n, mu, rng)
    return [make_individual(spec, A[p].genotype.flip(mask)) for p, mask in zip(parents.tolist(), masks)]


def coverage(archive: Collection[Individual], front: Collection[ObjectiveVector]) -> float:
    if not front:
        raise ValueError("coverage of an empty front")
    front = front if isinstance(front, (set, frozenset)) else set(front)
    found = {ind.objectives for ind in archive}
    return len(front & found) / len(front)


def run(
    config: EngineConfig,
    front: Collection[ObjectiveVector] | None = None,
    observer: Observer | None = None,
) -> RunResult:
    """One SPEA2 run until the archive covers ``front`` or the budget is spent.

    ``observer(generation, pool, archive)`` is called after every
    environmental selection.  Generations continue only while a full
    offspring population fits in the budget.
    """
    spec, mu = config.spec, config.mu
    budget = config.effective_budget
    front = frozenset(front) if front is not None else pareto_front(spec)
    rng = make_rng(config.seed)
    start = time.perf_counter()

    P = [make_individual(spec, x) for x in random_bitstrings(spec.n, mu, rng)]
    A: list[Individual] = []
    evaluations, generation = mu, 0
    trajectory: list[float] = []
    peak = 0
    while True:
        pool = P + A
        A = environmental_selection(P, A, config.archive_cap, config.density_k, rng)
        peak = max(peak, len(A))
        if observer is not None:
            observer(generation, pool, A)
        cov = coverage(A, front)
        trajectory.append(cov)
        if (cov == 1.0 and config.stop_on_coverage) or evaluations + mu > budget:
            break
        P = generate_offspring(A, mu, config.mutation, spec, rng)
        evaluations += mu
        generation += 1

    return RunResult(
        evaluations=evaluations,
        generations=generation,
        success=trajectory[-1] == 1.0,
        final_coverage=trajectory[-1],
        seed=config.seed,
        budget=budget,
        wall_time_ms=int((time.perf_counter() - start) * 1000),
        peak_population=peak,
        coverage_trajectory=trajectory,
    )
