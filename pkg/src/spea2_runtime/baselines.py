"""SEMO and GSEMO: one offspring per iteration, population = non-dominated set seen so far."""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Collection

from .bitstring import make_rng, mutation_masks, random_bitstring
from .problems import (
    Individual, ObjectiveVector, ProblemSpec, default_budget, make_individual, pareto_front,
    required_archive_size,
)
from .records import RunResult

OPERATORS = {"semo": "onebit", "gsemo": "bitwise"}


@dataclass(frozen=True)
class BaselineConfig:
    spec: ProblemSpec
    algorithm: str = "gsemo"
    budget: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.algorithm not in OPERATORS:
            raise ValueError(f"unknown baseline {self.algorithm!r}; expected semo or gsemo")
        if self.budget is not None and self.budget < 1:
            raise ValueError(f"budget must be >= 1, got {self.budget}")

    @property
    def mutation(self) -> str:
        return OPERATORS[self.algorithm]

    @property
    def effective_budget(self) -> int:
        # the population is bounded by the archive-size threshold of the family
        return self.budget if self.budget is not None else default_budget(
            self.spec, required_archive_size(self.spec)
        )


def _dominates(u: ObjectiveVector, v: ObjectiveVector) -> bool:
    return u != v and all(a >= b for a, b in zip(u, v))


class Population:
    """Mutually non-dominated individuals with pairwise distinct objective vectors."""

    def __init__(self, first: Individual):
        self.members: list[Individual] = [first]
        self.by_vector: dict[ObjectiveVector, Individual] = {first.objectives: first}

    def __len__(self) -> int:
        return len(self.members)

    def offer(self, child: Individual) -> bool:
        """Insert ``child`` unless its vector is present or dominated; returns acceptance."""
        f = child.objectives
        if f in self.by_vector:
            return False
        if any(_dominates(ind.objectives, f) for ind in self.members):
            return False
        self.members = [ind for ind in self.members if not _dominates(f, ind.objectives)]
        self.members.append(child)
        self.by_vector = {ind.objectives: ind for ind in self.members}
        return True


def baseline_run(
    config: BaselineConfig,
    front: Collection[ObjectiveVector] | None = None,
    observer: Callable[[int, Population], None] | None = None,
) -> RunResult:
    spec = config.spec
    budget = config.effective_budget
    front = frozenset(front) if front is not None else pareto_front(spec)
    rng = make_rng(config.seed)
    start = time.perf_counter()

    pop = Population(make_individual(spec, random_bitstring(spec.n, rng)))
    evaluations, iteration, peak = 1, 0, 1
    covered = sum(f in front for f in pop.by_vector)
    trajectory = [covered / len(front)]
    batch = 1024
    while covered < len(front) and evaluations < budget:
        # draws are batched; the consumption order is fixed so runs stay reproducible
        picks = rng.random(batch)
        masks = mutation_masks(config.mutation, spec.n, batch, rng)
        for u, mask in zip(picks.tolist(), masks):
            parent = pop.members[int(u * len(pop))]
            if pop.offer(make_individual(spec, parent.genotype.flip(mask))):
                covered = sum(f in front for f in pop.by_vector)
                peak = max(peak, len(pop))
            evaluations += 1
            iteration += 1
            trajectory.append(covered / len(front))
            if observer is not None:
                observer(iteration, pop)
            if covered == len(front) or evaluations >= budget:
                break

    return RunResult(
        evaluations=evaluations,
        generations=iteration,
        success=covered == len(front),
        final_coverage=covered / len(front),
        seed=config.seed,
        budget=budget,
        wall_time_ms=int((time.perf_counter() - start) * 1000),
        peak_population=peak,
        coverage_trajectory=trajectory,
    )
