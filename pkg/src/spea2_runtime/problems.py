"""mOneMinMax, mLeadingOnesTrailingZeroes and mOneJumpZeroJump.

All three split a length-``n`` string into ``m/2`` contiguous blocks of
``n' = 2n/m`` bits; block ``j`` (0-based here) covers positions
``j*n' .. (j+1)*n' - 1`` and contributes objectives ``2j`` and ``2j+1``.
Objective values are exact ints under maximization.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Iterator

from .bitstring import Bitstring

ObjectiveVector = tuple[int, ...]

MAX_FRONT_POINTS = 10**7


class Family(str, enum.Enum):
    OMM = "omm"
    LOTZ = "lotz"
    OJZJ = "ojzj"


class ParetoClass(str, enum.Enum):
    NOT_PARETO_OPTIMAL = "not_pareto_optimal"
    INTERNAL = "internal"
    EXTREME = "extreme"


@dataclass(frozen=True)
class ProblemSpec:
    family: Family
    m: int
    n: int
    k: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.m < 2 or self.m % 2:
            raise ValueError(f"m must be an even integer >= 2, got {self.m}")
        if self.n < 1 or self.n % (self.m // 2):
            raise ValueError(f"n={self.n} must be a positive multiple of m/2={self.m // 2}")
        if self.family is Family.OJZJ:
            if self.k is None or not 2 <= self.k <= self.block_size // 2:
                raise ValueError(
                    f"OneJumpZeroJump needs 2 <= k <= n'/2 = {self.block_size // 2}, got k={self.k}"
                )
        elif self.k is not None:
            raise ValueError(f"jump gap k only applies to ojzj, not {self.family.value}")

    @property
    def block_size(self) -> int:
        return 2 * self.n // self.m

    @property
    def blocks(self) -> int:
        return self.m // 2

    def describe(self) -> str:
        k = f",k={self.k}" if self.k is not None else ""
        return f"{self.family.value}(m={self.m},n={self.n}{k})"


@dataclass(frozen=True, slots=True)
class Individual:
    genotype: Bitstring
    objectives: ObjectiveVector


def jump_value(ones: int, n_prime: int, k: int) -> int:
    if not 0 <= ones <= n_prime:
        raise ValueError(f"ones={ones} outside [0, {n_prime}]")
    if not 2 <= k <= n_prime - 1:
        raise ValueError(f"k={k} outside [2, {n_prime - 1}]")
    if ones <= n_prime - k or ones == n_prime:
        return k + ones
    return n_prime - ones


def _block_values(family: Family, block: int, size: int, k: int | None) -> tuple[int, int]:
    if family is Family.OMM:
        ones = block.bit_count()
        return ones, size - ones
    if family is Family.LOTZ:
        leading_ones = (~block & (block + 1)).bit_length() - 1
        return leading_ones, size - block.bit_length()
    ones = block.bit_count()
    return jump_value(ones, size, k), jump_value(size - ones, size, k)


def evaluate(spec: ProblemSpec, x: Bitstring) -> ObjectiveVector:
    if x.n != spec.n:
        raise ValueError(f"bitstring has length {x.n}, problem expects {spec.n}")
    size = spec.block_size
    mask = (1 << size) - 1
    out: list[int] = []
    for j in range(spec.blocks):
        out.extend(_block_values(spec.family, (x.bits >> (j * size)) & mask, size, spec.k))
    return tuple(out)


def make_individual(spec: ProblemSpec, x: Bitstring) -> Individual:
    return Individual(x, evaluate(spec, x))


def _front_block_values(spec: ProblemSpec) -> tuple[list[int], int]:
    size = spec.block_size
    if spec.family is Family.OJZJ:
        k = spec.k
        return [k, *range(2 * k, size + 1), size + k], size + 2 * k
    return list(range(size + 1)), size


def pareto_front_size(spec: ProblemSpec) -> int:
    if spec.family is Family.OJZJ:
        return (spec.block_size - 2 * spec.k + 3) ** spec.blocks
    return (spec.block_size + 1) ** spec.blocks


def iter_pareto_front(spec: ProblemSpec) -> Iterator[ObjectiveVector]:
    values, pair_sum = _front_block_values(spec)
    for combo in itertools.product(values, repeat=spec.blocks):
        yield tuple(v for i in combo for v in (i, pair_sum - i))


def pareto_front(spec: ProblemSpec) -> frozenset[ObjectiveVector]:
    size = pareto_front_size(spec)
    if size > MAX_FRONT_POINTS:
        raise ValueError(f"{spec.describe()} front has {size} points, above the {MAX_FRONT_POINTS} limit")
    return frozenset(iter_pareto_front(spec))


def required_archive_size(spec: ProblemSpec) -> int:
    """Archive size above which SPEA2 provably keeps every non-dominated vector."""
    if spec.family is Family.LOTZ:
        return (spec.block_size + 1) ** (spec.m - 1)
    return pareto_front_size(spec)


def classify_ojzj_solution(spec: ProblemSpec, x: Bitstring) -> ParetoClass:
    if spec.family is not Family.OJZJ:
        raise ValueError(f"classification is defined for ojzj only, got {spec.family.value}")
    if x.n != spec.n:
        raise ValueError(f"bitstring has length {x.n}, problem expects {spec.n}")
    size, k = spec.block_size, spec.k
    counts = [x.block(j * size, size).bit_count() for j in range(spec.blocks)]
    internal = [k <= c <= size - k for c in counts]
    extreme = [c in (0, size) for c in counts]
    if all(internal):
        return ParetoClass.INTERNAL
    if all(i or e for i, e in zip(internal, extreme)):
        return ParetoClass.EXTREME
    return ParetoClass.NOT_PARETO_OPTIMAL


def runtime_bound(spec: ProblemSpec, mu: int) -> float:
    """The expected-evaluations bound for the family, constants dropped, log = ln.

    omm: mu*n*min(m ln n, n); lotz: mu*n^2; ojzj: mu*n^k*min(m*n, 3^(m/2)).
    """
    n, m = spec.n, spec.m
    if spec.family is Family.OMM:
        return mu * n * min(m * math.log(n), n)
    if spec.family is Family.LOTZ:
        return float(mu * n * n)
    return float(mu * n**spec.k * min(m * n, 3 ** (m // 2)))


def default_budget(spec: ProblemSpec, mu: int, multiplier: float = 100.0) -> int:
    """``multiplier`` times the runtime bound, rounded up to a whole number of generations."""
    generations = max(1, math.ceil(multiplier * runtime_bound(spec, mu) / mu))
    return generations * mu
