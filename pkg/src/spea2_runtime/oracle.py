"""Brute-force references for the fast paths, and the cross-checks run by ``verify``.

Everything here is written straight from the definitions (1-based index
arithmetic, plain Python loops) and deliberately avoids the evaluation,
dominance and truncation code it is used to check; only the ``check_*``
functions import the fast paths.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .bitstring import Bitstring, make_rng
from .dominance import nondominated_subset, objective_matrix, strength_raw
from .problems import Individual, ObjectiveVector, ProblemSpec, evaluate, pareto_front, pareto_front_size
from .spea2 import truncation_removals

MAX_EXHAUSTIVE_N = 20
MAX_TRUNCATION_MEMBERS = 12


def _jump(x: Sequence[int], k: int) -> int:
    n = len(x)
    ones = sum(x)
    if ones <= n - k or ones == n:
        return k + ones
    return n - ones


def reference_objectives(spec: ProblemSpec, x: Bitstring) -> ObjectiveVector:
    """f_1..f_m by the textbook formulas, x_1..x_n 1-based."""
    n, m = spec.n, spec.m
    bit = (None, *x.digits)
    out = []
    for i in range(1, m + 1):
        if spec.family.value == "omm":
            if i % 2:
                v = sum(bit[t + n * (i - 1) // m] for t in range(1, 2 * n // m + 1))
            else:
                v = sum(1 - bit[t + n * (i - 2) // m] for t in range(1, 2 * n // m + 1))
        elif spec.family.value == "lotz":
            size = 2 * n // m
            if i % 2:
                off = n * (i - 1) // m
                v = sum(all(bit[j + off] for j in range(1, t + 1)) for t in range(1, size + 1))
            else:
                off = n * (i - 2) // m
                v = sum(all(1 - bit[j + off] for j in range(t, size + 1)) for t in range(1, size + 1))
        else:
            if i % 2:
                block = [bit[t] for t in range(n * (i - 1) // m + 1, n * (i + 1) // m + 1)]
            else:
                block = [1 - bit[t] for t in range(n * (i - 2) // m + 1, n * i // m + 1)]
            v = _jump(block, spec.k)
        out.append(int(v))
    return tuple(out)


def _weakly_dominates(u: Sequence[int], v: Sequence[int]) -> bool:
    return all(a >= b for a, b in zip(u, v))


def _dominates(u: Sequence[int], v: Sequence[int]) -> bool:
    return _weakly_dominates(u, v) and any(a > b for a, b in zip(u, v))


def exhaustive_pareto_front(spec: ProblemSpec) -> set[ObjectiveVector]:
    if spec.n > MAX_EXHAUSTIVE_N:
        raise ValueError(f"exhaustive enumeration refused for n={spec.n} > {MAX_EXHAUSTIVE_N}")
    images = {reference_objectives(spec, Bitstring(b, spec.n)) for b in range(2**spec.n)}
    # a dominator has a strictly larger coordinate sum, and some non-dominated
    # dominator always exists, so comparing against the kept set is enough
    kept: list[ObjectiveVector] = []
    for v in sorted(images, key=sum, reverse=True):
        if not any(_dominates(u, v) for u in kept):
            kept.append(v)
    return set(kept)


def brute_nondominated(pool: Sequence[Individual]) -> list[Individual]:
    if len(pool) > 10**4:
        raise ValueError("brute-force filter limited to 10^4 individuals")
    return [x for x in pool if not any(_dominates(y.objectives, x.objectives) for y in pool)]


def brute_strength_raw(pool: Sequence[Individual]) -> tuple[list[int], list[int]]:
    strength = [sum(_dominates(x.objectives, y.objectives) for y in pool) for x in pool]
    raw = [
        sum(s for y, s in zip(pool, strength) if _dominates(y.objectives, x.objectives))
        for x in pool
    ]
    return strength, raw


def _squared_sigma(i: int, members: Sequence[Individual]) -> list[int]:
    fx = members[i].objectives
    return sorted(
        sum((a - b) ** 2 for a, b in zip(fx, y.objectives))
        for j, y in enumerate(members)
        if j != i
    )


def brute_truncation_minima(members: Sequence[Individual]) -> list[Individual]:
    """Members x with x <=_d y for every member y, from materialized sigma vectors."""
    if not 2 <= len(members) <= MAX_TRUNCATION_MEMBERS:
        raise ValueError(f"truncation oracle needs 2..{MAX_TRUNCATION_MEMBERS} members, got {len(members)}")
    sigmas = [_squared_sigma(i, members) for i in range(len(members))]

    def le_d(sx: list[int], sy: list[int]) -> bool:
        if sx == sy:
            return True
        for a, b in zip(sx, sy):
            if a != b:
                return a < b
        return True

    return [
        x for x, sx in zip(members, sigmas)
        if all(le_d(sx, sy) for sy in sigmas)
    ]


# ---------------------------------------------------------------- verify

@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _random_pool(rng, size: int, spec: ProblemSpec) -> list[Individual]:
    out = []
    for _ in range(size):
        x = Bitstring(int(rng.integers(0, 2**spec.n)), spec.n)
        out.append(Individual(x, reference_objectives(spec, x)))
    return out


def check_fronts(specs: Sequence[ProblemSpec]) -> CheckResult:
    bad = []
    for spec in specs:
        closed = pareto_front(spec)
        if closed != exhaustive_pareto_front(spec) or len(closed) != pareto_front_size(spec):
            bad.append(spec.describe())
    return CheckResult("pareto fronts vs enumeration", not bad, ", ".join(bad))


def check_evaluation(specs: Sequence[ProblemSpec], samples: int, seed: int) -> CheckResult:
    rng = make_rng(seed)
    for spec in specs:
        for _ in range(samples):
            x = Bitstring(int(rng.integers(0, 2**spec.n)), spec.n)
            if evaluate(spec, x) != reference_objectives(spec, x):
                return CheckResult("evaluation vs formulas", False, f"{spec.describe()} x={x}")
    return CheckResult("evaluation vs formulas", True)


def check_dominance(pools: int, seed: int) -> CheckResult:
    rng = make_rng(seed)
    spec = ProblemSpec("lotz", 2, 6)
    for t in range(pools):
        pool = _random_pool(rng, int(rng.integers(1, 21)), spec)
        fast = nondominated_subset(pool)
        if [id(x) for x in fast] != [id(x) for x in brute_nondominated(pool)]:
            return CheckResult("non-dominated subset", False, f"pool {t}")
        s, r = strength_raw(objective_matrix(pool))
        bs, br = brute_strength_raw(pool)
        if list(s) != bs or list(r) != br:
            return CheckResult("non-dominated subset", False, f"strength/raw mismatch in pool {t}")
    return CheckResult("non-dominated subset and strength/raw", True)


def random_truncation_archive(rng, spec: ProblemSpec) -> list[Individual]:
    """4..12 individuals from ``spec`` with a forced duplicate half the time."""
    size = int(rng.integers(4, 13))
    pool = _random_pool(rng, size, spec)
    if rng.random() < 0.5:
        i, j = rng.choice(size, 2, replace=False)
        pool[j] = Individual(pool[i].genotype, pool[i].objectives)
    return pool


def check_truncation(archives: int, seed: int) -> CheckResult:
    rng = make_rng(seed)
    specs = [ProblemSpec("omm", 2, 6), ProblemSpec("omm", 4, 8), ProblemSpec("ojzj", 2, 8, 2)]
    for t in range(archives):
        pool = random_truncation_archive(rng, specs[t % len(specs)])
        removed = truncation_removals(objective_matrix(pool), 1, rng)[0]
        minima = {id(x) for x in brute_truncation_minima(pool)}
        if id(pool[removed]) not in minima:
            return CheckResult("truncation minima", False, f"archive {t}")
    return CheckResult("truncation minima", True)


def run_all_checks(seed: int = 0, quick: bool = False) -> list[CheckResult]:
    ns = (4, 8) if quick else (4, 8, 12)
    specs = [ProblemSpec(f, m, n) for f in ("omm", "lotz") for m in (2, 4) for n in ns]
    specs += [ProblemSpec("ojzj", m, n, 2) for m in (2, 4) for n in (8, 12) if (2 * n // m) >= 4]
    checks: list[Callable[[], CheckResult]] = [
        lambda: check_fronts(specs),
        lambda: check_evaluation(specs, 200, seed),
        lambda: check_dominance(100 if quick else 1000, seed),
        lambda: check_truncation(100 if quick else 500, seed),
    ]
    return [c() for c in checks]
