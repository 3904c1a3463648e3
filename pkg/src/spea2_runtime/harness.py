"""Seeded multi-trial experiments, per-cell statistics, scaling fits and CSV/JSON output."""
from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .baselines import OPERATORS, BaselineConfig, baseline_run
from .bitstring import derive_seed
from .problems import ProblemSpec, default_budget, required_archive_size, runtime_bound
from .records import RunResult
from .spea2 import EngineConfig, run

ALGORITHMS = ("spea2", "gsemo", "semo")

CSV_COLUMNS = (
    "algorithm", "problem", "m", "n", "k", "mu", "archive", "mutation", "density_k",
    "seed", "evaluations", "generations", "success", "final_coverage", "wall_ms",
)


@dataclass(frozen=True)
class Cell:
    """One point of an experiment grid.

    For SEMO/GSEMO ``mu`` is 1 (one offspring per iteration), ``archive`` is
    0 (the population is unbounded) and the mutation is fixed by the algorithm.
    """

    spec: ProblemSpec
    algorithm: str = "spea2"
    mu: int = 1
    archive: int = 0
    mutation: str = "bitwise"
    density_k: int | str = "auto"
    budget: int | None = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if self.algorithm == "spea2":
            EngineConfig(self.spec, self.mu, self.archive, self.mutation, self.density_k, self.budget)
        else:
            object.__setattr__(self, "mu", 1)
            object.__setattr__(self, "archive", 0)
            object.__setattr__(self, "mutation", OPERATORS[self.algorithm])
            BaselineConfig(self.spec, self.algorithm, self.budget)

    @property
    def bound_mu(self) -> int:
        """Population size that enters the runtime bound."""
        return self.mu if self.algorithm == "spea2" else required_archive_size(self.spec)

    def resolved_budget(self, multiplier: float) -> int:
        if self.budget is not None:
            return self.budget
        if self.algorithm == "spea2":
            return default_budget(self.spec, self.mu, multiplier)
        return default_budget(self.spec, self.bound_mu, multiplier)

    def describe(self) -> str:
        extra = f" mu={self.mu} archive={self.archive}" if self.algorithm == "spea2" else ""
        return f"{self.algorithm} {self.spec.describe()}{extra}"


@dataclass(frozen=True)
class ExperimentPlan:
    cells: tuple[Cell, ...]
    trials_per_cell: int = 30
    master_seed: int = 0
    budget_multiplier: float = 100.0

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(self.cells))
        if not self.cells:
            raise ValueError("plan has no cells")
        if self.trials_per_cell < 1:
            raise ValueError(f"trials_per_cell must be >= 1, got {self.trials_per_cell}")
        if self.budget_multiplier <= 0:
            raise ValueError("budget multiplier must be positive")

    def trial_seed(self, cell_index: int, trial: int) -> int:
        return derive_seed(self.master_seed, cell_index, trial)

    def to_dict(self) -> dict[str, Any]:
        return {
            "master_seed": self.master_seed,
            "trials": self.trials_per_cell,
            "budget_multiplier": self.budget_multiplier,
            "cells": [_cell_to_dict(c) for c in self.cells],
        }


def _cell_to_dict(cell: Cell) -> dict[str, Any]:
    return {
        "algorithm": cell.algorithm,
        "problem": cell.spec.family.value,
        "m": cell.spec.m,
        "n": cell.spec.n,
        "k": cell.spec.k,
        "mu": cell.mu,
        "archive": cell.archive,
        "mutation": cell.mutation,
        "density_k": cell.density_k,
        "budget": cell.budget,
    }


def _size_value(value: Any, spec: ProblemSpec) -> int:
    if value == "required":
        return required_archive_size(spec)
    return int(value)


def _expand_cell(entry: dict[str, Any]) -> list[dict[str, Any]]:
    ns = entry.get("n")
    ns = ns if isinstance(ns, list) else [ns]
    return [{**entry, "n": n} for n in ns]


def plan_from_dict(data: dict[str, Any]) -> ExperimentPlan:
    """Build a plan from the JSON plan-file layout, validating every cell up front.

    A cell's ``n`` may be a list (one cell per value) and ``mu``/``archive``
    may be ``"required"`` for the family's archive-size threshold.
    """
    cells = []
    raw_cells = [c for entry in data.get("cells", []) for c in _expand_cell(entry)]
    for i, entry in enumerate(raw_cells):
        try:
            spec = ProblemSpec(entry["problem"], int(entry["m"]), int(entry["n"]), entry.get("k"))
            algorithm = entry.get("algorithm", "spea2")
            kwargs: dict[str, Any] = {"algorithm": algorithm, "budget": entry.get("budget")}
            if algorithm == "spea2":
                kwargs.update(
                    mu=_size_value(entry["mu"], spec),
                    archive=_size_value(entry["archive"], spec),
                    mutation=entry.get("mutation", "bitwise"),
                    density_k=entry.get("density_k", "auto"),
                )
            cells.append(Cell(spec, **kwargs))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"invalid cell {i} {entry}: {exc}") from exc
    return ExperimentPlan(
        tuple(cells),
        trials_per_cell=int(data.get("trials", 30)),
        master_seed=int(data.get("master_seed", 0)),
        budget_multiplier=float(data.get("budget_multiplier", 100.0)),
    )


def load_plan(path: str | os.PathLike) -> ExperimentPlan:
    with open(path) as fh:
        return plan_from_dict(json.load(fh))


@dataclass
class Row:
    cell_index: int
    cell: Cell
    result: RunResult

    def as_record(self) -> dict[str, Any]:
        c, r = self.cell, self.result
        return {
            "algorithm": c.algorithm,
            "problem": c.spec.family.value,
            "m": c.spec.m,
            "n": c.spec.n,
            "k": c.spec.k,
            "mu": c.mu,
            "archive": c.archive,
            "mutation": c.mutation,
            "density_k": c.density_k,
            "seed": r.seed,
            "evaluations": r.evaluations,
            "generations": r.generations,
            "success": r.success,
            "final_coverage": r.final_coverage,
            "wall_ms": r.wall_time_ms,
        }


@dataclass
class CellStats:
    cell: Cell
    trials: int
    success_rate: float
    median: float
    mean: float
    q1: float
    q3: float

    @property
    def iqr(self) -> float:
        return self.q3 - self.q1


@dataclass
class TrialTable:
    plan: ExperimentPlan
    rows: list[Row] = field(default_factory=list)

    def cell_rows(self, index: int) -> list[Row]:
        return [r for r in self.rows if r.cell_index == index]

    def stats(self) -> list[CellStats]:
        """Per-cell statistics; evaluation statistics use successful trials only."""
        out = []
        for i, cell in enumerate(self.plan.cells):
            rows = self.cell_rows(i)
            evals = np.array([r.result.evaluations for r in rows if r.result.success], dtype=float)
            nan = float("nan")
            q1, med, q3 = np.percentile(evals, [25, 50, 75]) if evals.size else (nan, nan, nan)
            out.append(CellStats(
                cell=cell,
                trials=len(rows),
                success_rate=sum(r.result.success for r in rows) / len(rows) if rows else nan,
                median=float(med),
                mean=float(evals.mean()) if evals.size else nan,
                q1=float(q1),
                q3=float(q3),
            ))
        return out

    def evaluation_counts(self) -> list[int]:
        return [r.result.evaluations for r in self.rows]


def run_trial(cell: Cell, seed: int, budget_multiplier: float = 100.0) -> RunResult:
    budget = cell.resolved_budget(budget_multiplier)
    if cell.algorithm == "spea2":
        config = EngineConfig(
            cell.spec, cell.mu, cell.archive, cell.mutation, cell.density_k, budget, seed
        )
        return run(config)
    return baseline_run(BaselineConfig(cell.spec, cell.algorithm, budget, seed))


def _run_task(task: tuple[Cell, int, float]) -> RunResult:
    return run_trial(*task)


def resolve_workers(workers: int | None = None) -> int:
    env = os.environ.get("MOEA_WORKERS")
    if env:
        workers = int(env)
    return max(1, workers or 1)


def run_plan(plan: ExperimentPlan, workers: int | None = None) -> TrialTable:
    """Run every (cell, trial); rows follow plan order whatever the worker count."""
    keys = [(ci, t) for ci in range(len(plan.cells)) for t in range(plan.trials_per_cell)]
    tasks = [(plan.cells[ci], plan.trial_seed(ci, t), plan.budget_multiplier) for ci, t in keys]
    workers = resolve_workers(workers)
    if workers == 1:
        results = [_run_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_task, tasks))
    return TrialTable(plan, [Row(ci, plan.cells[ci], r) for (ci, _), r in zip(keys, results)])


# ---------------------------------------------------------------- scaling

def normalized_cost(row: Row) -> float:
    """Evaluations divided by the family's runtime bound at the row's parameters."""
    if not row.result.success:
        raise ValueError("normalized cost is undefined for a failed run")
    return row.result.evaluations / runtime_bound(row.cell.spec, row.cell.bound_mu)


def median_normalized_costs(table: TrialTable) -> list[float]:
    out = []
    for i in range(len(table.plan.cells)):
        costs = [normalized_cost(r) for r in table.cell_rows(i) if r.result.success]
        out.append(float(np.median(costs)) if costs else float("nan"))
    return out


def spread_ratio(values: Sequence[float]) -> float:
    return max(values) / min(values)


def fit_loglog_slope(ns: Sequence[float], evaluations: Sequence[float]) -> tuple[float, float]:
    """Least-squares slope of log(evaluations) against log(n), with r^2."""
    if len(ns) != len(evaluations):
        raise ValueError("ns and evaluations differ in length")
    if len(ns) < 3:
        raise ValueError(f"slope fit needs at least 3 sweep points, got {len(ns)}")
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray(evaluations, dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else 1.0 - float((resid**2).sum()) / ss_tot
    return float(slope), r2


def sweep_slope(table: TrialTable) -> tuple[float, float]:
    """Slope of median evaluations over the plan's n-sweep (cells at >= 50% success)."""
    stats = table.stats()
    low = [s.cell.describe() for s in stats if not s.success_rate >= 0.5]
    if low:
        raise ValueError(f"cells below 50% success: {low}")
    return fit_loglog_slope([s.cell.spec.n for s in stats], [s.median for s in stats])


# ---------------------------------------------------------------- output

def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".6g")
    return str(value)


def emit(table: TrialTable, fmt: str, path: str | os.PathLike | None = None) -> str:
    """Serialize ``table`` as csv or json; writes to ``path`` when given, returns the text."""
    records = [r.as_record() for r in table.rows]
    if fmt == "csv":
        lines = [",".join(CSV_COLUMNS)]
        lines += [",".join(_fmt(rec[c]) for c in CSV_COLUMNS) for rec in records]
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        meta = {"plan": table.plan.to_dict(), "version": __version__}
        text = json.dumps({"meta": meta, "rows": records}, indent=2) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}; expected csv or json")
    if path is not None:
        try:
            Path(path).write_text(text, newline="\n")
        except OSError as exc:
            raise OSError(f"cannot write results to {path}: {exc}") from exc
    return text


def read_csv(path: str | os.PathLike) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
