"""Ready-made plans for the scaling experiments used by scripts/ and the acceptance suite."""
from __future__ import annotations

from .harness import Cell, ExperimentPlan
from .problems import ProblemSpec

OMM_NS = (16, 32, 64, 128)
LOTZ_NS = (8, 16, 32, 64)
OJZJ_NS = (8, 12, 16, 20)
GSEMO_NS = (8, 16, 32)


def omm_plan(trials: int = 30, master_seed: int = 4, ns=OMM_NS) -> ExperimentPlan:
    cells = [Cell(ProblemSpec("omm", 2, n), "spea2", n + 1, n + 1, "bitwise") for n in ns]
    return ExperimentPlan(tuple(cells), trials, master_seed)


def lotz_plan(trials: int = 30, master_seed: int = 5, ns=LOTZ_NS) -> ExperimentPlan:
    cells = [Cell(ProblemSpec("lotz", 2, n), "spea2", n + 1, n + 1, "bitwise") for n in ns]
    return ExperimentPlan(tuple(cells), trials, master_seed)


def ojzj_plan(trials: int = 30, master_seed: int = 6, ns=OJZJ_NS, k: int = 2) -> ExperimentPlan:
    cells = [
        Cell(ProblemSpec("ojzj", 2, n, k), "spea2", n - 2 * k + 3, n - 2 * k + 3, "bitwise")
        for n in ns
    ]
    return ExperimentPlan(tuple(cells), trials, master_seed)


def gsemo_plan(trials: int = 50, master_seed: int = 8, ns=GSEMO_NS) -> ExperimentPlan:
    return ExperimentPlan(tuple(Cell(ProblemSpec("omm", 2, n), "gsemo") for n in ns), trials, master_seed)


PLANS = {"omm": omm_plan, "lotz": lotz_plan, "ojzj": ojzj_plan, "gsemo": gsemo_plan}
