from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class RunResult:
    """Outcome of one seeded run.

    ``generations`` counts offspring populations produced after the initial
    one (for SEMO/GSEMO: iterations after the initial individual), so an
    engine with ``mu`` offspring per generation reports
    ``evaluations == mu * (generations + 1)``.
    """

    evaluations: int
    generations: int
    success: bool
    final_coverage: float
    seed: int
    budget: int
    wall_time_ms: int = 0
    peak_population: int = 0
    coverage_trajectory: list[float] = field(default_factory=list, repr=False)

    def __post_init__(self):
        if self.success and self.final_coverage != 1.0:
            raise ValueError("a successful run must cover the whole front")
