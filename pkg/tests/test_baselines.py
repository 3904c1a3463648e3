import pytest

from spea2_runtime.baselines import BaselineConfig, Population, baseline_run
from spea2_runtime.bitstring import Bitstring
from spea2_runtime.dominance import dominates
from spea2_runtime.problems import ProblemSpec, make_individual, pareto_front


def _check_population(pop):
    vecs = [x.objectives for x in pop.members]
    assert len(set(vecs)) == len(vecs)
    assert not any(dominates(u, v) for u in vecs for v in vecs)
    assert set(pop.by_vector) == set(vecs)


@pytest.mark.parametrize("algorithm", ["semo", "gsemo"])
@pytest.mark.parametrize("spec", [ProblemSpec("lotz", 2, 8), ProblemSpec("ojzj", 2, 8, 2), ProblemSpec("lotz", 4, 4)],
                         ids=lambda s: s.describe())
def test_population_invariant_every_step(algorithm, spec):
    for seed in range(3):
        r = baseline_run(BaselineConfig(spec, algorithm, budget=3_000, seed=seed),
                         observer=lambda it, pop: _check_population(pop))
        assert r.evaluations <= 3_000


def test_gsemo_population_bounded_by_front_on_omm():
    spec = ProblemSpec("omm", 2, 16)
    for seed in range(10):
        r = baseline_run(BaselineConfig(spec, "gsemo", seed=seed))
        assert r.success and r.peak_population <= 17


def test_front_vectors_persist():
    spec = ProblemSpec("lotz", 2, 8)
    front = pareto_front(spec)
    seen: set = set()

    def observer(it, pop):
        current = {x.objectives for x in pop.members}
        assert seen <= current
        seen.update(current & front)

    baseline_run(BaselineConfig(spec, "gsemo", seed=4), observer=observer)


def test_duplicate_vector_keeps_incumbent():
    spec = ProblemSpec("omm", 2, 4)
    a = make_individual(spec, Bitstring.from_digits("1100"))
    b = make_individual(spec, Bitstring.from_digits("0011"))
    pop = Population(a)
    assert not pop.offer(b)
    assert pop.members == [a]


def test_accounting_and_determinism():
    cfg = BaselineConfig(ProblemSpec("lotz", 2, 10), "semo", seed=21)
    a, b = baseline_run(cfg), baseline_run(cfg)
    assert (a.evaluations, a.coverage_trajectory) == (b.evaluations, b.coverage_trajectory)
    assert a.evaluations == a.generations + 1


def test_invalid_configs():
    spec = ProblemSpec("omm", 2, 4)
    with pytest.raises(ValueError):
        BaselineConfig(spec, budget=0)
    with pytest.raises(ValueError):
        BaselineConfig(spec, "nsga")
    r = baseline_run(BaselineConfig(ProblemSpec("omm", 2, 16), budget=1, seed=0))
    assert r.evaluations == 1 and not r.success
