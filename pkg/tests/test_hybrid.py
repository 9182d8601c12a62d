import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from natureopt.algorithms import Budget, make_algorithm, run
from natureopt.benchmarks import make_problem
from natureopt.core import CountedObjective
from natureopt.algorithms.base import initial_state
from natureopt.hybrid import (
    HybridSpec,
    Stage,
    SwitchStepper,
    build_stepper,
    combination_count,
    run_hybrid,
    run_parallel_split,
    run_parallel_switch,
    run_sequential,
)
from natureopt.sampling import RngStream

SPHERE = make_problem("sphere", 2)


def seq(*stages):
    return HybridSpec("sequential", tuple(Stage(name, share=share) for name, share in stages))


def switch(names, probs):
    return HybridSpec("parallel_switch", tuple(Stage(n) for n in names), probs)


def split(names, sizes, period=10):
    return HybridSpec("parallel_split", tuple(Stage(n) for n in names), partition=sizes, merge_period=period)


# combination_count -----------------------------------------------------------


def test_combination_known_values():
    assert combination_count(30, 2) == 435
    assert combination_count(30, 5) == 142506


@pytest.mark.parametrize("n", [0, 1, 7, 64])
def test_combination_boundaries(n):
    assert combination_count(n, 0) == 1
    assert combination_count(n, n) == 1


def test_combination_errors():
    with pytest.raises(ValueError):
        combination_count(3, 4)
    with pytest.raises(ValueError):
        combination_count(-1, 0)


def test_combination_symmetry_and_pascal_exhaustive():
    for n in range(41):
        for k in range(n + 1):
            assert combination_count(n, k) == combination_count(n, n - k)
            if 0 < k < n:
                assert combination_count(n, k) == combination_count(n - 1, k - 1) + combination_count(n - 1, k)


@given(st.integers(0, 200), st.data())
def test_combination_matches_factorial_oracle(n, data):
    k = data.draw(st.integers(0, n))
    assert combination_count(n, k) == math.factorial(n) // (math.factorial(k) * math.factorial(n - k))


def test_combination_large_exact():
    assert combination_count(64, 32) == 1832624140942590534


# spec validation -------------------------------------------------------------


@pytest.mark.parametrize(
    "build",
    [
        lambda: seq(("apso", 1.0)),
        lambda: seq(("apso", 0.5), ("pso", 0.4)),
        lambda: switch(["apso", "firefly"], (0.6, 0.6)),
        lambda: switch(["apso", "firefly"], (1.0,)),
        lambda: split(["cuckoo", "fpa"], (2, 10)),
        lambda: split(["apso"], (20,), period=0),
        lambda: HybridSpec("full", (Stage("apso"),)),
        lambda: HybridSpec("parallel_switch", (), ()),
        lambda: switch(["nope", "apso"], (0.5, 0.5)),
    ],
)
def test_invalid_specs(build):
    with pytest.raises(ValueError):
        build()


def test_nesting_depth_capped():
    inner = switch(["apso", "fpa"], (0.5, 0.5))
    level2 = HybridSpec("parallel_switch", (Stage(inner), Stage("pso")), (0.5, 0.5))
    level3 = HybridSpec("parallel_switch", (Stage(level2), Stage("pso")), (0.5, 0.5))
    with pytest.raises(ValueError, match="deeper"):
        HybridSpec("parallel_switch", (Stage(level3), Stage("pso")), (0.5, 0.5))


def test_sequential_inside_parallel_rejected():
    with pytest.raises(ValueError):
        HybridSpec("parallel_switch", (Stage(seq(("apso", 0.5), ("pso", 0.5))), Stage("pso")), (0.5, 0.5))


def test_stage_rounding_to_zero_rejected():
    spec = seq(("apso", 0.999), ("pso", 0.001))
    with pytest.raises(ValueError, match="no budget"):
        run_sequential(spec, SPHERE, 100, RngStream(0), n=10)


# sequential ------------------------------------------------------------------


def test_sequential_best_carries_over():
    rec = run_sequential(seq(("apso", 0.5), ("apso", 0.5)), SPHERE, 2000, RngStream(4), n=20)
    rec.check()
    stages = [row.stage for row in rec.trace]
    assert "0:apso" in stages and "1:apso" in stages
    boundary = stages.index("1:apso")
    assert rec.trace[boundary].best_fitness <= rec.trace[boundary - 1].best_fitness


def test_sequential_budget_accounting():
    total = 3000
    rec = run_sequential(seq(("pso", 0.5), ("firefly", 0.5)), SPHERE, total, RngStream(9), n=20)
    # PSO steps cost n = 20; firefly steps at most n(n-1) = 380.
    assert total <= rec.evaluations < total + 20 * 19
    # Shares split what remains after the 20 initial evaluations.
    target = 20 + round(0.5 * (total - 20))
    first = [r for r in rec.trace if r.stage == "0:pso"]
    assert target <= first[-1].evaluations < target + 20


def test_sequential_resets_auxiliary_state_between_stages():
    spec = seq(("pso", 0.5), ("bat", 0.5))
    problem = SPHERE
    objective = CountedObjective(problem)
    rng = RngStream(1)
    state = initial_state(problem, 10, objective, rng)
    from natureopt.hybrid import _run_stages
    from natureopt.algorithms import Tracer

    final = _run_stages(spec, state, objective, rng, problem, Budget(1000), Tracer(), (), "")
    assert set(final.aux) == {"bat"}


# parallel switch --------------------------------------------------------------


def test_switch_degenerate_reproduces_base():
    pure = run(make_algorithm("apso"), SPHERE, 20, Budget(3000), RngStream(5))
    hyb = run_parallel_switch(switch(["apso", "firefly"], (1.0, 0.0)), SPHERE, 3000, RngStream(5), n=20)
    assert hyb.trace == pure.trace


def test_switch_selection_frequencies():
    stepper = SwitchStepper([make_algorithm("apso"), make_algorithm("firefly")], (0.5, 0.5), RngStream(31).spawn(1))
    picks = [stepper.select(stepper.selector.random()) for _ in range(10_000)]
    assert abs(picks.count(0) - 5000) <= 150


def test_switch_selection_counts_in_a_run():
    spec = switch(["apso", "fpa"], (0.5, 0.5))
    stepper = build_stepper(Stage(spec), RngStream(8))
    objective = CountedObjective(SPHERE)
    state = stepper.prepare(initial_state(SPHERE, 3, objective, RngStream(8)), SPHERE)
    for _ in range(2000):
        state = stepper.step(state, objective, RngStream(8))
    assert sum(stepper.selections) == 2000
    assert abs(stepper.selections[0] - 1000) <= 3 * math.sqrt(2000 * 0.25)


def test_switch_keeps_all_auxiliary_state():
    rec_stepper = build_stepper(Stage(switch(["pso", "bat"], (0.5, 0.5))), RngStream(3))
    objective = CountedObjective(SPHERE)
    state = rec_stepper.prepare(initial_state(SPHERE, 6, objective, RngStream(3)), SPHERE)
    for _ in range(20):
        state = rec_stepper.step(state, objective, RngStream(3))
    assert {"pso", "bat"} <= set(state.aux)


def test_switch_monotone():
    rec = run_parallel_switch(switch(["pso", "bat", "fpa"], (0.3, 0.3, 0.4)), make_problem("yang-multimodal", 2),
                              4000, RngStream(12), n=15)
    rec.check()


# parallel split --------------------------------------------------------------


def test_split_degenerate_reproduces_base():
    pure = run(make_algorithm("cuckoo"), SPHERE, 20, Budget(3000), RngStream(6))
    hyb = run_parallel_split(split(["cuckoo"], (20,)), SPHERE, 3000, RngStream(6))
    assert hyb.trace == pure.trace


def test_split_merge_conserves_population():
    stepper = build_stepper(Stage(split(["cuckoo", "fpa", "apso"], (4, 5, 3), period=1)), RngStream(2))
    objective = CountedObjective(SPHERE)
    state = stepper.prepare(initial_state(SPHERE, 12, objective, RngStream(2)), SPHERE)
    merged = stepper.merge(state, SPHERE)
    assert sorted(map(tuple, merged.positions)) == sorted(map(tuple, state.positions))
    assert sorted(merged.fitness) == sorted(state.fitness)
    subs = merged.aux[stepper.key]["subpops"]
    assert [s.size for s in subs] == [4, 5, 3]
    # Round-robin deal: ranks 0, 1, 2 go to different subpopulations.
    ranked = np.sort(state.fitness)
    assert [s.fitness[0] for s in subs] == list(ranked[:3])


def test_split_merge_during_run_conserves_fitness_multiset():
    stepper = build_stepper(Stage(split(["cuckoo", "fpa"], (5, 5), period=3)), RngStream(2))
    objective = CountedObjective(SPHERE)
    state = stepper.prepare(initial_state(SPHERE, 10, objective, RngStream(2)), SPHERE)
    rng = RngStream(2)
    for _ in range(9):
        state = stepper.step(state, objective, rng)
        assert state.size == 10
    # Re-deal only permutes agents.
    again = stepper.merge(state, SPHERE)
    assert sorted(again.fitness) == sorted(state.fitness)


def test_split_reproducible():
    spec = split(["cuckoo", "fpa"], (10, 10), period=10)
    a = run_parallel_split(spec, SPHERE, 4000, RngStream(44))
    b = run_parallel_split(spec, SPHERE, 4000, RngStream(44))
    assert a.trace == b.trace
    assert a.best_position.tobytes() == b.best_position.tobytes()
    a.check()


def test_split_population_mismatch():
    with pytest.raises(ValueError):
        run_parallel_split(split(["cuckoo", "fpa"], (10, 10)), SPHERE, 4000, RngStream(44), n=30)


# nesting -----------------------------------------------------------------------


def test_mixed_hybrid_runs():
    inner_switch = switch(["apso", "bat"], (0.5, 0.5))
    inner_split = split(["cuckoo", "fpa"], (10, 10))
    spec = HybridSpec("sequential", (Stage(inner_switch, share=0.5), Stage(inner_split, share=0.5)))
    rec = run_hybrid(spec, SPHERE, 3000, RngStream(2), n=20)
    rec.check()
    assert {r.stage for r in rec.trace} == {"init", "0:parallel_switch", "1:parallel_split"}


def test_nested_sequential_in_sequential():
    inner = seq(("apso", 0.5), ("fpa", 0.5))
    spec = HybridSpec("sequential", (Stage(inner, share=0.5), Stage("cuckoo", share=0.5)))
    rec = run_hybrid(spec, SPHERE, 4000, RngStream(2), n=10)
    rec.check()
    assert {"0:sequential/0:apso", "0:sequential/1:fpa", "1:cuckoo"} <= {r.stage for r in rec.trace}


def test_switch_inside_split():
    spec = HybridSpec("parallel_split", (Stage(switch(["apso", "fpa"], (0.5, 0.5))), Stage("cuckoo")),
                      partition=(6, 6), merge_period=5)
    rec = run_hybrid(spec, SPHERE, 3000, RngStream(3))
    rec.check()
