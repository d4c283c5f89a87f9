import itertools
import random

import pytest

from conftest import random_model

from fdprop.alldistinct import AllDistinctPosting, Strategy, post_alldistinct
from fdprop.benchmarks import queens_model
from fdprop.domain import make_interval
from fdprop.model import SolverConfig, build, solve_model
from fdprop.oracle import enumerate_solutions
from fdprop.runtime import Runtime
from fdprop.search import (
    ALL_SOLUTIONS,
    FIRST_FAIL,
    LabelingSpec,
    label,
)
from fdprop.store import InvariantError, Store


def test_single_variable_no_constraints():
    store = Store()
    rt = Runtime(store)
    x = store.new_var(make_interval(3, 3))
    stats, sols = label(rt, [x])
    assert stats.solutions == 1 and stats.backtracks == 0
    assert sols == [(3,)]


def brute_queens(n):
    sols = set()
    for perm in itertools.permutations(range(1, n + 1)):
        if all(abs(perm[i] - perm[j]) != j - i
               for i in range(n) for j in range(i + 1, n)):
            sols.add(perm)
    return sols


def test_queens8_all_solutions_match_permutation_oracle():
    expected = brute_queens(8)
    r = solve_model(queens_model(8), SolverConfig(mode="all"))
    assert set(r.solutions) == expected
    assert r.stats.solutions == 92


def test_root_failure_returns_zero_backtracks():
    store = Store()
    rt = Runtime(store)
    xs = [store.new_var(make_interval(1, 2)) for _ in range(3)]
    ok = post_alldistinct(rt, AllDistinctPosting(tuple(xs), Strategy.WEAK_AC))
    assert not ok  # refuted before any labeling


def test_determinism():
    rng = random.Random(2)
    model = random_model(rng)
    a = solve_model(model, SolverConfig(mode="all"))
    b = solve_model(model, SolverConfig(mode="all"))
    assert a.solutions == b.solutions
    assert (a.stats.backtracks, a.stats.solutions) == (b.stats.backtracks, b.stats.solutions)


def test_completeness_on_random_models():
    rng = random.Random(21)
    for _ in range(60):
        model = random_model(rng)
        expected = enumerate_solutions(model.to_ground())
        for level in ("fc", "ic", "ac"):
            r = solve_model(model, SolverConfig(level=level, mode="all"))
            assert set(r.solutions) == expected


def test_backtrack_monotonicity_across_levels():
    rng = random.Random(22)
    for _ in range(60):
        model = random_model(rng)
        counts = {}
        for level in ("fc", "ic", "ac"):
            r = solve_model(model, SolverConfig(level=level, mode="first"))
            counts[level] = r.stats.backtracks
        assert counts["ac"] <= counts["ic"] <= counts["fc"]


def test_first_fail_order_finds_same_solutions():
    rng = random.Random(23)
    for _ in range(20):
        model = random_model(rng)
        expected = enumerate_solutions(model.to_ground())
        store, rt, ok = build(model, SolverConfig())
        if ok:
            ok = rt.run_to_fixpoint()
        if not ok:
            assert expected == set()
            continue
        stats, sols = label(rt, model.label_order,
                            LabelingSpec(order=FIRST_FAIL, mode=ALL_SOLUTIONS))
        assert set(sols) == expected


def test_unlabeled_unbound_variable_is_an_error():
    store = Store()
    rt = Runtime(store)
    x = store.new_var(make_interval(1, 3))
    store.new_var(make_interval(1, 3))  # never labeled, never bound
    with pytest.raises(InvariantError):
        label(rt, [x])


def test_labeling_spec_validation():
    with pytest.raises(ValueError):
        LabelingSpec(order="sideways")
    with pytest.raises(ValueError):
        LabelingSpec(mode="some")
