import random

import pytest

from conftest import store_snapshot

from fdprop.domain import DeltaKind, DomainDelta, make_interval, make_set
from fdprop.store import (
    BOUND,
    DOM,
    INS,
    Bind,
    ExcludeValue,
    IntersectRange,
    InvariantError,
    Store,
)


def recording_store():
    events = []
    store = Store(event_sink=lambda kind, var, value: events.append((kind, var, value)))
    return store, events


def test_new_var_basics():
    store = Store()
    x = store.new_var(make_interval(1, 5))
    y = store.new_var(make_interval(1, 5))
    assert x != y
    assert store.value(x) is None


def test_new_var_singleton_autobinds_silently():
    store, events = recording_store()
    x = store.new_var(make_interval(7, 7))
    assert store.value(x) == 7
    assert events == []


def test_tighten_event_mapping():
    store, events = recording_store()
    x = store.new_var(make_interval(1, 5))
    assert store.exclude(x, 3)
    assert events == [(DOM, x, 3)]

    events.clear()
    y = store.new_var(make_set([2, 3]))
    assert store.exclude(y, 3)
    assert events == [(INS, y, None)]  # no bound event on instantiation
    assert store.value(y) == 2

    events.clear()
    z = store.new_var(make_interval(1, 5))
    assert store.intersect(z, 2, 9)
    assert events == [(BOUND, z, None)]

    events.clear()
    w = store.new_var(make_interval(4, 4))
    assert not store.exclude(w, 4)


def test_bind_posts_ins_and_sets_value():
    store, events = recording_store()
    x = store.new_var(make_interval(1, 5))
    assert store.bind(x, 3)
    assert store.value(x) == 3
    assert events == [(INS, x, None)]
    assert store.bind(x, 3)
    assert not store.bind(x, 4)


def test_tighten_op_records():
    store, _ = recording_store()
    x = store.new_var(make_interval(1, 9))
    assert store.tighten(x, ExcludeValue(5))
    assert store.tighten(x, IntersectRange(2, 8))
    assert store.tighten(x, Bind(4))
    assert store.value(x) == 4
    with pytest.raises(TypeError):
        store.tighten(x, "bogus")


def test_multi_changed_delta_mapping():
    store, events = recording_store()
    x = store.new_var(make_interval(1, 9))
    delta = DomainDelta(DeltaKind.MULTI_CHANGED, bound_changed=True,
                        excluded_inner=[4, 6])
    store.apply_delta_events(x, delta)
    assert events == [(BOUND, x, None), (DOM, x, 4), (DOM, x, 6)]


def test_trail_round_trip_single():
    store = Store()
    x = store.new_var(make_interval(1, 5))
    before = store_snapshot(store)
    cp = store.push_choice_point()
    store.exclude(x, 3)
    store.intersect(x, 2, 5)
    assert store_snapshot(store) != before
    store.backtrack_to(cp)
    assert store_snapshot(store) == before


def test_backtrack_requires_live_choice_point():
    store = Store()
    store.new_var(make_interval(1, 3))
    cp = store.push_choice_point()
    store.backtrack_to(cp)
    with pytest.raises(InvariantError):
        store.backtrack_to(cp)


def test_tightening_is_contracting():
    rng = random.Random(5)
    store = Store()
    xs = [store.new_var(make_interval(-5, 6)) for _ in range(4)]
    for _ in range(200):
        x = rng.choice(xs)
        before = set(store.domain(x).values())
        if rng.random() < 0.5:
            ok = store.exclude(x, rng.randint(-7, 8))
        else:
            lo = rng.randint(-7, 6)
            ok = store.intersect(x, lo, lo + rng.randint(0, 10))
        if not ok:
            break
        assert set(store.domain(x).values()) <= before


def test_nested_backtracking_matches_reference_snapshots():
    rng = random.Random(42)
    for _ in range(60):
        store = Store()
        xs = [store.new_var(make_interval(-3, rng.randint(0, 8))) for _ in range(3)]
        stack = []
        for _ in range(40):
            action = rng.random()
            if action < 0.35:
                stack.append((store.push_choice_point(), store_snapshot(store)))
            elif action < 0.55 and stack:
                cp, snap = stack.pop()
                store.backtrack_to(cp)
                assert store_snapshot(store) == snap
            else:
                x = rng.choice(xs)
                if store.domain(x).count == 0:
                    continue
                if rng.random() < 0.5:
                    store.exclude(x, rng.randint(-4, 9))
                else:
                    lo = rng.randint(-4, 8)
                    store.intersect(x, lo, lo + rng.randint(0, 6))
        while stack:
            cp, snap = stack.pop()
            store.backtrack_to(cp)
            assert store_snapshot(store) == snap


def test_event_faithfulness_randomized():
    """Posted events are exactly what the delta classification maps to."""
    from fdprop.domain import exclude_value, intersect_range

    rng = random.Random(7)
    for _ in range(300):
        store, events = recording_store()
        x = store.new_var(make_set(sorted(rng.sample(range(-5, 15), rng.randint(2, 10)))))
        dom_before = store.domain(x)
        if rng.random() < 0.5:
            v = rng.randint(-6, 16)
            _, delta = exclude_value(dom_before, v)
            store.exclude(x, v)
        else:
            lo = rng.randint(-6, 14)
            hi = lo + rng.randint(0, 8)
            _, delta = intersect_range(dom_before, lo, hi)
            store.intersect(x, lo, hi)
        kind = delta.kind
        if kind is DeltaKind.UNCHANGED or kind is DeltaKind.EMPTIED:
            assert events == []
        elif kind is DeltaKind.INSTANTIATED:
            assert events == [(INS, x, None)]
        elif kind is DeltaKind.BOUND_CHANGED:
            assert events == [(BOUND, x, None)]
        else:
            assert events == [(DOM, x, delta.value)]
