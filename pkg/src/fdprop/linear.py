"""Propagators for linear equality and disequality constraints.

Binary constraints a*X = b*Y + c are supported at three consistency
levels that build on each other: forward checking (solve the other side
once one side is bound), interval (bound reduction from the opposite
domain's bounds), and arc (per-element counterpart exclusion).  N-ary
sums c + sum(a_i * X_i) = 0 get a single two-phase interval reducer, a
hybrid scheme that switches to binary arc propagation once at most two
variables remain free, and a plain forward-checking variant.

All propagator arithmetic is validated against a signed 64-bit budget
at posting time; models that could overflow it are rejected with
CapacityError before any agent is created.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .runtime import Rule, Runtime
from .store import BOUND, DOM, INS

INT64_MAX = (1 << 63) - 1


class CapacityError(ValueError):
    """Posting would allow intermediate values outside the 64-bit budget."""


class ConsistencyLevel(enum.Enum):
    FORWARD_CHECKING = "fc"
    INTERVAL = "ic"
    ARC = "ac"
    HYBRID = "hybrid"


@dataclass(frozen=True)
class BinaryLinear:
    """a*X = b*Y + c with positive a and b."""

    a: int
    x: int
    b: int
    y: int
    c: int

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise ValueError("binary constraint coefficients must be positive")


@dataclass(frozen=True)
class NaryLinear:
    """c + sum(a_i * X_i) = 0 with non-zero coefficients."""

    c: int
    terms: tuple[tuple[int, int], ...]  # (coefficient, var id)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(tuple(t) for t in self.terms))
        if not self.terms:
            raise ValueError("n-ary constraint needs at least one term")
        if any(a == 0 for a, _ in self.terms):
            raise ValueError("zero coefficient in n-ary constraint")


@dataclass(frozen=True)
class Diseq:
    """X != Y + c."""

    x: int
    y: int
    c: int = 0


def ceil_div(p: int, q: int) -> int:
    """Smallest integer >= p/q, exact for negative p.  q must be >= 1."""
    return -((-p) // q)


def floor_div(p: int, q: int) -> int:
    """Largest integer <= p/q, exact for negative p.  q must be >= 1."""
    return p // q


def _abs_max(domain) -> int:
    return max(abs(domain.lo), abs(domain.hi))


def _check_binary_capacity(store, a, x, b, y, c) -> None:
    worst = max(abs(a) * _abs_max(store.vars[x].domain),
                abs(b) * _abs_max(store.vars[y].domain) + abs(c))
    if worst > INT64_MAX:
        raise CapacityError(f"binary constraint exceeds 64-bit budget ({worst})")


def _check_nary_capacity(store, c, terms) -> None:
    worst = abs(c)
    for a, x in terms:
        worst += abs(a) * _abs_max(store.vars[x].domain)
    if worst > INT64_MAX:
        raise CapacityError(f"n-ary constraint exceeds 64-bit budget ({worst})")


def _true(_event) -> bool:
    return True


# -- binary constraints ------------------------------------------------------


def post_binary(rt: Runtime, bc: BinaryLinear, level: ConsistencyLevel) -> bool:
    """Spawn the agent set for a*X = b*Y + c at the requested level.
    Returns False on inconsistency found during generation-time
    reduction."""
    if level is ConsistencyLevel.HYBRID:
        raise ValueError("hybrid applies to n-ary constraints only")
    return _post_binary_signed(rt, bc.a, bc.x, bc.b, bc.y, bc.c, level)


def _post_binary_signed(rt: Runtime, a: int, x: int, b: int, y: int, c: int,
                        level: ConsistencyLevel) -> bool:
    """Internal binary form with a >= 1 and b of either sign (the shape
    an n-ary collapse produces; reflecting Y through an auxiliary
    variable is deliberately avoided)."""
    store = rt.store
    if x == y:
        # a*X = b*X + c  ->  (a-b)*X = c
        coef = a - b
        if coef == 0:
            return c == 0
        q, r = divmod(c, coef)
        if r:
            return False
        return store.bind(x, q)
    _check_binary_capacity(store, a, x, b, y, c)

    if not _spawn_forward(rt, a, x, b, y, c):
        return False
    if level is ConsistencyLevel.FORWARD_CHECKING:
        return True
    if b > 0:
        mirror = (b, y, a, x, -c)
    else:
        mirror = (-b, y, -a, x, c)
    if not _spawn_interval_dir(rt, a, x, b, y, c):
        return False
    if not _spawn_interval_dir(rt, *mirror):
        return False
    if level is ConsistencyLevel.INTERVAL:
        return True
    if not _spawn_arc_dir(rt, a, x, b, y, c):
        return False
    return _spawn_arc_dir(rt, *mirror)


def _spawn_forward(rt, a, x, b, y, c) -> bool:
    store = rt.store
    vx = store.vars[x]
    vy = store.vars[y]

    def both_free():
        return vx.bound_value is None and vy.bound_value is None

    def x_free():
        return vx.bound_value is None

    def solve_x(_event):
        t = b * vy.bound_value + c
        q, r = divmod(t, a)
        if r:
            return False
        return store.bind(x, q)

    def solve_y(_event):
        t = a * vx.bound_value - c
        q, r = divmod(t, b)
        if r:
            return False
        return store.bind(y, q)

    rules = [
        Rule(both_free, ((INS, x), (INS, y)), _true),
        Rule(x_free, None, solve_x),
        Rule(None, None, solve_y),
    ]
    return rt.spawn(rules, name=f"eq_fwd({a}*_{x}={b}*_{y}+{c})") is not None


def _spawn_interval_dir(rt, a, x, b, y, c) -> bool:
    """One direction agent: keep X within the bounds b*Y + c allows,
    at generation and whenever Y's bound moves, while both are free."""
    store = rt.store
    vx = store.vars[x]
    vy = store.vars[y]

    def both_free():
        return vx.bound_value is None and vy.bound_value is None

    def reduce(_event):
        dy = vy.domain
        if b > 0:
            t_lo = b * dy.lo + c
            t_hi = b * dy.hi + c
        else:
            t_lo = b * dy.hi + c
            t_hi = b * dy.lo + c
        return store.intersect(x, ceil_div(t_lo, a), floor_div(t_hi, a))

    rules = [
        Rule(both_free, ((BOUND, y), (INS, y)), reduce, run_on_generated=True),
        Rule(None, None, _true),
    ]
    return rt.spawn(rules, name=f"eq_ic({a}*_{x}<-{b}*_{y}+{c})") is not None


def _spawn_arc_dir(rt, a, x, b, y, c) -> bool:
    """One arc agent: at generation, drop the X values with no support
    in Y; afterwards, translate each inner exclusion from Y into the
    counterpart exclusion from X in constant time."""
    store = rt.store
    vx = store.vars[x]
    vy = store.vars[y]

    def both_free():
        return vx.bound_value is None and vy.bound_value is None

    def act(event):
        if event.kind == DOM:
            t = b * event.value + c
            q, r = divmod(t, a)
            if r == 0:
                return store.exclude(x, q)
            return True
        # generation-time revision against the current domain of Y
        dy = vy.domain
        for val in list(vx.domain.values()):
            t = a * val - c
            q, r = divmod(t, b)
            if r != 0 or not dy.contains(q):
                if not store.exclude(x, val):
                    return False
        return True

    rules = [
        Rule(both_free, ((DOM, y),), act, run_on_generated=True),
        Rule(None, None, _true),
    ]
    return rt.spawn(rules, name=f"eq_ac({a}*_{x}<-{b}*_{y}+{c})") is not None


# -- disequality ---------------------------------------------------------------


def post_diseq(rt: Runtime, x: int, y: int, c: int = 0) -> bool:
    """X != Y + c as a forward-checking agent: binding either side
    excludes the implied value from the other."""
    if x == y:
        return c != 0  # X != X + c holds for every integer iff c != 0
    store = rt.store
    vx = store.vars[x]
    vy = store.vars[y]

    def both_free():
        return vx.bound_value is None and vy.bound_value is None

    def x_free():
        return vx.bound_value is None

    def exclude_from_x(_event):
        return store.exclude(x, vy.bound_value + c)

    def exclude_from_y(_event):
        return store.exclude(y, vx.bound_value - c)

    rules = [
        Rule(both_free, ((INS, x), (INS, y)), _true),
        Rule(x_free, None, exclude_from_x),
        Rule(None, None, exclude_from_y),
    ]
    return rt.spawn(rules, name=f"neq(_{x},_{y},{c:+d})") is not None


# -- n-ary constraints -----------------------------------------------------------


def _product_bounds(a: int, domain) -> tuple[int, int]:
    if a > 0:
        return a * domain.lo, a * domain.hi
    return a * domain.hi, a * domain.lo


def _make_reducer(rt, c, terms):
    """Two-phase interval reducer for c + sum(a_i * X_i) = 0.

    The forward pass accumulates running bounds of the partial sums
    T_0 = c, T_i = T_(i-1) + a_i*X_i and fails unless 0 is inside the
    final range.  The backward pass pins T_n to 0 and walks back,
    narrowing each X_i from the surrounding partial-sum bounds and
    re-tightening T_(i-1) from the already-updated X_i.  One pass need
    not reach the interval fixpoint; the events posted by its own
    reductions re-activate the agent until quiescence.
    """
    store = rt.store
    vars_ = store.vars
    n = len(terms)

    def reduce(_event):
        lts = [0] * (n + 1)
        uts = [0] * (n + 1)
        lts[0] = uts[0] = c
        lo_acc = hi_acc = c
        for i, (a, x) in enumerate(terms, start=1):
            plo, phi = _product_bounds(a, vars_[x].domain)
            lo_acc += plo
            hi_acc += phi
            lts[i] = lo_acc
            uts[i] = hi_acc
        if lo_acc > 0 or hi_acc < 0:
            return False
        cur_lo = cur_hi = 0
        for i in range(n, 0, -1):
            a, x = terms[i - 1]
            num_lo = cur_lo - uts[i - 1]
            num_hi = cur_hi - lts[i - 1]
            if a > 0:
                new_lo = ceil_div(num_lo, a)
                new_hi = floor_div(num_hi, a)
            else:
                q = -a
                new_lo = ceil_div(-num_hi, q)
                new_hi = floor_div(-num_lo, q)
            if not store.intersect(x, new_lo, new_hi):
                return False
            plo, phi = _product_bounds(a, vars_[x].domain)
            cur_lo, cur_hi = cur_lo - phi, cur_hi - plo
        return cur_lo <= c <= cur_hi

    return reduce


def _watch_all(terms, kinds) -> tuple:
    return tuple((kind, x) for _, x in terms for kind in kinds)


def post_nary_unite(rt: Runtime, nc: NaryLinear) -> bool:
    """One interval-consistency propagator for the whole sum, woken by
    any instantiation or bound update of its variables."""
    _check_nary_capacity(rt.store, nc.c, nc.terms)
    reduce = _make_reducer(rt, nc.c, nc.terms)
    rules = [Rule(None, _watch_all(nc.terms, (INS, BOUND)), reduce,
                  run_on_generated=True)]
    return rt.spawn(rules, name=f"lin{len(nc.terms)}") is not None


def _collapse_terms(store, c, terms):
    """Fold bound variables into the constant; return (c', free terms)."""
    c2 = c
    free = []
    for a, x in terms:
        bv = store.vars[x].bound_value
        if bv is None:
            free.append((a, x))
        else:
            c2 += a * bv
    return c2, free


def _solve_unary(store, c2, a, x) -> bool:
    q, r = divmod(-c2, a)
    if r:
        return False
    return store.bind(x, q)


def post_nary_hybrid(rt: Runtime, nc: NaryLinear) -> bool:
    """Interval reduction while more than two variables are free; once
    the constraint turns binary (or tighter), fold the bound terms into
    the constant and hand over to the binary machinery at arc level."""
    store = rt.store
    _check_nary_capacity(store, nc.c, nc.terms)
    vars_ = store.vars
    terms = nc.terms
    reduce = _make_reducer(rt, nc.c, terms)

    def many_free():
        free = 0
        for _, x in terms:
            if vars_[x].bound_value is None:
                free += 1
                if free > 2:
                    return True
        return False

    def collapse(_event):
        c2, free = _collapse_terms(store, nc.c, terms)
        if not free:
            return c2 == 0
        if len(free) == 1:
            a, x = free[0]
            return _solve_unary(store, c2, a, x)
        (a1, x1), (a2, x2) = free
        # c2 + a1*X1 + a2*X2 = 0  ->  a1*X1 = (-a2)*X2 - c2
        a, b, k = a1, -a2, -c2
        if a < 0:
            a, b, k = -a, -b, -k
        return _post_binary_signed(rt, a, x1, b, x2, k, ConsistencyLevel.ARC)

    rules = [
        Rule(many_free, _watch_all(terms, (INS, BOUND)), reduce,
             run_on_generated=True),
        Rule(None, None, collapse),
    ]
    return rt.spawn(rules, name=f"lin{len(terms)}_hybrid") is not None


def post_nary_forward(rt: Runtime, nc: NaryLinear) -> bool:
    """Forward checking for an n-ary sum: sleep until a single variable
    remains free, then solve for it (or check the ground sum)."""
    store = rt.store
    _check_nary_capacity(store, nc.c, nc.terms)
    vars_ = store.vars
    terms = nc.terms

    def many_free():
        free = 0
        for _, x in terms:
            if vars_[x].bound_value is None:
                free += 1
                if free > 1:
                    return True
        return False

    def solve_last(_event):
        c2, free = _collapse_terms(store, nc.c, terms)
        if not free:
            return c2 == 0
        a, x = free[0]
        return _solve_unary(store, c2, a, x)

    rules = [
        Rule(many_free, _watch_all(terms, (INS,)), _true),
        Rule(None, None, solve_last),
    ]
    return rt.spawn(rules, name=f"lin{len(terms)}_fwd") is not None
