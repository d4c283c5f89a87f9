"""Finite integer domains.

A domain is a contiguous interval [lo, hi] or, when it has holes, an
interval plus a bit vector of the surviving elements.  Domains are
immutable: narrowing operations return a fresh domain together with a
delta that classifies what changed, which is what drives event posting
upstream.
"""

from __future__ import annotations

import enum
from typing import Iterator, Optional

DEFAULT_MAX_WIDTH = 1 << 20


class DomainError(ValueError):
    """Invalid domain construction (distinct from search-time failure)."""


class DeltaKind(enum.IntEnum):
    UNCHANGED = 0
    INSTANTIATED = 1
    BOUND_CHANGED = 2
    INNER_EXCLUDED = 3
    MULTI_CHANGED = 4
    EMPTIED = 5


class DomainDelta:
    """Classification of a single narrowing step.

    value carries the sole survivor for INSTANTIATED and the removed
    element for INNER_EXCLUDED.  bound_changed/excluded_inner are used
    only by MULTI_CHANGED.
    """

    __slots__ = ("kind", "value", "bound_changed", "excluded_inner")

    def __init__(self, kind, value=None, bound_changed=False, excluded_inner=()):
        self.kind = kind
        self.value = value
        self.bound_changed = bound_changed
        self.excluded_inner = excluded_inner

    def __repr__(self):
        if self.kind in (DeltaKind.INSTANTIATED, DeltaKind.INNER_EXCLUDED):
            return f"DomainDelta({self.kind.name}, {self.value})"
        if self.kind is DeltaKind.MULTI_CHANGED:
            return (f"DomainDelta(MULTI_CHANGED, bound_changed={self.bound_changed}, "
                    f"excluded_inner={list(self.excluded_inner)})")
        return f"DomainDelta({DeltaKind(self.kind).name})"

    def __eq__(self, other):
        return (isinstance(other, DomainDelta)
                and self.kind == other.kind
                and self.value == other.value
                and self.bound_changed == other.bound_changed
                and tuple(self.excluded_inner) == tuple(other.excluded_inner))

    def __hash__(self):
        return hash((self.kind, self.value, self.bound_changed,
                     tuple(self.excluded_inner)))


UNCHANGED = DomainDelta(DeltaKind.UNCHANGED)
EMPTIED = DomainDelta(DeltaKind.EMPTIED)
BOUND_CHANGED = DomainDelta(DeltaKind.BOUND_CHANGED)


class FiniteDomain:
    """Integer domain with cached bounds and cardinality.

    ``bits`` is None for a contiguous interval; otherwise bit i of
    ``bits`` is set iff ``offset + i`` is a member, lo and hi are
    members, and count < hi - lo + 1 (a hole exists).  Instances must
    not be mutated after construction.
    """

    __slots__ = ("lo", "hi", "count", "bits", "offset")

    def __init__(self, lo: int, hi: int, count: int,
                 bits: Optional[int] = None, offset: int = 0):
        self.lo = lo
        self.hi = hi
        self.count = count
        self.bits = bits
        self.offset = offset

    # -- queries ----------------------------------------------------------

    def contains(self, v: int) -> bool:
        if v < self.lo or v > self.hi:
            return False
        if self.bits is None:
            return True
        return (self.bits >> (v - self.offset)) & 1 == 1

    __contains__ = contains

    def is_singleton(self) -> bool:
        return self.count == 1

    def is_empty(self) -> bool:
        return self.count == 0

    def is_interval(self) -> bool:
        return self.bits is None

    def values(self) -> Iterator[int]:
        """Iterate members in ascending order."""
        if self.bits is None:
            return iter(range(self.lo, self.hi + 1))
        return self._iter_bits()

    def _iter_bits(self) -> Iterator[int]:
        bits = self.bits
        offset = self.offset
        while bits:
            low = bits & -bits
            yield offset + low.bit_length() - 1
            bits ^= low

    def __iter__(self):
        return self.values()

    def __len__(self):
        return self.count

    def __eq__(self, other):
        if not isinstance(other, FiniteDomain):
            return NotImplemented
        if self.count != other.count or self.lo != other.lo or self.hi != other.hi:
            return False
        if self.bits is None and other.bits is None:
            return True
        return tuple(self.values()) == tuple(other.values())

    def __hash__(self):
        return hash((self.lo, self.hi, self.count, tuple(self.values())))

    def __repr__(self):
        if self.count == 0:
            return "FiniteDomain(empty)"
        if self.bits is None:
            return f"FiniteDomain({self.lo}..{self.hi})"
        return "FiniteDomain({%s})" % ",".join(str(v) for v in self.values())


EMPTY_DOMAIN = FiniteDomain(0, -1, 0)


def make_interval(lo: int, hi: int, max_width: int = DEFAULT_MAX_WIDTH) -> FiniteDomain:
    """Contiguous domain lo..hi.  lo > hi or an over-wide span is a
    construction error, not a runtime failure."""
    if lo > hi:
        raise DomainError(f"empty interval {lo}..{hi}")
    if hi - lo + 1 > max_width:
        raise DomainError(f"interval {lo}..{hi} wider than cap {max_width}")
    return FiniteDomain(lo, hi, hi - lo + 1)


def make_set(values, max_width: int = DEFAULT_MAX_WIDTH) -> FiniteDomain:
    """Domain holding exactly the given values (duplicates collapse).
    Contiguous value sets normalize to interval form."""
    vals = sorted(set(values))
    if not vals:
        raise DomainError("empty value list")
    lo, hi = vals[0], vals[-1]
    if hi - lo + 1 > max_width:
        raise DomainError(f"value span {lo}..{hi} wider than cap {max_width}")
    count = len(vals)
    if count == hi - lo + 1:
        return FiniteDomain(lo, hi, count)
    bits = 0
    for v in vals:
        bits |= 1 << (v - lo)
    return FiniteDomain(lo, hi, count, bits, lo)


def _from_bits(bits: int, offset: int) -> FiniteDomain:
    """Normalize a bit vector: recompute bounds, drop the vector when
    the survivors are contiguous."""
    count = bits.bit_count()
    if count == 0:
        return EMPTY_DOMAIN
    lo = offset + (bits & -bits).bit_length() - 1
    hi = offset + bits.bit_length() - 1
    if count == hi - lo + 1:
        return FiniteDomain(lo, hi, count)
    return FiniteDomain(lo, hi, count, bits, offset)


def exclude_value(d: FiniteDomain, v: int) -> tuple[FiniteDomain, DomainDelta]:
    """Remove v from d.

    Delta classification: non-member -> UNCHANGED; last element ->
    EMPTIED; survivor count 1 -> INSTANTIATED; v at a bound ->
    BOUND_CHANGED (bounds re-tightened past holes); strictly interior
    v -> INNER_EXCLUDED(v).
    """
    if v < d.lo or v > d.hi:
        return d, UNCHANGED
    bits = d.bits
    if bits is not None and not (bits >> (v - d.offset)) & 1:
        return d, UNCHANGED
    if d.count == 1:
        return EMPTY_DOMAIN, EMPTIED
    if d.count == 2:
        other = d.hi if v == d.lo else d.lo
        return FiniteDomain(other, other, 1), DomainDelta(DeltaKind.INSTANTIATED, other)
    if bits is None:
        if v == d.lo:
            return FiniteDomain(v + 1, d.hi, d.count - 1), BOUND_CHANGED
        if v == d.hi:
            return FiniteDomain(d.lo, v - 1, d.count - 1), BOUND_CHANGED
        width = d.hi - d.lo + 1
        bits = ((1 << width) - 1) & ~(1 << (v - d.lo))
        return (FiniteDomain(d.lo, d.hi, d.count - 1, bits, d.lo),
                DomainDelta(DeltaKind.INNER_EXCLUDED, v))
    bits &= ~(1 << (v - d.offset))
    if v == d.lo or v == d.hi:
        return _from_bits(bits, d.offset), BOUND_CHANGED
    return (FiniteDomain(d.lo, d.hi, d.count - 1, bits, d.offset),
            DomainDelta(DeltaKind.INNER_EXCLUDED, v))


def intersect_range(d: FiniteDomain, lo: int, hi: int) -> tuple[FiniteDomain, DomainDelta]:
    """Intersect d with [lo, hi].

    A range intersection only trims at the edges, so the delta is never
    INNER_EXCLUDED: it is UNCHANGED, BOUND_CHANGED, INSTANTIATED, or
    EMPTIED.
    """
    nlo = d.lo if lo < d.lo else lo
    nhi = d.hi if hi > d.hi else hi
    if nlo > nhi:
        return EMPTY_DOMAIN, EMPTIED
    if nlo == d.lo and nhi == d.hi:
        return d, UNCHANGED
    if d.bits is None:
        count = nhi - nlo + 1
        if count == 1:
            return FiniteDomain(nlo, nlo, 1), DomainDelta(DeltaKind.INSTANTIATED, nlo)
        return FiniteDomain(nlo, nhi, count), BOUND_CHANGED
    width = nhi - nlo + 1
    mask = ((1 << width) - 1) << (nlo - d.offset)
    nd = _from_bits(d.bits & mask, d.offset)
    if nd.count == 0:
        return EMPTY_DOMAIN, EMPTIED
    if nd.count == 1:
        return nd, DomainDelta(DeltaKind.INSTANTIATED, nd.lo)
    return nd, BOUND_CHANGED


def is_subset_of(d1: FiniteDomain, d2: FiniteDomain,
                 excluded_hint: Optional[int] = None) -> bool:
    """True iff every element of d1 is in d2.

    Cheap rejections run before any element scan: a larger size or a
    wider interval rules d1 out; two hole-free intervals need no scan;
    and when excluded_hint (a value just removed from d2) is still a
    member of d1, d1 cannot be a subset.
    """
    if d1.count > d2.count:
        return False
    if d1.lo < d2.lo or d1.hi > d2.hi:
        return False
    if d2.bits is None:
        # every d1 element lies within d2's hole-free bounds
        return True
    if excluded_hint is not None and d1.contains(excluded_hint):
        return False
    if d1.bits is None:
        width = d1.hi - d1.lo + 1
        a = ((1 << width) - 1) << (d1.lo - d2.offset)
    else:
        shift = d1.offset - d2.offset
        a = d1.bits << shift if shift >= 0 else d1.bits >> -shift
    return a & ~d2.bits == 0
