"""Pattern fusion, group labels, enumeration and priority ordering."""

from __future__ import annotations

from enum import IntEnum
from typing import Sequence

from .core import InvalidInput, Pattern, relative_order


class Group(IntEnum):
    G1 = 1
    G2 = 2
    G3 = 3
    G4 = 4


def prefixop(p: Sequence[int]) -> Pattern:
    if len(p) < 2:
        raise InvalidInput("prefixop needs a pattern of length >= 2")
    return relative_order(p[:-1])


def suffixop(p: Sequence[int]) -> Pattern:
    if len(p) < 2:
        raise InvalidInput("suffixop needs a pattern of length >= 2")
    return relative_order(p[1:])


def group_of(p: Sequence[int]) -> Group:
    """Group from the directions of the first two adjacent pairs.

    A fused product keeps the first m ranks' order of its left operand, so
    this label is inherited unchanged from p to every product of p + q.
    Length-2 patterns: (1,2) -> G1, (2,1) -> G2.
    """
    if len(p) < 2:
        raise InvalidInput("group_of needs a pattern of length >= 2")
    first_up = p[0] < p[1]
    if len(p) == 2:
        return Group.G1 if first_up else Group.G2
    second_up = p[1] < p[2]
    if first_up:
        return Group.G1 if second_up else Group.G2
    return Group.G3 if second_up else Group.G4


_ASCENDING_START = frozenset({Group.G1, Group.G2})
_DESCENDING_START = frozenset({Group.G3, Group.G4})

# q must start in the direction p takes at its second pair
_SUFFIX_RULES = {
    Group.G1: _ASCENDING_START,
    Group.G2: _DESCENDING_START,
    Group.G3: _ASCENDING_START,
    Group.G4: _DESCENDING_START,
}


def allowed_suffix_groups(p_group: Group, length: int = 3) -> frozenset[Group]:
    """Groups a right operand may belong to when fusing with a ``p_group`` pattern.

    At length 2 the join key is the single-element order (1), so both
    length-2 patterns pair with both.
    """
    if length == 2:
        return _ASCENDING_START
    return _SUFFIX_RULES[Group(p_group)]


def fuse(p: Sequence[int], q: Sequence[int]) -> tuple[Pattern, ...]:
    """Super-patterns of length m+1 with prefix order ``p`` and suffix order ``q``.

    Returns () when suffixop(p) != prefixop(q), two patterns when
    p[0] == q[-1] (the new first and last elements may compare either way)
    and one otherwise.
    """
    m = len(p)
    if len(q) != m:
        raise InvalidInput(f"cannot fuse patterns of lengths {m} and {len(q)}")
    if m < 2:
        raise InvalidInput("fusion needs patterns of length >= 2")
    if suffixop(p) != prefixop(q):
        return ()
    p1, qm = p[0], q[-1]

    def low_first():
        # new first element below new last element
        return (p1,) + tuple(x if x < p1 else x + 1 for x in q[:-1]) + (qm + 1,)

    def high_first():
        return (p1 + 1,) + tuple(x if x < qm else x + 1 for x in p[1:]) + (qm,)

    if p1 == qm:
        return (low_first(), high_first())
    if p1 < qm:
        return (low_first(),)
    return (high_first(),)


def fusion_case(p: Sequence[int], q: Sequence[int]) -> int:
    """1 when fuse(p, q) yields two products, 2 when it yields one."""
    return 1 if p[0] == q[-1] else 2


def enumerate_extensions(p: Sequence[int]) -> list[Pattern]:
    """All m+1 patterns whose first m elements have relative order ``p``.

    Ordered by the rank v given to the appended element.
    """
    if len(p) < 2:
        raise InvalidInput("enumerate_extensions needs a pattern of length >= 2")
    m = len(p)
    return [
        tuple(x if x < v else x + 1 for x in p) + (v,)
        for v in range(1, m + 2)
    ]


def build_plist(records, mode: str = "max") -> list:
    """Order frequent records for the next level's fusion loop.

    ``max`` sorts by support descending, ``min`` ascending, ties broken by
    the rank sequence; ``none`` keeps the input order.
    """
    records = list(records)
    if mode == "max":
        return sorted(records, key=lambda r: (-r.support, r.pattern))
    if mode == "min":
        return sorted(records, key=lambda r: (r.support, r.pattern))
    if mode == "none":
        return records
    raise ValueError(f"unknown priority mode {mode!r}")
