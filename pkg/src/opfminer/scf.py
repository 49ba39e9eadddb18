"""Incremental support calculation with forgetting.

A super-pattern's occurrences are read off its two sub-patterns: position
``j`` is an occurrence of a product of p + q exactly when ``j-1`` ends an
occurrence of p and ``j`` ends an occurrence of q. Each length-m position
belongs to at most one pattern, so a matched pair (i, j) can never serve
another fusion at this level and is consumed from ``pre``/``suf``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import ForgettingWeights, Pattern, TimeSeries, fsup
from .fusion import Group, fuse, group_of, prefixop, suffixop


class InvalidFusion(ValueError):
    pass


@dataclass(eq=False)
class PatternRecord:
    pattern: Pattern
    group: Group
    occ: list[int]
    support: float
    # per-level consumable state; see reset()
    pre: dict = field(default_factory=dict, repr=False)
    suf: dict = field(default_factory=dict, repr=False)
    sufsup: float = 0.0
    prefix_pruned: bool = False
    suffix_pruned: bool = False
    prefix_key: Pattern = field(init=False, repr=False)
    suffix_key: Pattern = field(init=False, repr=False)

    def __post_init__(self):
        self.pattern = tuple(self.pattern)
        self.prefix_key = prefixop(self.pattern)
        self.suffix_key = suffixop(self.pattern)

    @classmethod
    def from_occurrences(cls, pattern, occ, weights: ForgettingWeights):
        occ = sorted(occ)
        return cls(pattern=tuple(pattern), group=group_of(pattern), occ=occ,
                   support=fsup(occ, weights))

    def reset(self):
        # dicts keep ascending insertion order and give O(1) removal
        self.pre = dict.fromkeys(self.occ)
        self.suf = dict.fromkeys(self.occ)
        self.sufsup = self.support
        self.prefix_pruned = False
        self.suffix_pruned = False

    def __len__(self):
        return len(self.pattern)


def scf_fuse(p: PatternRecord, q: PatternRecord, t: TimeSeries,
             f: ForgettingWeights, metrics=None) -> list[PatternRecord]:
    """Fuse two records, consuming matched positions from p.pre and q.suf.

    Returns one record per product of fuse(p, q); products may have empty
    occurrence lists. When the two products differ only in how the new
    first and last elements compare and those values are equal, the
    position is consumed but belongs to neither product.
    """
    m = len(p.pattern)
    if len(q.pattern) != m:
        raise InvalidFusion("operands differ in length")
    if p.prefix_pruned or q.suffix_pruned:
        raise InvalidFusion("fusing a pruned operand")
    products = fuse(p.pattern, q.pattern)
    if not products:
        raise InvalidFusion(f"{p.pattern} and {q.pattern} are not fusable")

    vals = t.values
    fv = f.values
    pre, suf = p.pre, q.suf
    low, high = [], []
    two = len(products) == 2
    probes = 0
    for i in list(pre):
        probes += 1
        j = i + 1
        if j not in suf:
            continue
        del pre[i]
        del suf[j]
        q.sufsup -= fv[j - 1]
        if not two:
            low.append(j)
            continue
        if j - m < 1:
            raise AssertionError(f"window start {j - m} out of range")
        first, last = vals[j - m - 1], vals[j - 1]
        if first < last:
            low.append(j)
        elif first > last:
            high.append(j)

    if metrics is not None:
        metrics.support_calcs += probes
    lists = (low, high) if two else (low,)
    return [
        PatternRecord(pattern=w, group=group_of(w), occ=ends, support=fsup(ends, f))
        for w, ends in zip(products, lists)
    ]


def check_prefix_prune(p: PatternRecord, minsup: float) -> bool:
    """Prune p as a left operand once fewer than minsup prefix positions remain.

    Sound because fsup(r) <= |L_r| <= |pre_p| for every remaining product.
    """
    if len(p.pre) < minsup:
        p.prefix_pruned = True
    return p.prefix_pruned


def check_suffix_prune(q: PatternRecord, minsup: float, by_count: bool = False) -> bool:
    """Prune q as a right operand once its remaining suffix mass drops below minsup.

    ``by_count`` compares |suf_q| instead of sufsup_q (a weaker bound).
    """
    remaining = len(q.suf) if by_count else q.sufsup
    if remaining < minsup:
        q.suffix_pruned = True
    return q.suffix_pruned


def _scan(vals, p) -> list[int]:
    # window matches p iff its values, read in rank order, strictly increase
    m = len(p)
    by_rank = sorted(range(m), key=lambda i: p[i])
    ends = []
    for j in range(m, len(vals) + 1):
        w = vals[j - m:j]
        prev = w[by_rank[0]]
        for idx in by_rank[1:]:
            cur = w[idx]
            if not prev < cur:
                break
            prev = cur
        else:
            ends.append(j)
    return ends


def match_support(t: TimeSeries, p, f: ForgettingWeights, metrics=None):
    """Full-scan support: (occurrence ends, fsup)."""
    occ = _scan(t.values, tuple(p))
    if metrics is not None:
        metrics.support_calcs += max(0, len(t) - len(p) + 1)
    return occ, fsup(occ, f)
