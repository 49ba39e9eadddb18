"""The level-wise mining loop and its ablation variants."""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from .core import (
    ForgettingWeights,
    InvalidConfig,
    Pattern,
    TimeSeries,
    as_series,
    forgetting_weights,
    fsup,
)
from .fusion import (
    Group,
    allowed_suffix_groups,
    build_plist,
    enumerate_extensions,
    fuse,
    group_of,
    suffixop,
)
from .scf import (
    PatternRecord,
    check_prefix_prune,
    check_suffix_prune,
    match_support,
    scf_fuse,
)

CANDIDATE_GEN = ("gp_fusion", "plain_fusion", "enumeration")
PRIORITY = ("max", "min", "none")
SUPPORT_METHOD = ("scf", "naive_match")
PRUNE = ("both", "prefix_only", "suffix_only", "same_suffix", "none")

# name -> (candidate_gen, priority, support_method, prune)
PRESETS = {
    "opf-miner": ("gp_fusion", "max", "scf", "both"),
    "opf-enum": ("enumeration", "max", "scf", "both"),
    "opf-nogroup": ("plain_fusion", "max", "scf", "both"),
    "opf-nopriority": ("gp_fusion", "none", "scf", "both"),
    "opf-minpriority": ("gp_fusion", "min", "scf", "both"),
    "mat-opf": ("plain_fusion", "max", "naive_match", "none"),
    "opf-same": ("gp_fusion", "max", "scf", "same_suffix"),
    "opf-nopre": ("gp_fusion", "max", "scf", "suffix_only"),
    "opf-nosuf": ("gp_fusion", "max", "scf", "prefix_only"),
    "opf-noprune": ("gp_fusion", "max", "scf", "none"),
    "efo-opf": ("plain_fusion", "none", "scf", "prefix_only"),
}


class MiningError(RuntimeError):
    pass


@dataclass(frozen=True)
class MiningConfig:
    minsup: float
    k_coeff: float | None = 1.0
    k_abs: float | None = None
    candidate_gen: str = "gp_fusion"
    priority: str = "max"
    support_method: str = "scf"
    prune: str = "both"
    max_length: int | None = None
    preset: str | None = None

    def __post_init__(self):
        if not (isinstance(self.minsup, (int, float)) and math.isfinite(self.minsup)
                and self.minsup > 0):
            raise InvalidConfig(f"minsup must be a finite value > 0, got {self.minsup!r}")
        if self.k_abs is not None:
            if self.k_coeff not in (None, 1.0):
                raise InvalidConfig("give either k_coeff or k_abs, not both")
            object.__setattr__(self, "k_coeff", None)
            if not self.k_abs > 0:
                raise InvalidConfig(f"k_abs must be > 0, got {self.k_abs}")
        elif self.k_coeff is None or not self.k_coeff > 0:
            raise InvalidConfig(f"k_coeff must be > 0, got {self.k_coeff}")
        for name, allowed in (("candidate_gen", CANDIDATE_GEN), ("priority", PRIORITY),
                              ("support_method", SUPPORT_METHOD), ("prune", PRUNE)):
            if getattr(self, name) not in allowed:
                raise InvalidConfig(f"{name} must be one of {allowed}, got {getattr(self, name)!r}")
        if self.support_method == "naive_match" and self.prune != "none":
            raise InvalidConfig("pruning needs scf support bookkeeping; use prune='none'")
        if self.max_length is not None and self.max_length < 2:
            raise InvalidConfig("max_length must be >= 2")

    @classmethod
    def from_preset(cls, name: str, minsup: float, **kw) -> "MiningConfig":
        key = name.lower()
        if key not in PRESETS:
            raise InvalidConfig(f"unknown preset {name!r}; known: {', '.join(PRESETS)}")
        gen, prio, sup, prune = PRESETS[key]
        return cls(minsup=minsup, candidate_gen=gen, priority=prio,
                   support_method=sup, prune=prune, preset=key, **kw)

    def k_for(self, n: int) -> float:
        return self.k_abs if self.k_abs is not None else self.k_coeff / n

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Metrics:
    candidates: int = 0
    fusions: int = 0
    support_calcs: int = 0
    wall_time: float = 0.0

    def counters(self) -> dict:
        return {"candidates": self.candidates, "fusions": self.fusions,
                "support_calcs": self.support_calcs}


@dataclass
class MiningResult:
    levels: dict[int, list[PatternRecord]]
    metrics: Metrics
    config: MiningConfig
    k: float = 0.0
    n: int = 0
    series_id: str | None = None

    @property
    def records(self) -> list[PatternRecord]:
        return [r for m in sorted(self.levels) for r in self.levels[m]]

    def supports(self) -> dict[Pattern, float]:
        return {r.pattern: r.support for r in self.records}

    def patterns(self) -> set[Pattern]:
        return {r.pattern for r in self.records}

    @property
    def max_length(self) -> int:
        return max(self.levels, default=0)


def mine_level2(t: TimeSeries, f: ForgettingWeights, minsup: float,
                metrics: Metrics | None = None) -> list[PatternRecord]:
    """Ascents and descents in one scan; keeps the frequent ones."""
    vals = t.values
    up, down = [], []
    for j in range(2, len(vals) + 1):
        a, b = vals[j - 2], vals[j - 1]
        if a < b:
            up.append(j)
        elif a > b:
            down.append(j)
    if metrics is not None:
        metrics.support_calcs += max(0, len(vals) - 1)
    out = []
    for pattern, occ in (((1, 2), up), ((2, 1), down)):
        rec = PatternRecord(pattern=pattern, group=Group.G1 if pattern == (1, 2) else Group.G2,
                            occ=occ, support=fsup(occ, f))
        if rec.support >= minsup:
            out.append(rec)
    return out


class _Level:
    """One pass from F_m to F_{m+1}."""

    def __init__(self, frequent, t, f, config: MiningConfig, metrics: Metrics, trace):
        self.t, self.f, self.cfg, self.metrics, self.trace = t, f, config, metrics, trace
        self.minsup = config.minsup
        self.plist = build_plist(frequent, config.priority)
        for r in self.plist:
            r.reset()
        self.m = len(self.plist[0].pattern)
        prune = config.prune
        self.use_pre = prune in ("both", "prefix_only", "same_suffix")
        self.use_suf = prune in ("both", "suffix_only", "same_suffix")
        self.suf_by_count = prune == "same_suffix"
        self.naive = config.support_method == "naive_match"
        self.out: list[PatternRecord] = []

    def _event(self, *ev):
        if self.trace is not None:
            self.trace.append(ev)

    def _prefix_pruned(self, p, q=None) -> bool:
        if self.use_pre and check_prefix_prune(p, self.minsup):
            self._event("prefix_prune", p.pattern, q.pattern if q else None, len(p.pre))
            return True
        return False

    def _suffix_pruned(self, p, q) -> bool:
        if self.use_suf and check_suffix_prune(q, self.minsup, self.suf_by_count):
            amount = len(q.suf) if self.suf_by_count else q.sufsup
            self._event("suffix_prune", p.pattern, q.pattern, amount)
            return True
        return False

    def _keep(self, rec: PatternRecord):
        self._event("candidate", rec.pattern, rec.support, tuple(rec.occ))
        if rec.support >= self.minsup:
            self.out.append(rec)

    def run(self) -> list[PatternRecord]:
        if self.cfg.candidate_gen == "enumeration":
            self._enumerate()
        else:
            self._fuse_all(self.cfg.candidate_gen == "gp_fusion")
        return self.out

    def _fuse_all(self, grouped: bool):
        for p in self.plist:
            if self._prefix_pruned(p):
                continue
            if grouped:
                allowed = allowed_suffix_groups(p.group, self.m)
                qlist = [q for q in self.plist if q.group in allowed]
            else:
                qlist = self.plist
            for q in qlist:
                if self._prefix_pruned(p, q):
                    break
                if self._suffix_pruned(p, q):
                    continue
                self.metrics.fusions += 1
                if p.suffix_key != q.prefix_key:
                    continue
                if self.naive:
                    recs = []
                    for w in fuse(p.pattern, q.pattern):
                        occ, sup = match_support(self.t, w, self.f, self.metrics)
                        recs.append(PatternRecord(pattern=w, group=group_of(w),
                                                  occ=occ, support=sup))
                else:
                    recs = scf_fuse(p, q, self.t, self.f, self.metrics)
                self.metrics.candidates += len(recs)
                for rec in recs:
                    self._keep(rec)

    def _enumerate(self):
        by_key = {r.pattern: r for r in self.plist}
        vals = self.t.values
        m = self.m
        for p in self.plist:
            if self._prefix_pruned(p):
                continue
            for v, w in enumerate(enumerate_extensions(p.pattern), start=1):
                if self._prefix_pruned(p):
                    break
                q = by_key.get(suffixop(w))
                if q is not None and self._suffix_pruned(p, q):
                    continue
                self.metrics.candidates += 1
                if self.naive:
                    occ, _ = match_support(self.t, w, self.f, self.metrics)
                else:
                    occ = []
                    for i in list(p.pre):
                        self.metrics.support_calcs += 1
                        j = i + 1
                        if j > len(vals):
                            continue
                        x = vals[j - 1]
                        window = vals[j - m - 1:j - 1]
                        if x in window or sum(1 for y in window if y < x) != v - 1:
                            continue
                        del p.pre[i]
                        occ.append(j)
                        if q is not None:
                            del q.suf[j]
                            q.sufsup -= self.f.at(j)
                self._keep(PatternRecord.from_occurrences(w, occ, self.f))


def mine(t, config: MiningConfig, trace: list | None = None) -> MiningResult:
    """Mine every frequent pattern of ``t`` under ``config``.

    Pass a list as ``trace`` to collect prune/candidate events in order.
    """
    t = as_series(t)
    n = len(t)
    metrics = Metrics()
    start = time.perf_counter()
    k = config.k_for(n)
    result = MiningResult(levels={}, metrics=metrics, config=config, k=k, n=n,
                          series_id=t.id)
    if n < 2:
        return result
    f = forgetting_weights(n, k)
    level = mine_level2(t, f, config.minsup, metrics)
    m = 2
    while level:
        result.levels[m] = level
        if (config.max_length is not None and m >= config.max_length) or m >= n:
            break
        level = _Level(level, t, f, config, metrics, trace).run()
        m += 1
    metrics.wall_time = time.perf_counter() - start
    return result


def _mine_one(args):
    t, config = args
    try:
        return mine(t, config)
    except Exception as e:  # noqa: BLE001
        raise MiningError(f"series {t.id!r}: {e}") from e


def thread_count(threads: int | None = None) -> int:
    if threads is None:
        threads = int(os.environ.get("OPF_THREADS", "1") or 1)
    if threads <= 0:
        threads = os.cpu_count() or 1
    return threads


def mine_dataset(series, config: MiningConfig, threads: int | None = None) -> list[MiningResult]:
    """Mine each series independently; output order follows input order.

    With coefficient-form k every series gets its own k = c / n_i.
    """
    series = [as_series(s) for s in series]
    if not series:
        raise InvalidConfig("dataset must contain at least one series")
    # unnamed series are keyed by their 1-based position
    series = [s if s.id is not None else TimeSeries(s.values, id=str(i))
              for i, s in enumerate(series, start=1)]
    jobs = [(s, config) for s in series]
    workers = min(thread_count(threads), len(jobs))
    if workers <= 1:
        return [_mine_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_mine_one, jobs))
