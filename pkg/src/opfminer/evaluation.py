"""Pattern-support features, k-means, silhouette and Calinski-Harabasz."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import InvalidConfig, Pattern, as_series, forgetting_weights
from .miner import MiningConfig, mine_dataset
from .scf import match_support


class UndefinedIndex(ValueError):
    pass


@dataclass
class FeatureMatrix:
    vocabulary: list[Pattern]
    rows: np.ndarray
    series_ids: list[str] = field(default_factory=list)

    @property
    def shape(self):
        return self.rows.shape


@dataclass
class ClusteringResult:
    assignments: np.ndarray  # 1-based cluster labels
    centroids: np.ndarray
    K: int
    seed: int
    inertia_history: list[float] = field(default_factory=list)
    n_repairs: int = 0
    n_iter: int = 0
    sc: float | None = None
    chi: float | None = None


def vocabulary_order(patterns) -> list[Pattern]:
    return sorted(set(patterns), key=lambda p: (len(p), p))


def extract_features(dataset, config: MiningConfig, binary: bool = False,
                     threads: int | None = None) -> FeatureMatrix:
    """One row per series, one column per pattern frequent in any series.

    Entries are forgetting-weighted supports; a pattern not mined in a
    series is counted there by a full scan.
    """
    series = [as_series(s) for s in dataset]
    if not series:
        raise InvalidConfig("dataset must contain at least one series")
    results = mine_dataset(series, config, threads=threads)
    vocab = vocabulary_order(p for r in results for p in r.patterns())
    X = np.zeros((len(series), len(vocab)))
    for row, (t, res) in enumerate(zip(series, results)):
        found = res.supports()
        weights = None
        for col, p in enumerate(vocab):
            if p in found:
                X[row, col] = found[p]
                continue
            if len(p) > len(t):
                continue
            if weights is None:
                weights = forgetting_weights(len(t), config.k_for(len(t)))
            X[row, col] = match_support(t, p, weights)[1]
    if binary:
        X = (X > 0).astype(float)
    return FeatureMatrix(vocabulary=vocab, rows=X,
                         series_ids=[r.series_id for r in results])


def zscore(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    sd = X.std(axis=0)
    sd[sd == 0] = 1.0
    return (X - X.mean(axis=0)) / sd


def _sq_dists(X, C):
    return ((X[:, None, :] - C[None, :, :]) ** 2).sum(axis=2)


def kmeans(X, K: int, seed: int = 0, max_iter: int = 300) -> ClusteringResult:
    """Lloyd's algorithm seeded with K distinct sampled rows.

    An empty cluster is re-seeded at the point farthest from its centroid;
    if every point sits on its centroid the cluster stays empty.
    """
    X = np.asarray(getattr(X, "rows", X), dtype=float)
    N = len(X)
    if not 2 <= K <= N:
        raise InvalidConfig(f"K must satisfy 2 <= K <= {N}, got {K}")
    rng = np.random.default_rng(seed)
    C = X[rng.choice(N, size=K, replace=False)].copy()
    labels = None
    history = []
    repairs = 0
    stuck = set()
    it = 0
    for it in range(1, max_iter + 1):
        d = _sq_dists(X, C)
        new = d.argmin(axis=1)
        for c in range(K):
            if np.any(new == c):
                continue
            dist_own = d[np.arange(N), new]
            far = int(dist_own.argmax())
            if dist_own[far] <= 0:
                # nothing to move; count the failed repair once
                if c not in stuck:
                    stuck.add(c)
                    repairs += 1
                continue
            repairs += 1
            C[c] = X[far]
            new[far] = c
        for c in range(K):
            members = X[new == c]
            if len(members):
                C[c] = members.mean(axis=0)
        history.append(float(((X - C[new]) ** 2).sum()))
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
    return ClusteringResult(assignments=new + 1, centroids=C, K=K, seed=seed,
                            inertia_history=history, n_repairs=repairs, n_iter=it)


def _labels(assignments):
    a = np.asarray(assignments)
    _, inv = np.unique(a, return_inverse=True)
    return inv


def silhouette(X, assignments) -> float:
    """Mean over samples of (b - a) / max(a, b), Euclidean distances.

    A sample alone in its cluster scores 0.
    """
    X = np.asarray(getattr(X, "rows", X), dtype=float)
    lab = _labels(assignments)
    k = lab.max() + 1
    if k < 2:
        raise UndefinedIndex("silhouette needs at least two non-empty clusters")
    D = np.sqrt(np.maximum(_sq_dists(X, X), 0.0))
    sizes = np.bincount(lab, minlength=k)
    s = np.zeros(len(X))
    for i in range(len(X)):
        own = lab[i]
        if sizes[own] == 1:
            continue
        sums = np.bincount(lab, weights=D[i], minlength=k)
        a = sums[own] / (sizes[own] - 1)
        others = [sums[c] / sizes[c] for c in range(k) if c != own]
        b = min(others)
        denom = max(a, b)
        s[i] = 0.0 if denom == 0 else (b - a) / denom
    return float(s.mean())


def calinski_harabasz(X, assignments) -> float:
    """Between/within scatter ratio scaled by (N - K) / (K - 1).

    Returns +inf (with a warning) when the within-cluster scatter is zero.
    """
    X = np.asarray(getattr(X, "rows", X), dtype=float)
    lab = _labels(assignments)
    N = len(X)
    K = lab.max() + 1
    if not 2 <= K < N:
        raise UndefinedIndex(f"CHI needs 2 <= K < N, got K={K}, N={N}")
    mean = X.mean(axis=0)
    between = within = 0.0
    for c in range(K):
        members = X[lab == c]
        centroid = members.mean(axis=0)
        between += len(members) * float(((centroid - mean) ** 2).sum())
        within += float(((members - centroid) ** 2).sum())
    if within == 0:
        warnings.warn("within-cluster scatter is zero; CHI is infinite", stacklevel=2)
        return math.inf
    return between * (N - K) / (within * (K - 1))


def evaluate(X, K: int, seed: int = 0) -> ClusteringResult:
    """k-means followed by both indices; an undefined index is left as None."""
    res = kmeans(X, K, seed)
    try:
        res.sc = silhouette(X, res.assignments)
    except UndefinedIndex:
        pass
    try:
        res.chi = calinski_harabasz(X, res.assignments)
    except UndefinedIndex:
        pass
    return res
