"""Clustering for arbitrary cluster-size profiles.

Each round samples a core T from the unlabeled pool, finds a size gap by
degree pruning plus balanced recovery, and settles every pool vertex that
identifies and verifies against one of the recovered groups.  Groups from
different rounds are merged by majority tests; a cleanup pass then labels
what is left.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from ..sbm import bal_sbm
from .balanced import _best_verified, bal_noisy_clustering, round_cap
from .constants import ScaledConstants
from .primitives import cluster_verify, test_bias, true_cluster_id
from .result import BIASED, ClusteringResult, Diagnostics, Subcluster, phase

BIAS_ETA = 0.1
ROUND_ALPHA = 1 / 8
FALLBACK_BALANCE = 0.25


def size_gap_index(sizes: Sequence[int], k: int) -> int | None:
    """Largest h < k with s_h >= n/2k - h n/4k^2 and s_{h+1} < n/2k - (h+1) n/4k^2.

    ``sizes`` must be sorted descending.  Returns None when the smallest
    cluster has at least n/4k vertices or no index satisfies both bounds.
    """
    s = [int(x) for x in sizes]
    if len(s) != k:
        raise ValueError(f"expected {k} sizes, got {len(s)}")
    if any(a < b for a, b in zip(s, s[1:])):
        raise ValueError("sizes must be sorted descending")
    n = sum(s)
    if k < 2 or s[-1] >= n / (4 * k):
        return None

    def bound(i: int) -> float:
        return n / (2 * k) - i * n / (4 * k * k)

    for h in range(k - 1, 0, -1):
        if s[h - 1] >= bound(h) and s[h] < bound(h + 1):
            return h
    return None


def gap_threshold(t: int, h: int, k: int, delta: float) -> float:
    """Degree cut below which a core vertex is treated as small-cluster."""
    return (0.5 - delta / 2) * t + delta * (1 / (2 * k) - (h + 0.5) / (4 * k * k)) * t


def gap_sbm(m: np.ndarray, h: int, k: int, delta: float,
            rng: np.random.Generator) -> list[np.ndarray] | None:
    """Prune rows of the core sign matrix with too few +1 answers, then split
    the survivors into h groups.

    Returns row indices of ``m`` per group, or None when fewer than h rows
    survive the cut.
    """
    if not 1 <= h <= k - 1:
        raise ValueError(f"h must lie in [1, {k - 1}], got {h}")
    m = np.asarray(m)
    t = m.shape[0]
    degree = np.count_nonzero(m > 0, axis=1)
    keep = np.flatnonzero(degree >= gap_threshold(t, h, k, delta))
    if len(keep) < h:
        return None
    groups = bal_sbm(m[np.ix_(keep, keep)], h, delta, h / (4 * k), rng)
    return [keep[g] for g in groups]


def gap_subcluster(oracle, T, k: int, delta: float, consts: ScaledConstants,
                   rng: np.random.Generator, pool=None,
                   m: np.ndarray | None = None) -> tuple[int, list[Subcluster]] | None:
    """Try h = k-1, ..., 1 and return the first h whose groups are all large
    enough and all pass the bias test; None when every h is rejected.

    ``pool`` is where the bias test samples its probe vertices (defaults to
    T).  The core sign matrix ``m`` is queried once and reused for every h.
    """
    T = np.asarray(T, dtype=np.int64)
    pool = T if pool is None else np.asarray(pool, dtype=np.int64)
    if m is None:
        m = oracle.query_block(T)
    t = len(T)
    for h in range(k - 1, 0, -1):
        groups = gap_sbm(m, h, k, delta, rng)
        if groups is None or len(groups) < h:
            continue
        if any(len(g) < t / (4 * k) for g in groups):
            continue
        if all(test_bias(oracle, pool, T[g], BIAS_ETA, k, delta, consts, rng) for g in groups):
            return h, [Subcluster(np.sort(T[g]), BIASED, f"gap h={h}") for g in groups]
    return None


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        a, b = self.find(i), self.find(j)
        if a != b:
            self.parent[max(a, b)] = min(a, b)


def merge_subclusters(oracle, groups: Sequence, delta: float, consts: ScaledConstants,
                      rng: np.random.Generator, diag: Diagnostics | None = None) -> list[np.ndarray]:
    """Merge groups that belong together.

    For every ordered pair (i, j) the lowest-index member of group i is
    tested against m members of group j; two groups join when either
    direction passes.  The result is the transitive closure, ordered by
    smallest member.
    """
    sets = [np.sort(g.members if isinstance(g, Subcluster) else np.asarray(g, dtype=np.int64))
            for g in groups]
    sets = [s for s in sets if len(s)]
    diag = diag if diag is not None else Diagnostics()
    want = consts.merge_sample(oracle.n, delta)
    uf = _UnionFind(len(sets))
    for i, a in enumerate(sets):
        u = int(a[0])
        for j, b in enumerate(sets):
            if i == j or uf.find(i) == uf.find(j):
                continue
            if len(b) >= want:
                sample = rng.choice(b, size=want, replace=False)
            else:
                diag.clamps.append(f"merge sample: {want} -> {len(b)} with replacement")
                sample = rng.choice(b, size=want, replace=True)
            if cluster_verify(oracle, u, sample):
                uf.union(i, j)
    merged: dict[int, list[np.ndarray]] = {}
    for i, s in enumerate(sets):
        merged.setdefault(uf.find(i), []).append(s)
    out = [np.sort(np.concatenate(parts)) for parts in merged.values()]
    out.sort(key=lambda g: int(g[0]))
    return out


def _sample(group: np.ndarray, want: int, name: str, diag: Diagnostics,
            rng: np.random.Generator) -> np.ndarray:
    size = diag.clamp(name, want, len(group))
    return np.sort(rng.choice(group, size=size, replace=False))


def noisy_clustering(oracle, V, k: int, delta: float, consts: ScaledConstants,
                     rng: np.random.Generator, diag: Diagnostics | None = None) -> ClusteringResult:
    """Recover every large cluster of an arbitrary-size instance.

    Vertices that verify against no recovered cluster are reported as
    unlabeled rather than forced into one.
    """
    V = np.sort(np.asarray(V, dtype=np.int64))
    diag = diag if diag is not None else Diagnostics()
    n = oracle.n
    if len(V) == 0:
        return ClusteringResult([], np.zeros(0, dtype=np.int64), diag)
    if k == 1:
        return ClusteringResult([V.copy()], np.zeros(0, dtype=np.int64), diag)

    U = V
    R: list[np.ndarray] = []
    C: list[np.ndarray] = []
    t = consts.gap_sample_size(n, k, delta)
    cap = round_cap(n)
    while len(U) >= t and diag.rounds < cap:
        diag.rounds += 1
        diag.survivors.append(len(U))
        with phase(oracle, diag, "gap"):
            T = np.sort(rng.choice(U, size=t, replace=False))
            found = gap_subcluster(oracle, T, k, delta, consts, rng, pool=U)
        if found is None:
            diag.fail_branch_hits += 1
            bal = bal_noisy_clustering(oracle, U, k, delta, FALLBACK_BALANCE, consts, rng, diag)
            U = bal.unlabeled
            with phase(oracle, diag, "merge"):
                C = merge_subclusters(oracle, C + bal.clusters, delta, consts, rng, diag)
            break
        h, X = found
        diag.gap_h.append(h)
        want = consts.round_verify_size(n, delta)
        Xp = [_sample(x.members, want, f"round X'_{i}", diag, rng) for i, x in enumerate(X)]
        U = np.setdiff1d(U, T, assume_unique=True)
        R.append(T)
        Y: list[list[int]] = [[] for _ in X]
        with phase(oracle, diag, "identification"):
            for v in U.tolist():
                j = true_cluster_id(oracle, v, X, delta / 5, ROUND_ALPHA, rng, consts.me_scale, diag)
                if cluster_verify(oracle, v, Xp[j]):
                    Y[j].append(v)
        settled = np.array(sorted(v for y in Y for v in y), dtype=np.int64)
        U = np.setdiff1d(U, settled, assume_unique=True)
        with phase(oracle, diag, "merge"):
            C = merge_subclusters(oracle, C + [np.array(y, dtype=np.int64) for y in Y if y],
                                  delta, consts, rng, diag)
    if len(U) and diag.rounds >= cap:
        diag.round_cap_hit = True

    rest = np.sort(np.concatenate([U] + R)) if R else np.sort(U)
    if not C:
        bal = bal_noisy_clustering(oracle, rest, k, delta, FALLBACK_BALANCE, consts, rng, diag)
        with phase(oracle, diag, "merge"):
            C = merge_subclusters(oracle, bal.clusters, delta, consts, rng, diag)
        rest = bal.unlabeled
    C, unlabeled = _cleanup(oracle, C, rest, delta, consts, rng, diag)
    C, unlabeled = _residual_passes(oracle, C, unlabeled, k, delta, consts, rng, diag)
    return ClusteringResult(C, unlabeled, diag)


def _cleanup(oracle, C, rest, delta, consts, rng, diag):
    """Verify every leftover vertex against a sample of each cluster and add
    it to the best-scoring one that passes."""
    want = consts.cleanup_size(oracle.n, delta)
    Cp = [_sample(c, want, f"cleanup C'_{i}", diag, rng) for i, c in enumerate(C)]
    grown = [list(c.tolist()) for c in C]
    unlabeled = []
    with phase(oracle, diag, "identification"):
        for v in np.asarray(rest, dtype=np.int64).tolist():
            j = _best_verified(oracle, v, Cp, range(len(C))) if C else None
            if j is None:
                unlabeled.append(v)
            else:
                grown[j].append(v)
    return ([np.sort(np.array(g, dtype=np.int64)) for g in grown],
            np.array(sorted(unlabeled), dtype=np.int64))


def _residual_passes(oracle, C, unlabeled, k, delta, consts, rng, diag):
    """Recover clusters missed by every round from the unlabeled vertices,
    for as long as each pass labels something."""
    while len(unlabeled) and len(C) < k:
        diag.residual_passes += 1
        bal = bal_noisy_clustering(oracle, unlabeled, k - len(C), delta, FALLBACK_BALANCE,
                                   consts, rng, diag)
        if len(bal.unlabeled) == len(unlabeled):
            break
        with phase(oracle, diag, "merge"):
            C = merge_subclusters(oracle, C + bal.clusters, delta, consts, rng, diag)
        unlabeled = bal.unlabeled
    return C, np.asarray(unlabeled, dtype=np.int64)
