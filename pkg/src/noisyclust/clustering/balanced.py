"""Clustering for nearly balanced instances."""
from __future__ import annotations

import math

import numpy as np

from ..sbm import bal_sbm
from .constants import ScaledConstants
from .primitives import cluster_verify, positive_degree, true_cluster_id
from .result import STRICT, ClusteringResult, Diagnostics, Subcluster, phase


class GrowingSet:
    """Append-only int array with amortised O(1) growth."""

    def __init__(self, initial):
        initial = np.asarray(initial, dtype=np.int64)
        self._buf = np.empty(max(16, 2 * len(initial)), dtype=np.int64)
        self._buf[:len(initial)] = initial
        self._len = len(initial)

    def append(self, v: int) -> None:
        if self._len == len(self._buf):
            self._buf = np.concatenate([self._buf, np.empty(len(self._buf), dtype=np.int64)])
        self._buf[self._len] = v
        self._len += 1

    def view(self) -> np.ndarray:
        return self._buf[:self._len]

    def __len__(self) -> int:
        return self._len


def round_cap(n: int) -> int:
    return max(1, math.ceil(4 * math.log2(max(n, 2))))


def sub_cluster(oracle, V, k: int, delta: float, b: float, consts: ScaledConstants,
                rng: np.random.Generator, diag: Diagnostics | None = None) -> list[Subcluster]:
    """Sample T from V, query all pairs inside it, and split it with
    :func:`bal_sbm`.  The returned groups partition T; empty groups are
    dropped."""
    V = np.asarray(V, dtype=np.int64)
    if len(V) < k:
        raise ValueError(f"cannot find {k} sub-clusters in {len(V)} vertices")
    diag = diag if diag is not None else Diagnostics()
    # a core smaller than k cannot hold k groups, however small the formula gets
    want = max(consts.subcluster_size(oracle.n, k, delta, b), k)
    size = diag.clamp("subcluster |T|", want, len(V))
    T = np.sort(rng.choice(V, size=size, replace=False))
    m = oracle.query_block(T)
    groups = bal_sbm(m, k, delta, b / 2, rng)
    return [Subcluster(T[g], STRICT, "subcluster") for g in groups if len(g)]


def _best_verified(oracle, v: int, verify_sets, candidates) -> int | None:
    """Candidate whose verification set v passes with the highest positive
    fraction, or None."""
    best, best_frac = None, -1.0
    for j in candidates:
        B = verify_sets[j]
        if len(B) == 0:
            continue
        d = positive_degree(oracle, v, B)
        if 2 * d >= len(B) and d / len(B) > best_frac:
            best, best_frac = j, d / len(B)
    return best


def bal_noisy_clustering(oracle, V, k: int, delta: float, b: float, consts: ScaledConstants,
                         rng: np.random.Generator, diag: Diagnostics | None = None) -> ClusteringResult:
    """Recover a b-balanced instance: sub-clusters from a sampled core, then
    halving rounds of bandit identification plus verification, then a
    cleanup pass over the leftovers."""
    V = np.sort(np.asarray(V, dtype=np.int64))
    diag = diag if diag is not None else Diagnostics()
    n = oracle.n
    if len(V) == 0:
        return ClusteringResult([], np.zeros(0, dtype=np.int64), diag)
    k_eff = min(k, len(V))
    with phase(oracle, diag, "subcluster"):
        subs = sub_cluster(oracle, V, k_eff, delta, b, consts, rng, diag)
    X = [GrowingSet(s.members) for s in subs]
    h = len(X)
    want = consts.balanced_verify_size(n, delta)
    Xp = []
    for i, s in enumerate(subs):
        size = diag.clamp(f"balanced X'_{i}", want, len(s))
        Xp.append(np.sort(rng.choice(s.members, size=size, replace=False)))

    in_core = np.zeros(n, dtype=bool)
    for s in subs:
        in_core[s.members] = True
    U = [int(v) for v in V if not in_core[v]]
    D = {v: list(range(h)) for v in U}
    threshold = consts.subcluster_size(n, k, delta, b)
    residual: list[int] = []
    cap = round_cap(n)
    rounds = 0
    with phase(oracle, diag, "identification"):
        while U and len(U) >= threshold and rounds < cap:
            rounds += 1
            diag.balanced_survivors.append(len(U))
            survivors = []
            for v in U:
                cands = D[v]
                idx = true_cluster_id(oracle, v, [X[c].view() for c in cands], delta, 0.25, rng,
                                      consts.me_scale, diag) if len(cands) > 1 else 0
                j = cands[idx]
                if cluster_verify(oracle, v, Xp[j]):
                    X[j].append(v)
                else:
                    cands.remove(j)
                    (survivors if cands else residual).append(v)
            U = survivors
        if rounds:
            # the count left after the last round closes the survivor series
            diag.balanced_survivors.append(len(U))
        if U and rounds >= cap:
            diag.round_cap_hit = True
        unlabeled = []
        for v in U + residual:
            j = _best_verified(oracle, v, Xp, D[v] if D[v] else range(h))
            if j is None:
                unlabeled.append(v)
            else:
                X[j].append(v)
    clusters = [np.sort(x.view().copy()) for x in X if len(x)]
    return ClusteringResult(clusters, np.array(sorted(unlabeled), dtype=np.int64), diag)
