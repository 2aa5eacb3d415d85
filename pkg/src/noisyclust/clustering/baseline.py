"""Majority-vote identification against every sub-cluster (comparator)."""
from __future__ import annotations

import numpy as np

from .balanced import sub_cluster
from .constants import ScaledConstants
from .result import ClusteringResult, Diagnostics, phase

BASELINE_BALANCE = 0.25


def majority_baseline(oracle, V, k: int, delta: float, consts: ScaledConstants,
                      rng: np.random.Generator, diag: Diagnostics | None = None,
                      b: float = BASELINE_BALANCE) -> ClusteringResult:
    """Sub-clusters from a sampled core, then each remaining vertex is
    queried against m fresh members of every sub-cluster and joins the one
    with the highest positive fraction if that fraction is a majority.

    Phase two costs exactly |V \\ T| * k * m queries when every sub-cluster
    holds at least m members.
    """
    V = np.sort(np.asarray(V, dtype=np.int64))
    diag = diag if diag is not None else Diagnostics()
    if len(V) == 0:
        return ClusteringResult([], np.zeros(0, dtype=np.int64), diag)
    with phase(oracle, diag, "subcluster"):
        subs = sub_cluster(oracle, V, min(k, len(V)), delta, b, consts, rng, diag)
    want = consts.baseline_sample(oracle.n, delta)
    in_core = np.zeros(oracle.n, dtype=bool)
    for s in subs:
        in_core[s.members] = True
    grown = [list(s.members.tolist()) for s in subs]
    unlabeled = []
    with phase(oracle, diag, "identification"):
        for v in V[~in_core[V]].tolist():
            best, best_frac = None, -1.0
            for i, s in enumerate(subs):
                size = diag.clamp(f"baseline sample {i}", want, len(s))
                sample = rng.choice(s.members, size=size, replace=False)
                frac = np.count_nonzero(oracle.query_many(v, sample) > 0) / size
                if frac >= 0.5 and frac > best_frac:
                    best, best_frac = i, frac
            if best is None:
                unlabeled.append(v)
            else:
                grown[best].append(v)
    clusters = [np.sort(np.array(g, dtype=np.int64)) for g in grown]
    return ClusteringResult(clusters, np.array(sorted(unlabeled), dtype=np.int64), diag)
