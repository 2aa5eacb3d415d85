"""Reduction from two-armed best-arm identification with failure to
single-vertex cluster identification.

A clustering algorithm runs against :class:`BaifQueryInterface`, which
simulates a two-cluster instance around a special vertex ``s``.  Every
query touching ``s`` is answered by one pull of the arm attached to the
other endpoint's cluster, so the number of pulls equals the number of
distinct queries involving ``s``.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from .bandit import BernoulliPuller
from .clustering import ClusteringResult, ScaledConstants, noisy_clustering
from .oracle import GroundTruth, NoisyOracle, QueryOracle, pair_uniform, pair_uniform_array, seed_key

ClusteringAlg = Callable[[QueryOracle, np.random.Generator], ClusteringResult]


class QueryBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class BaifInstance:
    """Two arms with means 1/2 + delta/2 (index ``best``) and 1/2 - delta/2."""

    delta: float
    alpha: float
    best: int

    def __post_init__(self):
        if not 0 < self.delta <= 1:
            raise ValueError("delta must lie in (0, 1]")
        if self.best not in (0, 1):
            raise ValueError("best must be 0 or 1")

    @classmethod
    def random(cls, delta: float, alpha: float, rng: np.random.Generator) -> "BaifInstance":
        return cls(delta, alpha, int(rng.integers(2)))

    @property
    def means(self) -> tuple[float, float]:
        hi, lo = 0.5 + self.delta / 2, 0.5 - self.delta / 2
        return (hi, lo) if self.best == 0 else (lo, hi)


@dataclass(frozen=True)
class BaifOutcome:
    verdict: int | None  # None means FAIL
    pulls: int
    s: int
    correct: bool
    distinct_pairs: int = 0
    raw_calls: int = 0
    result: ClusteringResult | None = field(default=None, compare=False, repr=False)

    @property
    def failed(self) -> bool:
        return self.verdict is None


class BaifQueryInterface(QueryOracle):
    """Query source that hides the special vertex behind arm pulls.

    Pairs not involving ``s`` are answered from the known labels with the
    same keyed persistence as :class:`NoisyOracle`.  A pair (i, s) pulls arm
    ``labels[i]`` once; the reward r becomes the answer 2r - 1 and is kept
    for repeat queries.
    """

    def __init__(self, labels, s: int, delta: float, key: int, puller: BernoulliPuller,
                 budget: int | None = None):
        labels = np.asarray(labels, dtype=np.int64)
        super().__init__(len(labels))
        if not 0 <= s < self.n:
            raise IndexError(f"special vertex {s} outside 0..{self.n - 1}")
        self.labels, self.s, self.delta = labels, int(s), float(delta)
        self._key, self._p_correct = key, 0.5 + 0.5 * float(delta)
        self.puller, self.budget = puller, budget
        self._s_answers: dict[int, int] = {}
        self._lab = labels.tolist()

    @property
    def pulls(self) -> int:
        return len(self._s_answers)

    def _answer(self, u, v, code):
        if u == self.s or v == self.s:
            other = v if u == self.s else u
            ans = self._s_answers.get(other)
            if ans is None:
                ans = 2 * int(self.puller.pull(self._lab[other])) - 1
                self._s_answers[other] = ans
            return ans
        tau = 1 if self._lab[u] == self._lab[v] else -1
        if self.delta >= 1.0:
            return tau
        return tau if pair_uniform(self._key, code) < self._p_correct else -tau

    def _answer_array(self, u, vs, codes):
        if u == self.s or np.any(vs == self.s):
            return super()._answer_array(u, vs, codes)
        lab = self.labels
        tau = np.where(lab[vs] == lab[u], 1, -1).astype(np.int8)
        if self.delta < 1.0:
            tau[pair_uniform_array(self._key, codes) >= self._p_correct] *= -1
        return tau

    def _check_budget(self):
        if self.budget is not None and self.distinct_pairs > self.budget:
            raise QueryBudgetExceeded(
                f"clustering used {self.distinct_pairs} distinct pairs, budget is {self.budget}")

    def query(self, u, v):
        out = super().query(u, v)
        self._check_budget()
        return out

    def query_many(self, u, vs):
        out = super().query_many(u, vs)
        self._check_budget()
        return out


def align_labels(result: ClusteringResult, known: np.ndarray, s: int) -> np.ndarray:
    """Map each output group to the known label held by most of its members
    (excluding ``s``); -1 for unlabeled vertices."""
    n = len(known)
    out = np.full(n, -1, dtype=np.int64)
    for group in result.clusters:
        g = np.asarray(group, dtype=np.int64)
        others = g[g != s]
        if len(others) == 0:
            continue
        votes = np.bincount(known[others], minlength=2)
        out[g] = int(votes.argmax())
    return out


def baif_reduction(instance: BaifInstance, clustering_alg: ClusteringAlg, n: int, s: int,
                   rng: np.random.Generator, budget: int | None = None) -> BaifOutcome:
    """Decide the best arm by clustering an instance in which ``s`` sits in
    the best arm's cluster.

    ``s`` is 0-based.  The verdict is FAIL when some vertex before ``s`` is
    labeled wrongly (or left unlabeled), or when ``s`` itself is unlabeled.
    """
    if n < 2:
        raise ValueError("need at least two vertices")
    if not 0 <= s < n:
        raise IndexError(f"special vertex {s} outside 0..{n - 1}")
    labels = rng.integers(2, size=n)
    labels[s] = instance.best  # never read for pairs touching s
    key = seed_key(int(rng.integers(2 ** 63)), salt=6)
    puller = BernoulliPuller(instance.means, np.random.default_rng(rng.integers(2 ** 63)))
    iface = BaifQueryInterface(labels, s, instance.delta, key, puller, budget)
    result = clustering_alg(iface, rng)
    guess = align_labels(result, labels, s)
    extra = dict(distinct_pairs=iface.distinct_pairs, raw_calls=iface.raw_calls, result=result)
    if np.any(guess[:s] != labels[:s]) or guess[s] < 0:
        return BaifOutcome(None, puller.pulls, s, False, **extra)
    verdict = int(guess[s])
    return BaifOutcome(verdict, puller.pulls, s, verdict == instance.best, **extra)


def noisy_clustering_alg(n: int, k: int, delta: float,
                         consts: ScaledConstants | None = None) -> ClusteringAlg:
    """Adapter running :func:`noisy_clustering` on all of 0..n-1."""
    consts = consts if consts is not None else ScaledConstants()

    def run(oracle, rng):
        return noisy_clustering(oracle, np.arange(n), k, delta, consts, rng)

    return run


def sample_two_cluster_truth(n: int, k: int, rng: np.random.Generator) -> GroundTruth:
    """Every vertex joins one of k clusters uniformly at random."""
    return GroundTruth(n, k, rng.integers(k, size=n))


def per_vertex_query_counts(clustering_alg: ClusteringAlg, n: int, k: int, delta: float,
                            trials: int, rng: np.random.Generator) -> np.ndarray:
    """Distinct queried pairs touching each vertex, one row per trial, on
    instances where every vertex picks one of k clusters uniformly."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rows = np.zeros((trials, n), dtype=np.int64)
    for i in range(trials):
        truth = sample_two_cluster_truth(n, k, rng)
        oracle = NoisyOracle(truth, delta, int(rng.integers(2 ** 63)))
        clustering_alg(oracle, rng)
        rows[i] = oracle.ledger_stats().per_vertex
    return rows


def per_vertex_query_profile(clustering_alg: ClusteringAlg, n: int, k: int, delta: float,
                             trials: int, rng: np.random.Generator) -> np.ndarray:
    """Mean number of distinct queried pairs touching each vertex."""
    return per_vertex_query_counts(clustering_alg, n, k, delta, trials, rng).mean(axis=0)


def write_baif_csv(path, outcomes: Iterable[BaifOutcome]) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["s", "pulls", "verdict", "correct"])
        for o in outcomes:
            w.writerow([o.s, o.pulls, "FAIL" if o.failed else o.verdict, str(o.correct).lower()])
    return path
