"""Single-vertex tests against vertex sets."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from ..bandit import ArmPuller, median_elimination
from .constants import ScaledConstants
from .result import Diagnostics, Subcluster


def positive_degree(oracle, v: int, B) -> int:
    """Number of u in B answered +1 with v; issues exactly |B| queries."""
    B = np.asarray(B, dtype=np.int64)
    if len(B) == 0:
        raise ValueError("B must be non-empty")
    if np.any(B == v):
        raise ValueError(f"vertex {v} is a member of B")
    return int(np.count_nonzero(oracle.query_many(v, B) > 0))


def cluster_verify(oracle, v: int, B) -> bool:
    """TRUE iff at least half of B answers +1 with v (ties pass)."""
    return 2 * positive_degree(oracle, v, B) >= len(B)


class SubclusterPuller(ArmPuller):
    """Arm i answers with a fresh random member of candidate i.

    Members are drawn without replacement until the candidate is exhausted,
    then with replacement (counted in ``with_replacement``).
    """

    def __init__(self, oracle, u: int, candidates: Sequence[np.ndarray], rng: np.random.Generator):
        self.oracle, self.u, self.rng = oracle, u, rng
        self.candidates = [np.asarray(c, dtype=np.int64) for c in candidates]
        self._used: list[set[int]] = [set() for _ in self.candidates]
        self.with_replacement = 0
        self.pulls = 0

    def _draw(self, arm: int, count: int) -> np.ndarray:
        members, used = self.candidates[arm], self._used[arm]
        size = len(members)
        take = min(count, size - len(used))
        picked: list[int] = []
        if take > 0 and size - len(used) <= 4 * take:
            rest = np.setdiff1d(np.arange(size), np.fromiter(used, dtype=np.int64, count=len(used)))
            picked = self.rng.choice(rest, size=take, replace=False).tolist()
        else:
            while len(picked) < take:
                for i in self.rng.integers(size, size=2 * (take - len(picked))).tolist():
                    if i not in used:
                        used.add(i)
                        picked.append(i)
                        if len(picked) == take:
                            break
        used.update(picked)
        short = count - take
        if short > 0:
            self.with_replacement += short
            picked.extend(self.rng.integers(size, size=short).tolist())
        return members[np.asarray(picked, dtype=np.int64)]

    def pull_many(self, arm, count):
        self.pulls += count
        answers = self.oracle.query_many(self.u, self._draw(arm, count))
        return (answers.astype(np.float64) + 1.0) / 2.0

    def pull(self, arm):
        return float(self.pull_many(arm, 1)[0])

    def pull_round(self, arms, count):
        self.pulls += count * len(arms)
        draws = np.concatenate([self._draw(a, count) for a in arms])
        answers = self.oracle.query_many(self.u, draws)
        return ((answers.astype(np.float64) + 1.0) / 2.0).reshape(len(arms), count)


def true_cluster_id(oracle, u: int, candidates: Sequence[Subcluster | np.ndarray], eff_delta: float,
                    alpha: float, rng: np.random.Generator, me_scale: float = 1.0,
                    diag: Diagnostics | None = None) -> int:
    """Index of the candidate that ``u`` most likely belongs to, via Median
    Elimination with one arm per candidate and gap ``eff_delta``."""
    if len(candidates) == 0:
        raise ValueError("no candidate sets")
    sets = [c.members if isinstance(c, Subcluster) else np.asarray(c, dtype=np.int64)
            for c in candidates]
    if any(len(s) == 0 for s in sets):
        raise ValueError("candidate sets must be non-empty")
    if len(sets) == 1:
        return 0
    puller = SubclusterPuller(oracle, u, sets, rng)
    # ME needs eps < 1; the noiseless oracle has gap exactly 1
    eps = min(float(eff_delta), 0.999)
    arm = median_elimination(len(sets), eps, alpha, puller, rng, scale=me_scale)
    if diag is not None:
        diag.with_replacement_pulls += puller.with_replacement
    return arm


def test_bias(oracle, V, B, eta: float, k: int, delta: float, consts: ScaledConstants,
              rng: np.random.Generator, b: float | None = None) -> bool:
    """Is B (eta, C)-biased for some large cluster C?

    Samples vertices of V outside B and answers Yes as soon as one has
    d(v, B) >= (1/2 + eta*delta/2)|B|.  Sets smaller than the scaled size
    premise cannot be certified and get No.
    """
    B = np.asarray(B, dtype=np.int64)
    if len(B) == 0:
        return False
    n = oracle.n
    if len(B) < consts.testbias_min_size(n, eta, delta):
        return False
    pool = np.setdiff1d(np.asarray(V, dtype=np.int64), B, assume_unique=False)
    if len(pool) == 0:
        return False
    if b is not None:
        consts = consts.replace(testbias_b=b)
    threshold = (0.5 + 0.5 * eta * delta) * len(B)
    for _ in range(consts.testbias_rounds(n, k)):
        v = int(pool[rng.integers(len(pool))])
        if positive_degree(oracle, v, B) >= threshold:
            return True
    return False


test_bias.__test__ = False  # keep pytest from collecting it by name
