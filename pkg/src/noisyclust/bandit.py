"""Median Elimination for PAC best-arm identification.

The schedule is the classical one: eps_1 = eps/4, delta_1 = alpha/2,
eps_{l+1} = 3 eps_l / 4, delta_{l+1} = delta_l / 2, and every surviving arm
is sampled ceil(scale * 4/eps_l^2 * ln(3/delta_l)) times in round l.
``scale`` defaults to 1; the clustering layer shrinks it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


class ArmPuller:
    """Reward source for arms ``0..k-1``; rewards are in {0, 1}."""

    def pull(self, arm: int) -> float:
        raise NotImplementedError

    def pull_many(self, arm: int, count: int) -> np.ndarray:
        return np.array([self.pull(arm) for _ in range(count)], dtype=np.float64)

    def pull_round(self, arms: Sequence[int], count: int) -> np.ndarray:
        """``count`` pulls of each arm, one row per arm."""
        return np.stack([self.pull_many(a, count) for a in arms])


class BernoulliPuller(ArmPuller):
    """Independent Bernoulli arms, for simulations and tests."""

    def __init__(self, means: Sequence[float], rng: np.random.Generator):
        self.means = np.asarray(means, dtype=np.float64)
        self.rng = rng
        self.pulls = 0

    def pull(self, arm):
        self.pulls += 1
        return float(self.rng.random() < self.means[arm])

    def pull_many(self, arm, count):
        self.pulls += count
        return (self.rng.random(count) < self.means[arm]).astype(np.float64)


class BanditError(RuntimeError):
    """Raised when the puller fails mid-run; carries the surviving arms."""

    def __init__(self, message: str, arms_remaining: list[int]):
        super().__init__(f"{message} (arms remaining: {arms_remaining})")
        self.arms_remaining = arms_remaining


@dataclass(frozen=True)
class MESchedule:
    eps: tuple[float, ...]
    delta: tuple[float, ...]
    samples: tuple[int, ...]
    survivors: tuple[int, ...]

    @property
    def budget(self) -> int:
        return sum(r * m for r, m in zip(self.survivors, self.samples))


def me_schedule(k: int, eps: float, alpha: float, scale: float = 1.0) -> MESchedule:
    if k < 1:
        raise ValueError("need at least one arm")
    if not 0 < eps < 1 or not 0 < alpha < 1:
        raise ValueError(f"eps and alpha must lie in (0, 1), got {eps}, {alpha}")
    if scale <= 0:
        raise ValueError("scale must be positive")
    e, d, r = eps / 4.0, alpha / 2.0, k
    eps_l, delta_l, samples, survivors = [], [], [], []
    while r > 1:
        eps_l.append(e)
        delta_l.append(d)
        samples.append(max(1, math.ceil(scale * 4.0 / (e * e) * math.log(3.0 / d))))
        survivors.append(r)
        r = (r + 1) // 2
        e, d = 0.75 * e, 0.5 * d
    return MESchedule(tuple(eps_l), tuple(delta_l), tuple(samples), tuple(survivors))


def me_pull_budget(k: int, eps: float, alpha: float, scale: float = 1.0) -> int:
    """Deterministic maximum number of pulls made by :func:`median_elimination`."""
    return me_schedule(k, eps, alpha, scale).budget


def median_elimination(k: int, eps: float, alpha: float, puller: ArmPuller,
                       rng: np.random.Generator | None = None, scale: float = 1.0) -> int:
    """Return an arm that is eps-optimal with probability at least 1 - alpha.

    Each round keeps the ceil(r/2) arms with the highest empirical mean,
    ties going to the lower index.  ``rng`` is accepted for interface
    symmetry; the elimination itself is deterministic given the rewards.
    """
    sched = me_schedule(k, eps, alpha, scale)
    arms = list(range(k))
    for m in sched.samples:
        try:
            means = puller.pull_round(arms, m).mean(axis=1).tolist()
        except Exception as exc:
            raise BanditError(f"pull failed: {exc}", list(arms)) from exc
        keep = (len(arms) + 1) // 2
        order = sorted(range(len(arms)), key=lambda i: (-means[i], arms[i]))
        arms = sorted(arms[i] for i in order[:keep])
    return arms[0]
