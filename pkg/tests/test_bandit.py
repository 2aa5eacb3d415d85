import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from noisyclust.bandit import (ArmPuller, BanditError, BernoulliPuller, me_pull_budget, me_schedule,
                               median_elimination)


def schedule_samples(k, eps, alpha):
    """Per-round sample counts written out independently of the library."""
    out, e, d = [], eps / 4, alpha / 2
    for _ in range(math.ceil(math.log2(k))):
        out.append(math.ceil(4 / e ** 2 * math.log(3 / d)))
        e, d = 0.75 * e, d / 2
    return out


class StreamPuller(ArmPuller):
    """Replays fixed reward streams, so permuted runs see mirrored rewards."""

    def __init__(self, streams, order=None):
        self.streams = streams
        self.order = list(range(len(streams))) if order is None else list(order)
        self.pos = [0] * len(streams)
        self.pulls = 0

    def pull_many(self, arm, count):
        src = self.order[arm]
        i = self.pos[src]
        self.pos[src] = i + count
        self.pulls += count
        return self.streams[src][i:i + count]

    def pull(self, arm):
        return float(self.pull_many(arm, 1)[0])


class FailingPuller(ArmPuller):
    def __init__(self, after):
        self.after = after

    def pull_many(self, arm, count):
        self.after -= 1
        if self.after < 0:
            raise RuntimeError("sample source exhausted")
        return np.ones(count)


class DeterministicPuller(ArmPuller):
    def __init__(self, means):
        self.means = means
        self.pulls = 0

    def pull(self, arm):
        self.pulls += 1
        return float(self.means[arm])


class TestSchedule:
    def test_single_arm_budget_zero(self):
        assert me_pull_budget(1, 0.5, 0.1) == 0

    @pytest.mark.parametrize("k", [2, 3, 4, 7, 8, 16, 33])
    def test_invariants(self, k):
        s = me_schedule(k, 0.4, 0.2)
        assert sum(s.delta) <= 0.2
        assert sum(s.eps) <= 0.4
        assert s.survivors[0] == k
        for a, b in zip(s.survivors, s.survivors[1:]):
            assert b == (a + 1) // 2
        assert (s.survivors[-1] + 1) // 2 == 1

    @pytest.mark.parametrize("k", [2, 4, 8, 16])
    def test_samples_match_independent_formula(self, k):
        assert list(me_schedule(k, 0.5, 0.1).samples) == schedule_samples(k, 0.5, 0.1)

    @pytest.mark.parametrize("k", [2, 4, 8, 16])
    def test_budget_doubling_overhead(self, k):
        # doubling the arms adds one final two-arm round on top of twice the old budget
        last = schedule_samples(2 * k, 0.5, 0.1)[-1]
        assert me_pull_budget(2 * k, 0.5, 0.1) == 2 * me_pull_budget(k, 0.5, 0.1) + 2 * last

    def test_budget_alpha_log_factor(self):
        k, eps = 8, 0.5
        diffs = [me_pull_budget(k, eps, a / 2) - me_pull_budget(k, eps, a) for a in (0.1, 0.05, 0.025)]
        s = me_schedule(k, eps, 0.1)
        # halving alpha adds ln 2 inside every round's log; ceilings move each count by under 1
        expected = sum(r * 4 / e ** 2 * math.log(2) for r, e in zip(s.survivors, s.eps))
        slack = sum(s.survivors)
        for d in diffs:
            assert abs(d - expected) <= slack
        assert max(diffs) - min(diffs) <= 2 * slack

    @pytest.mark.parametrize("eps,alpha", [(0.2, 0.05), (0.5, 0.1), (0.8, 0.25)])
    def test_budget_linear_bound(self, eps, alpha):
        # r_l <= 2k / 2^(l-1) in every round that runs, so the budget is at most
        # k * sum_l 2^(2-l) m_l; the series converges because (16/9) / 2 < 1
        m = schedule_samples(2 ** 60, eps, alpha)
        C = sum(2.0 ** (2 - l) * ml for l, ml in enumerate(m, start=1))
        for k in (2, 3, 4, 8, 16, 64, 100, 1024, 4096):
            assert me_pull_budget(k, eps, alpha) <= C * k

    @pytest.mark.parametrize("eps,alpha", [(0, 0.1), (1, 0.1), (0.5, 0), (0.5, 1.0)])
    def test_invalid_parameters(self, eps, alpha):
        with pytest.raises(ValueError):
            me_schedule(4, eps, alpha)

    def test_scale(self):
        full = me_schedule(8, 0.5, 0.1)
        small = me_schedule(8, 0.5, 0.1, scale=0.1)
        assert all(a >= b >= 1 for a, b in zip(full.samples, small.samples))


class TestMedianElimination:
    def test_single_arm(self):
        p = DeterministicPuller([0.3])
        assert median_elimination(1, 0.5, 0.1, p) == 0
        assert p.pulls == 0

    def test_deterministic_rewards(self):
        for _ in range(5):
            assert median_elimination(2, 0.5, 0.1, DeterministicPuller([1.0, 0.0])) == 0

    def test_pac_example(self):
        rng = np.random.default_rng(2024)
        wins = sum(median_elimination(4, 0.6, 0.1, BernoulliPuller([0.8, 0.2, 0.2, 0.2], rng)) == 0
                   for _ in range(500))
        assert wins / 500 >= 0.88

    def test_tie_goes_to_lower_index(self):
        assert median_elimination(4, 0.5, 0.1, DeterministicPuller([0.5] * 4)) == 0
        assert median_elimination(3, 0.5, 0.1, DeterministicPuller([0.2, 0.7, 0.7])) == 1

    @settings(max_examples=40, deadline=None)
    @given(k=st.integers(1, 20), eps=st.floats(0.2, 0.95), alpha=st.floats(0.02, 0.9),
           seed=st.integers(0, 2**31))
    def test_pulls_within_budget(self, k, eps, alpha, seed):
        rng = np.random.default_rng(seed)
        p = BernoulliPuller(rng.random(k), rng)
        arm = median_elimination(k, eps, alpha, p, rng)
        assert 0 <= arm < k
        assert p.pulls <= me_pull_budget(k, eps, alpha)

    @settings(max_examples=25, deadline=None)
    @given(k=st.integers(2, 9), seed=st.integers(0, 2**31))
    def test_relabeling_equivariance(self, k, seed):
        rng = np.random.default_rng(seed)
        budget = me_pull_budget(k, 0.5, 0.2)
        streams = [rng.random(budget) * rng.random() for _ in range(k)]
        perm = rng.permutation(k)
        base = median_elimination(k, 0.5, 0.2, StreamPuller(streams))
        # arm i of the permuted instance is arm perm[i] of the original
        moved = median_elimination(k, 0.5, 0.2, StreamPuller(streams, perm))
        assert perm[moved] == base

    def test_puller_failure_carries_context(self):
        with pytest.raises(BanditError) as info:
            median_elimination(8, 0.5, 0.1, FailingPuller(after=1))
        assert info.value.arms_remaining == list(range(8))
