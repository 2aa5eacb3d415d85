
import numpy as np
import pytest

from noisyclust import NoisyOracle, ScaledConstants, generate_ground_truth


def planted_sign_matrix(labels, delta, rng):
    """Sign matrix of a planted partition with independent flips."""
    labels = np.asarray(labels)
    t = len(labels)
    same = np.where(labels[:, None] == labels[None, :], 1, -1)
    flips = np.where(rng.random((t, t)) < 0.5 + delta / 2, 1, -1)
    upper = np.triu(same * flips, 1)
    m = upper + upper.T
    return m.astype(np.int8)


def brute_force_bipartition(m):
    """Every split of the rows into two non-empty groups, scored by summed
    in-group agreement.  Returns (optimal partitions, best score)."""
    m = np.asarray(m, dtype=np.int64)
    t = m.shape[0]
    masks = np.arange(1, 1 << (t - 1))  # vertex t-1 always on side 0
    side = (masks[:, None] >> np.arange(t)[None, :]) & 1
    x = 2 * side - 1
    # sum over i<j of m_ij [same side] = (sum_ij m_ij x_i x_j + sum_ij m_ij) / 4 off the diagonal
    mo = m - np.diag(np.diag(m))
    scores = (np.einsum("ai,ij,aj->a", x, mo, x) + mo.sum()) // 4
    best_score = scores.max()
    best = []
    for a in np.flatnonzero(scores == best_score):
        s = side[a]
        best.append(frozenset(frozenset(np.flatnonzero(s == v).tolist()) for v in (0, 1) if np.any(s == v)))
    return best, int(best_score)


def noiseless_partition(oracle, n):
    """Connected components of the +1 graph queried over all pairs."""
    labels = -np.ones(n, dtype=int)
    nxt = 0
    for v in range(n):
        if labels[v] < 0:
            labels[v] = nxt
            for u in range(v + 1, n):
                if labels[u] < 0 and oracle.query(v, u) > 0:
                    labels[u] = nxt
            nxt += 1
    return frozenset(frozenset(np.flatnonzero(labels == c).tolist()) for c in range(nxt))


@pytest.fixture
def consts():
    return ScaledConstants()


def make_instance(n, k, profile, seed, delta):
    truth = generate_ground_truth(n, k, profile, seed)
    return truth, NoisyOracle(truth, delta, seed + 1000)


def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance verdict lines after the run."""
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
