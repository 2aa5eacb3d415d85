"""Balanced SBM recovery from a dense ±1 answer matrix.

Spectral embedding on the top-k eigenpairs (by magnitude) of the sign
matrix, k-means++ with restarts, then a majority-correction sweep that moves
each vertex to the group it agrees with most.
"""
from __future__ import annotations

import math
import warnings

import numpy as np


class SBMRecoveryError(RuntimeError):
    pass


class SBMPreconditionWarning(UserWarning):
    pass


def kmeans(points: np.ndarray, k: int, rng: np.random.Generator, n_init: int = 10,
           max_iter: int = 100, return_all: bool = False):
    """Lloyd's algorithm with k-means++ seeding; returns labels of the best
    restart by inertia, or every restart's labels with ``return_all``.

    An emptied cluster is repaired by moving the point farthest from its
    centre out of the largest cluster.  Clusters of identical points are
    never split, so fewer than k distinct points leaves some labels unused.
    """
    x = np.asarray(points, dtype=np.float64)
    t = len(x)
    if k >= t:
        return [np.arange(t)] if return_all else np.arange(t)
    best_labels, best_inertia = None, math.inf
    runs = []
    for _ in range(n_init):
        centres = _kmeanspp(x, k, rng)
        labels = np.full(t, -1)
        for _ in range(max_iter):
            d2 = ((x[:, None, :] - centres[None, :, :]) ** 2).sum(axis=2)
            new = d2.argmin(axis=1)
            new = _repair_empty(x, new, k, centres)
            if np.array_equal(new, labels):
                break
            labels = new
            for c in range(k):
                members = labels == c
                if members.any():
                    centres[c] = x[members].mean(axis=0)
        inertia = float(((x - centres[labels]) ** 2).sum())
        runs.append(labels.copy())
        if inertia < best_inertia - 1e-12:
            best_inertia, best_labels = inertia, labels.copy()
    return runs if return_all else best_labels


def _kmeanspp(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    t = len(x)
    centres = np.empty((k, x.shape[1]))
    centres[0] = x[rng.integers(t)]
    d2 = ((x - centres[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total <= 1e-18:
            idx = rng.integers(t)
        else:
            idx = int(np.searchsorted(np.cumsum(d2), rng.random() * total, side="right"))
            idx = min(idx, t - 1)
        centres[c] = x[idx]
        d2 = np.minimum(d2, ((x - centres[c]) ** 2).sum(axis=1))
    return centres


def _repair_empty(x, labels, k, centres):
    counts = np.bincount(labels, minlength=k)
    for c in np.flatnonzero(counts == 0):
        big = int(counts.argmax())
        members = np.flatnonzero(labels == big)
        dist = ((x[members] - x[members].mean(axis=0)) ** 2).sum(axis=1)
        far = int(dist.argmax())
        if dist[far] <= 1e-18:
            continue
        labels[members[far]] = c
        centres[c] = x[members[far]]
        counts = np.bincount(labels, minlength=k)
    return labels


def sbm_size_threshold(k: int, delta: float, b: float, t: int, c0: float) -> float:
    return c0 * k * k * math.log(max(t, 2)) / (b * b * delta * delta)


def bal_sbm(m: np.ndarray, k: int, delta: float, b: float, rng: np.random.Generator | None = None,
            c0: float | None = None, n_init: int = 10, correction_sweeps: int = 10) -> list[np.ndarray]:
    """Partition the rows of the sign matrix ``m`` into ``k`` groups.

    ``delta`` and ``b`` only feed the size check against
    c0 k^2 log t / (b^2 delta^2), which warns but never fails; pass
    ``c0=None`` to skip it.  Groups are returned ordered by their smallest
    member and may be empty only when the input has fewer than k distinct
    rows.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("sign matrix must be square")
    t = m.shape[0]
    if k < 1:
        raise ValueError("k must be at least 1")
    if t < k:
        raise ValueError(f"cannot split {t} rows into {k} groups")
    if k == 1:
        return [np.arange(t)]
    if c0 is not None and t < sbm_size_threshold(k, delta, b, t, c0):
        warnings.warn(f"t={t} is below the recovery threshold for k={k}, delta={delta}, b={b}",
                      SBMPreconditionWarning, stacklevel=2)
    rng = rng if rng is not None else np.random.default_rng(0)
    a = m.astype(np.float64)
    np.fill_diagonal(a, 1.0)
    try:
        w, vecs = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise SBMRecoveryError(f"eigendecomposition of a {t}x{t} matrix did not converge: {exc}") from exc
    top = np.argsort(-np.abs(w), kind="stable")[:k]
    emb = vecs[:, top] * np.abs(w[top])
    # every restart is polished by the sweep; the best agreement score wins
    best, best_score = None, -math.inf
    for labels in kmeans(emb, k, rng, n_init=n_init, return_all=True):
        labels = _correct(m, labels, k, correction_sweeps)
        score = _agreement(m, labels)
        if score > best_score + 1e-9:
            best, best_score = labels, score
    labels = best
    groups = [np.flatnonzero(labels == c) for c in range(k)]
    groups.sort(key=lambda g: (len(g) == 0, g[0] if len(g) else 0))
    return groups


def _agreement(m: np.ndarray, labels: np.ndarray) -> float:
    """Sum of m[i, j] over same-group pairs i < j."""
    same = labels[:, None] == labels[None, :]
    return float(np.triu(np.where(same, m, 0), 1).sum())


def _correct(m: np.ndarray, labels: np.ndarray, k: int, sweeps: int) -> np.ndarray:
    """Move each vertex to the group with the largest signed agreement.

    Each move raises sum of m[i, j] over same-group pairs, so the sweep
    terminates at a local optimum of the agreement objective.  A vertex
    alone in its group stays put, so non-empty groups remain non-empty.
    """
    mf = m.astype(np.float64)
    np.fill_diagonal(mf, 0.0)
    labels = labels.copy()
    for _ in range(sweeps):
        onehot = np.zeros((len(labels), k))
        onehot[np.arange(len(labels)), labels] = 1.0
        score = mf @ onehot
        current = score[np.arange(len(labels)), labels]
        best = score.argmax(axis=1)
        gain = score[np.arange(len(labels)), best] - current
        movers = np.flatnonzero(gain > 1e-9)
        if len(movers) == 0:
            break
        # sequential moves keep the objective monotone; no move empties a group
        counts = np.bincount(labels, minlength=k)
        moved = False
        for i in movers:
            if counts[labels[i]] <= 1:
                continue
            s = np.zeros(k)
            np.add.at(s, labels, mf[i])
            j = int(s.argmax())
            if s[j] > s[labels[i]] + 1e-9:
                counts[labels[i]] -= 1
                counts[j] += 1
                labels[i] = j
                moved = True
        if not moved:
            break
    return labels
