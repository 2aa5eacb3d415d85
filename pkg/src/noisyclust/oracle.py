"""Ground-truth instances and the faulty same-cluster oracle.

Answers are a keyed pseudorandom function of the unordered pair, so repeat
queries agree without storing anything.  The ledger counts distinct pairs
(the query complexity) and raw calls separately.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_TWO53 = float(1 << 53)

# batches shorter than this go through the pure-Python path
_SCALAR_CUTOFF = 24


def mix64(z: int) -> int:
    """splitmix64 finalizer on a Python int."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def mix64_array(z: np.ndarray) -> np.ndarray:
    """Vectorised :func:`mix64`; uint64 arithmetic wraps modulo 2**64."""
    z = z.astype(np.uint64, copy=True)
    z ^= z >> np.uint64(30)
    z *= np.uint64(_M1)
    z ^= z >> np.uint64(27)
    z *= np.uint64(_M2)
    z ^= z >> np.uint64(31)
    return z


def seed_key(seed: int, salt: int = 0) -> int:
    return mix64(((seed & MASK64) + (salt + 1) * _GOLDEN) & MASK64)


def pair_code(u: int, v: int) -> int:
    a, b = (u, v) if u < v else (v, u)
    return (a << 32) | b


def pair_uniform(key: int, code: int) -> float:
    """Uniform in [0, 1) attached to a pair code under ``key``."""
    return (mix64(key ^ mix64(code)) >> 11) / _TWO53


def pair_uniform_array(key: int, codes: np.ndarray) -> np.ndarray:
    z = mix64_array(codes) ^ np.uint64(key)
    return (mix64_array(z) >> np.uint64(11)).astype(np.float64) / _TWO53


# --------------------------------------------------------------------------
# ground truth


@dataclass(frozen=True)
class Profile:
    """Cluster-size profile for :func:`generate_ground_truth`.

    ``kind`` is one of ``balanced``, ``gap``, ``dirichlet``, ``explicit``;
    ``param`` is b, h, alpha or the explicit size list respectively.
    """

    kind: str
    param: float | int | tuple[int, ...] = 1.0

    @classmethod
    def balanced(cls, b: float = 1.0) -> "Profile":
        return cls("balanced", float(b))

    @classmethod
    def gap(cls, h: int) -> "Profile":
        return cls("gap", int(h))

    @classmethod
    def dirichlet(cls, alpha: float) -> "Profile":
        return cls("dirichlet", float(alpha))

    @classmethod
    def explicit(cls, sizes: Iterable[int]) -> "Profile":
        return cls("explicit", tuple(int(s) for s in sizes))

    @classmethod
    def parse(cls, text: str) -> "Profile":
        """Parse ``balanced(1.0)``, ``gap(2)``, ``dirichlet(0.5)`` or
        ``explicit(40,30,20,10)``."""
        text = text.strip()
        if "(" not in text or not text.endswith(")"):
            raise ValueError(f"malformed profile {text!r}")
        kind, arg = text[:-1].split("(", 1)
        kind = kind.strip()
        if kind == "balanced":
            return cls.balanced(float(arg) if arg.strip() else 1.0)
        if kind == "gap":
            return cls.gap(int(arg))
        if kind == "dirichlet":
            return cls.dirichlet(float(arg))
        if kind == "explicit":
            return cls.explicit(int(x) for x in arg.split(",") if x.strip())
        raise ValueError(f"unknown profile kind {kind!r}")

    @property
    def tag(self) -> str:
        if self.kind == "explicit":
            return "explicit(" + ",".join(str(s) for s in self.param) + ")"
        return f"{self.kind}({self.param})"


@dataclass(frozen=True)
class GroundTruth:
    n: int
    k: int
    assignment: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.asarray(self.assignment, dtype=np.int64)
        if a.shape != (self.n,):
            raise ValueError("assignment must cover exactly vertices 0..n-1")
        if self.n and (a.min() < 0 or a.max() >= self.k):
            raise ValueError("cluster index out of range")
        a.setflags(write=False)
        object.__setattr__(self, "assignment", a)

    @property
    def cluster_sizes(self) -> np.ndarray:
        """Sizes indexed by cluster label."""
        return np.bincount(self.assignment, minlength=self.k)

    @property
    def sizes(self) -> list[int]:
        """Sorted (descending) view of the cluster sizes."""
        return sorted(self.cluster_sizes.tolist(), reverse=True)

    def clusters(self) -> list[np.ndarray]:
        return [np.flatnonzero(self.assignment == c) for c in range(self.k)]

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "k": self.k, "assignment": self.assignment.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "GroundTruth":
        doc = json.loads(text)
        return cls(int(doc["n"]), int(doc["k"]), np.asarray(doc["assignment"], dtype=np.int64))


def gap_profile_sizes(n: int, k: int, h: int) -> list[int]:
    """Sizes whose size-gap index is exactly ``h`` and whose smallest
    cluster is below n/4k.

    Clusters after ``h`` share half of the (h+1) threshold; the first ``h``
    split the rest evenly.
    """
    if not 1 <= h <= k - 1:
        raise ValueError(f"gap profile needs 1 <= h <= k-1, got h={h}, k={k}")
    upper = n / (2 * k) - (h + 1) * n / (4 * k * k)
    small = min(int(math.floor(upper / 2)), int(math.ceil(n / (4 * k))) - 1)
    small = max(small, 0)
    rest = n - small * (k - h)
    big = [rest // h + (1 if i < rest % h else 0) for i in range(h)]
    sizes = big + [small] * (k - h)
    if size_gap_thresholds_ok(sizes, n, k, h):
        return sizes
    raise ValueError(f"no gap({h}) profile exists for n={n}, k={k}")


def size_gap_thresholds_ok(sizes: Sequence[int], n: int, k: int, h: int) -> bool:
    s = sorted(sizes, reverse=True)
    return (s[h - 1] >= n / (2 * k) - h * n / (4 * k * k)
            and s[h] < n / (2 * k) - (h + 1) * n / (4 * k * k)
            and s[-1] < n / (4 * k))


def _profile_sizes(n: int, k: int, profile: Profile, rng: np.random.Generator) -> list[int]:
    if profile.kind == "balanced":
        b = float(profile.param)
        if not 0 < b <= 1:
            raise ValueError(f"balance b must lie in (0, 1], got {b}")
        floor_size = int(math.floor(b * n / k))
        if b == 1.0:
            return [n // k + (1 if i < n % k else 0) for i in range(k)]
        extra = rng.multinomial(n - k * floor_size, [1.0 / k] * k)
        return [floor_size + int(e) for e in extra]
    if profile.kind == "gap":
        return gap_profile_sizes(n, k, int(profile.param))
    if profile.kind == "dirichlet":
        alpha = float(profile.param)
        if alpha <= 0:
            raise ValueError(f"dirichlet alpha must be positive, got {alpha}")
        return [int(x) for x in rng.multinomial(n, rng.dirichlet([alpha] * k))]
    if profile.kind == "explicit":
        sizes = [int(s) for s in profile.param]
        if len(sizes) != k:
            raise ValueError(f"explicit profile lists {len(sizes)} sizes for k={k}")
        if any(s < 0 for s in sizes) or sum(sizes) != n:
            raise ValueError(f"explicit sizes must be non-negative and sum to n={n}")
        return sizes
    raise ValueError(f"unknown profile kind {profile.kind!r}")


def generate_ground_truth(n: int, k: int, profile: Profile | str, seed: int) -> GroundTruth:
    """Draw a seeded hidden partition of ``n`` vertices into ``k`` clusters.

    Cluster labels follow the profile's size order; the vertex-to-cluster
    map is a uniform shuffle.
    """
    if isinstance(profile, str):
        profile = Profile.parse(profile)
    if k < 1 or n < k:
        raise ValueError(f"need n >= k >= 1, got n={n}, k={k}")
    rng = np.random.default_rng(seed & MASK64)
    sizes = _profile_sizes(n, k, profile, rng)
    labels = np.repeat(np.arange(k, dtype=np.int64), sizes)
    return GroundTruth(n, k, rng.permutation(labels))


def true_tau(truth: GroundTruth, u: int, v: int) -> int:
    """Noiseless same-cluster indicator; never touches any ledger."""
    if u == v:
        raise ValueError("self-pairs are undefined")
    return 1 if truth.assignment[u] == truth.assignment[v] else -1


# --------------------------------------------------------------------------
# query accounting


@dataclass(frozen=True)
class QueryLedger:
    distinct_pairs: int
    raw_calls: int
    per_vertex: np.ndarray = field(repr=False)


class QueryOracle:
    """Base for pairwise ±1 answer sources with exact query accounting.

    Subclasses implement :meth:`_answer` and :meth:`_answer_array`; both
    receive the normalised pair(s) and must agree with each other.
    """

    def __init__(self, n: int):
        self.n = int(n)
        self._seen: set[int] = set()
        self._raw = 0
        self._per_vertex = [0] * self.n

    # --- accounting -------------------------------------------------------
    def ledger_stats(self) -> QueryLedger:
        return QueryLedger(len(self._seen), self._raw, np.array(self._per_vertex, dtype=np.int64))

    @property
    def distinct_pairs(self) -> int:
        return len(self._seen)

    @property
    def raw_calls(self) -> int:
        return self._raw

    def _record(self, u: int, codes: Iterable[int]) -> None:
        seen = self._seen
        pv = self._per_vertex
        for c in codes:
            if c not in seen:
                seen.add(c)
                pv[c >> 32] += 1
                pv[c & 0xFFFFFFFF] += 1

    def _check(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError(f"self-query ({u}, {u}) is undefined")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise IndexError(f"pair ({u}, {v}) outside 0..{self.n - 1}")

    # --- queries ----------------------------------------------------------
    def query(self, u: int, v: int) -> int:
        u, v = int(u), int(v)
        self._check(u, v)
        self._raw += 1
        code = pair_code(u, v)
        self._record(u, (code,))
        return self._answer(u, v, code)

    def query_many(self, u: int, vs) -> np.ndarray:
        """Answers for (u, v) over every v in ``vs``, as an int8 array."""
        u = int(u)
        if isinstance(vs, np.ndarray):
            vs_list = vs.tolist()
        else:
            vs_list = [int(v) for v in vs]
        m = len(vs_list)
        if m == 0:
            return np.zeros(0, dtype=np.int8)
        if not 0 <= u < self.n:
            raise IndexError(f"vertex {u} outside 0..{self.n - 1}")
        codes = []
        for v in vs_list:
            if v == u:
                raise ValueError(f"self-query ({u}, {u}) is undefined")
            if not 0 <= v < self.n:
                raise IndexError(f"vertex {v} outside 0..{self.n - 1}")
            codes.append((u << 32) | v if u < v else (v << 32) | u)
        self._raw += m
        self._record(u, codes)
        if m < _SCALAR_CUTOFF:
            return np.fromiter((self._answer(u, v, c) for v, c in zip(vs_list, codes)),
                               dtype=np.int8, count=m)
        return self._answer_array(u, np.asarray(vs_list, dtype=np.int64),
                                  np.asarray(codes, dtype=np.uint64))

    def query_block(self, vertices) -> np.ndarray:
        """Full symmetric sign matrix over ``vertices`` (zero diagonal)."""
        vertices = np.asarray(vertices, dtype=np.int64)
        t = len(vertices)
        m = np.zeros((t, t), dtype=np.int8)
        for i in range(t - 1):
            row = self.query_many(int(vertices[i]), vertices[i + 1:])
            m[i, i + 1:] = row
            m[i + 1:, i] = row
        return m

    def _answer(self, u: int, v: int, code: int) -> int:  # pragma: no cover
        raise NotImplementedError

    def _answer_array(self, u: int, vs: np.ndarray, codes: np.ndarray) -> np.ndarray:
        return np.fromiter((self._answer(u, int(v), int(c)) for v, c in zip(vs, codes)),
                           dtype=np.int8, count=len(vs))


class NoisyOracle(QueryOracle):
    """Persistent faulty oracle: correct with probability 1/2 + delta/2."""

    def __init__(self, truth: GroundTruth, delta: float, seed: int):
        if not 0 < delta <= 1:
            raise ValueError(f"delta must lie in (0, 1], got {delta}")
        super().__init__(truth.n)
        self.truth = truth
        self.delta = float(delta)
        self.seed = int(seed)
        self._key = seed_key(self.seed)
        self._p_correct = 0.5 + 0.5 * self.delta
        self._labels = truth.assignment.tolist()

    def sigma(self, u: int, v: int) -> int:
        """The pair's noise sign; test-only, does not touch the ledger."""
        if self.delta >= 1.0:
            return 1
        return 1 if pair_uniform(self._key, pair_code(u, v)) < self._p_correct else -1

    def _answer(self, u, v, code):
        tau = 1 if self._labels[u] == self._labels[v] else -1
        if self.delta >= 1.0:
            return tau
        return tau if pair_uniform(self._key, code) < self._p_correct else -tau

    def _answer_array(self, u, vs, codes):
        lab = self.truth.assignment
        tau = np.where(lab[vs] == lab[u], 1, -1).astype(np.int8)
        if self.delta >= 1.0:
            return tau
        flip = pair_uniform_array(self._key, codes) >= self._p_correct
        tau[flip] *= -1
        return tau


def oracle_query(oracle: QueryOracle, u: int, v: int) -> int:
    return oracle.query(u, v)


def ledger_stats(oracle: QueryOracle) -> QueryLedger:
    return oracle.ledger_stats()
