from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

STRICT = "strict"
BIASED = "biased(0.1)"


@dataclass
class Subcluster:
    members: np.ndarray
    bias_grade: str = STRICT
    provenance: str = ""

    def __post_init__(self):
        self.members = np.asarray(self.members, dtype=np.int64)

    def __len__(self) -> int:
        return len(self.members)


@dataclass
class Diagnostics:
    """Per-trial bookkeeping; serialised as the JSON sidecar."""

    clamps: list[str] = field(default_factory=list)
    with_replacement_pulls: int = 0
    rounds: int = 0
    fail_branch_hits: int = 0
    survivors: list[int] = field(default_factory=list)
    balanced_survivors: list[int] = field(default_factory=list)
    phase_queries: dict[str, int] = field(default_factory=dict)
    gap_h: list[int] = field(default_factory=list)
    residual_passes: int = 0
    round_cap_hit: bool = False

    def clamp(self, name: str, wanted: int, available: int) -> int:
        if wanted > available:
            self.clamps.append(f"{name}: {wanted} -> {available}")
            return available
        return wanted

    def charge(self, phase: str, queries: int) -> None:
        self.phase_queries[phase] = self.phase_queries.get(phase, 0) + int(queries)

    def to_dict(self) -> dict:
        return asdict(self)


class phase:
    """Context manager charging distinct-pair growth to a named phase."""

    def __init__(self, oracle, diag: Diagnostics, name: str):
        self.oracle, self.diag, self.name = oracle, diag, name

    def __enter__(self):
        self.start = self.oracle.distinct_pairs
        return self

    def __exit__(self, *exc):
        self.diag.charge(self.name, self.oracle.distinct_pairs - self.start)
        return False


@dataclass
class ClusteringResult:
    clusters: list[np.ndarray]
    unlabeled: np.ndarray
    diagnostics: Diagnostics = field(default_factory=Diagnostics)

    def labels(self, n: int) -> np.ndarray:
        """Vertex labels with -1 for unlabeled (and for vertices outside V)."""
        out = np.full(n, -1, dtype=np.int64)
        for i, c in enumerate(self.clusters):
            out[c] = i
        return out

    def to_json(self, n: int) -> str:
        return json.dumps({"n": n, "k": len(self.clusters), "assignment": self.labels(n).tolist()})


def as_partition(groups) -> set[frozenset[int]]:
    return {frozenset(int(v) for v in g) for g in groups if len(g)}


def is_partition(result: ClusteringResult, vertices) -> bool:
    """Groups pairwise disjoint, inside ``vertices``, and together with the
    unlabeled bucket covering each vertex exactly once."""
    allv = np.concatenate([np.asarray(c, dtype=np.int64) for c in result.clusters]
                          + [np.asarray(result.unlabeled, dtype=np.int64)])
    return len(allv) == len(np.unique(allv)) and set(allv.tolist()) == set(np.asarray(vertices).tolist())
