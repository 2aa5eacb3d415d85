"""Set-size formulas with their unspecified constants made explicit.

Every size is ``ceil(scale * c_x * formula)`` with ``formula`` written as in
the analysis (natural log of the global vertex count).  ``scale`` is the
single global knob; the per-formula ``c_x`` defaults are calibrated for
desk-scale runs (n in the thousands, delta around 0.8).
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass


def _log(n: int) -> float:
    return math.log(max(n, 2))


@dataclass(frozen=True)
class ScaledConstants:
    scale: float = 1.0
    c0: float = 0.025              # SubCluster |T| = c0 k^2 log n / (b^2 delta^2)
    c_verify: float = 0.0014       # balanced-case X'_i = 1600 log n / delta^2
    c_gap: float = 0.2             # general-case t = c k^4 log n / delta^2
    c_round: float = 2.4           # general-case X'_i = c log n / delta^2
    c_testbias: float = 0.006      # TestBias loop 16 k log n / b
    testbias_b: float = 0.25
    c_testbias_size: float = 0.003  # TestBias premise |B| >= 64 log n / (eta^2 delta^2)
    c_merge: float = 1.5           # merge sample m = log n / delta^2
    c_cleanup: float = 0.15        # cleanup C'_i = 16 log n / delta^2
    c_recover: float = 0.03        # recoverable cluster size k^4 log^2 n / delta^2
    me_scale: float = 0.005        # Median Elimination per-round sample multiplier

    def __post_init__(self):
        for f in dataclasses.fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"{f.name} must be positive")

    def replace(self, **changes) -> "ScaledConstants":
        return dataclasses.replace(self, **changes)

    def _size(self, c: float, value: float) -> int:
        return max(1, math.ceil(self.scale * c * value))

    def subcluster_size(self, n: int, k: int, delta: float, b: float) -> int:
        return self._size(self.c0, k * k * _log(n) / (b * b * delta * delta))

    def balanced_verify_size(self, n: int, delta: float) -> int:
        return self._size(self.c_verify, 1600 * _log(n) / (delta * delta))

    def gap_sample_size(self, n: int, k: int, delta: float) -> int:
        return self._size(self.c_gap, k ** 4 * _log(n) / (delta * delta))

    def round_verify_size(self, n: int, delta: float) -> int:
        return self._size(self.c_round, _log(n) / (delta * delta))

    def testbias_rounds(self, n: int, k: int) -> int:
        return self._size(self.c_testbias, 16 * k * _log(n) / self.testbias_b)

    def testbias_min_size(self, n: int, eta: float, delta: float) -> int:
        return self._size(self.c_testbias_size, 64 * _log(n) / (eta * eta * delta * delta))

    def merge_sample(self, n: int, delta: float) -> int:
        return self._size(self.c_merge, _log(n) / (delta * delta))

    def cleanup_size(self, n: int, delta: float) -> int:
        return self._size(self.c_cleanup, 16 * _log(n) / (delta * delta))

    def verify_set_size(self, n: int, delta: float, eta: float = 0.5) -> int:
        """|B| = 16 log n / (eta^2 delta^2), on the cleanup constant."""
        return self._size(self.c_cleanup, 16 * _log(n) / (eta * eta * delta * delta))

    def baseline_sample(self, n: int, delta: float) -> int:
        """Per-cluster majority sample of the baseline; same test strength
        as one balanced-case verification."""
        return self.balanced_verify_size(n, delta)

    def recoverable_size(self, n: int, k: int, delta: float) -> int:
        return self._size(self.c_recover, k ** 4 * _log(n) ** 2 / (delta * delta))

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> "ScaledConstants":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(doc) - names
        if unknown:
            raise ValueError(f"unknown constants: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in doc.items()})
