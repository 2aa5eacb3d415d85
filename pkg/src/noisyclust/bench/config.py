"""Experiment configuration loaded from a single JSON document."""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..clustering import ScaledConstants
from ..oracle import Profile

ALGORITHMS = ("noisy_clustering", "bal_noisy_clustering", "majority_baseline", "baif_lab")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    algorithm: str
    n: tuple[int, ...]
    k: tuple[int, ...]
    delta: tuple[float, ...]
    profile: Profile = Profile.balanced(1.0)
    trials: int = 1
    base_seed: int = 0
    consts: ScaledConstants = field(default_factory=ScaledConstants)
    balance: float = 1.0  # b passed to bal_noisy_clustering
    out_dir: str = "results"
    workers: int = 1
    timing: bool = False

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if not self.n or not self.k or not self.delta:
            raise ConfigError("grid lists n, k and delta must be non-empty")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if any(d <= 0 or d > 1 for d in self.delta):
            raise ConfigError("every delta must lie in (0, 1]")
        if any(k < 1 for k in self.k) or any(n < 1 for n in self.n):
            raise ConfigError("n and k must be positive")
        if any(n < k for n in self.n for k in self.k):
            raise ConfigError("every n must be at least every k")
        if not 0 < self.balance <= 1:
            raise ConfigError("balance must lie in (0, 1]")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")

    def grid(self):
        """Grid points in a fixed order: n, then k, then delta."""
        return [(n, k, d) for n in self.n for k in self.k for d in self.delta]

    def with_overrides(self, seed=None, trials=None, out=None) -> "ExperimentConfig":
        changes = {}
        if seed is not None:
            changes["base_seed"] = int(seed)
        if trials is not None:
            changes["trials"] = int(trials)
        if out is not None:
            changes["out_dir"] = str(out)
        return replace(self, **changes) if changes else self

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        known = {"algorithm", "grid", "profile", "trials", "base_seed", "consts", "balance",
                 "out_dir", "workers", "timing"}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            grid = doc["grid"]
            profile = doc.get("profile", "balanced(1.0)")
            profile = Profile.parse(profile) if isinstance(profile, str) else Profile(**profile)
            return cls(
                algorithm=doc["algorithm"],
                n=tuple(int(x) for x in grid["n"]),
                k=tuple(int(x) for x in grid["k"]),
                delta=tuple(float(x) for x in grid["delta"]),
                profile=profile,
                trials=int(doc.get("trials", 1)),
                base_seed=int(doc.get("base_seed", 0)),
                consts=ScaledConstants.from_dict(doc.get("consts", {})),
                balance=float(doc.get("balance", 1.0)),
                out_dir=str(doc.get("out_dir", "results")),
                workers=int(doc.get("workers", 1)),
                timing=bool(doc.get("timing", False)),
            )
        except ConfigError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid config: {exc}") from exc

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "grid": {"n": list(self.n), "k": list(self.k), "delta": list(self.delta)},
            "profile": self.profile.tag,
            "trials": self.trials,
            "base_seed": self.base_seed,
            "consts": self.consts.to_dict(),
            "balance": self.balance,
            "out_dir": self.out_dir,
            "workers": self.workers,
            "timing": self.timing,
        }


def load_config(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return ExperimentConfig.from_dict(doc)
