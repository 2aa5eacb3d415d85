"""Seeded sweeps: one oracle per trial, rows sorted before writing."""
from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import math
import struct
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..clustering import (ClusteringResult, Diagnostics, as_partition, bal_noisy_clustering,
                          majority_baseline, noisy_clustering)
from ..lower_bound import BaifInstance, baif_reduction, noisy_clustering_alg, write_baif_csv
from ..oracle import NoisyOracle, generate_ground_truth, seed_key
from .config import ExperimentConfig


@dataclass(frozen=True)
class ResultRow:
    n: int
    k: int
    delta: float
    profile: str
    seed: int
    algorithm: str
    distinct_pairs: int
    raw_calls: int
    exact_recovery: bool
    clusters_above_threshold_recovered: bool
    rounds: int
    fail_branch_hits: int
    wall_time: float


FIELDS = tuple(f.name for f in dataclasses.fields(ResultRow))


def trial_seed(base_seed: int, n: int, k: int, delta: float, profile_tag: str, trial: int) -> int:
    """Stable 64-bit seed; adding grid points never changes existing seeds."""
    h = hashlib.blake2b(digest_size=8)
    h.update(struct.pack("<Qqqd", base_seed & 0xFFFFFFFFFFFFFFFF, n, k, delta))
    h.update(profile_tag.encode("utf-8"))
    h.update(struct.pack("<q", trial))
    return int.from_bytes(h.digest(), "little")


def recovered_above(result: ClusteringResult, clusters, threshold: int) -> bool:
    got = as_partition(result.clusters)
    return all(frozenset(c.tolist()) in got for c in clusters if len(c) >= threshold)


def run_trial(config: ExperimentConfig, n: int, k: int, delta: float, trial: int):
    """One seeded trial; returns (row, diagnostics document, BAIF outcome or None)."""
    # the lab draws its own two-cluster instances; the profile does not apply
    tag = "uniform" if config.algorithm == "baif_lab" else config.profile.tag
    seed = trial_seed(config.base_seed, n, k, delta, tag, trial)
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    outcome = None
    if config.algorithm == "baif_lab":
        inst = BaifInstance.random(delta, 1.0 / n, rng)
        out = baif_reduction(inst, noisy_clustering_alg(n, k, delta, config.consts), n, n // 2, rng)
        diag = out.result.diagnostics
        distinct, raw = out.distinct_pairs, out.raw_calls
        exact, above = out.correct, not out.failed
        outcome = dataclasses.replace(out, result=None)
    else:
        truth = generate_ground_truth(n, k, config.profile, seed)
        oracle = NoisyOracle(truth, delta, seed_key(seed, salt=1))
        diag = Diagnostics()
        V = np.arange(n)
        if config.algorithm == "noisy_clustering":
            result = noisy_clustering(oracle, V, k, delta, config.consts, rng, diag)
        elif config.algorithm == "bal_noisy_clustering":
            result = bal_noisy_clustering(oracle, V, k, delta, config.balance, config.consts, rng, diag)
        else:
            result = majority_baseline(oracle, V, k, delta, config.consts, rng, diag)
        clusters = truth.clusters()
        exact = (as_partition(result.clusters) == as_partition(clusters) and len(result.unlabeled) == 0)
        above = recovered_above(result, clusters, config.consts.recoverable_size(n, k, delta))
        distinct, raw = oracle.distinct_pairs, oracle.raw_calls
    elapsed = time.perf_counter() - start
    wall = round(elapsed, 6) if config.timing else 0.0
    row = ResultRow(n, k, float(delta), tag, seed, config.algorithm, int(distinct), int(raw),
                    bool(exact), bool(above), diag.rounds, diag.fail_branch_hits, wall)
    doc = {"n": n, "k": k, "delta": delta, "trial": trial, "seed": seed,
           "wall_time": wall, **diag.to_dict()}
    if outcome is not None:
        doc["pulls"] = outcome.pulls
        doc["verdict"] = outcome.verdict
    return row, doc, outcome


def _run_job(args):
    config, n, k, delta, trial = args
    return run_trial(config, n, k, delta, trial)


def q_hat(distinct_pairs: float, n: int, k: int, delta: float) -> float:
    """Distinct pairs normalised by n (k + log2 n) / delta^2."""
    return distinct_pairs / (n * (k + math.log2(n)) / (delta * delta))


def summarize(rows: list[ResultRow]) -> list[dict]:
    groups: dict[tuple, list[ResultRow]] = {}
    for r in rows:
        groups.setdefault((r.algorithm, r.n, r.k, r.delta, r.profile), []).append(r)
    out = []
    for (alg, n, k, delta, prof), rs in groups.items():
        q = np.array([r.distinct_pairs for r in rs], dtype=np.float64)
        out.append({
            "algorithm": alg, "n": n, "k": k, "delta": delta, "profile": prof, "trials": len(rs),
            "distinct_pairs_mean": float(q.mean()),
            "distinct_pairs_std": float(q.std(ddof=1)) if len(rs) > 1 else 0.0,
            "exact_recovery_rate": float(np.mean([r.exact_recovery for r in rs])),
            "above_threshold_rate": float(np.mean([r.clusters_above_threshold_recovered for r in rs])),
            "q_hat_mean": float(np.mean([q_hat(r.distinct_pairs, n, k, delta) for r in rs])),
        })
    return out


def write_rows(path, rows: list[ResultRow]) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(FIELDS)
        for r in rows:
            w.writerow([_cell(getattr(r, f)) for f in FIELDS])
    return path


def _cell(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return value


def read_rows(path) -> list[ResultRow]:
    casts = {f.name: f.type for f in dataclasses.fields(ResultRow)}
    rows = []
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != FIELDS:
            raise ValueError(f"{path}: header does not match the result schema")
        for rec in reader:
            vals = {}
            for name, text in rec.items():
                kind = casts[name]
                if kind in ("bool", bool):
                    vals[name] = text == "true"
                elif kind in ("int", int):
                    vals[name] = int(text)
                elif kind in ("float", float):
                    vals[name] = float(text)
                else:
                    vals[name] = text
            rows.append(ResultRow(**vals))
    return rows


def run_experiment(config: ExperimentConfig, write: bool = True):
    """Run every (grid point, trial) and optionally write results.csv,
    diagnostics.json and summary.json under ``config.out_dir``.

    Returns (rows, summary).  Output bytes do not depend on ``workers``.
    """
    jobs = [(config, n, k, d, t) for n, k, d in config.grid() for t in range(config.trials)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_run_job, jobs))
    else:
        results = [_run_job(j) for j in jobs]
    # jobs are already in (grid point, trial) order and map preserves it
    rows = [r for r, _, _ in results]
    summary = summarize(rows)
    if write:
        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_rows(out / "results.csv", rows)
        (out / "diagnostics.json").write_text(
            json.dumps([d for _, d, _ in results], indent=1, sort_keys=True), encoding="utf-8")
        (out / "summary.json").write_text(json.dumps(summary, indent=1), encoding="utf-8")
        if config.algorithm == "baif_lab":
            write_baif_csv(out / "baif.csv", [o for _, _, o in results])
    return rows, summary
