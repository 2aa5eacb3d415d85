"""Clustering with a faulty same-cluster oracle, plus the benchmark harness."""
from .bandit import BanditError, median_elimination, me_pull_budget, me_schedule
from .clustering import (ClusteringResult, ScaledConstants, bal_noisy_clustering, majority_baseline,
                         noisy_clustering)
from .oracle import GroundTruth, NoisyOracle, Profile, generate_ground_truth, ledger_stats, oracle_query, true_tau
from .sbm import bal_sbm

__all__ = [
    "BanditError", "ClusteringResult", "GroundTruth", "NoisyOracle", "Profile", "ScaledConstants",
    "bal_noisy_clustering", "bal_sbm", "generate_ground_truth", "ledger_stats", "majority_baseline",
    "me_pull_budget", "me_schedule", "median_elimination", "noisy_clustering", "oracle_query", "true_tau",
]
__version__ = "0.1.0"
