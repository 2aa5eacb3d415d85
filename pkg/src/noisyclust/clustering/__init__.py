"""Clustering algorithms over a same-cluster query oracle."""
from .balanced import bal_noisy_clustering, sub_cluster
from .baseline import majority_baseline
from .constants import ScaledConstants
from .general import gap_sbm, gap_subcluster, gap_threshold, merge_subclusters, noisy_clustering, size_gap_index
from .primitives import cluster_verify, positive_degree, test_bias, true_cluster_id
from .result import BIASED, STRICT, ClusteringResult, Diagnostics, Subcluster, as_partition, is_partition

__all__ = [
    "BIASED", "STRICT", "ClusteringResult", "Diagnostics", "ScaledConstants", "Subcluster",
    "as_partition", "bal_noisy_clustering", "cluster_verify", "gap_sbm", "gap_subcluster",
    "gap_threshold", "is_partition", "majority_baseline", "merge_subclusters", "noisy_clustering",
    "positive_degree", "size_gap_index", "sub_cluster", "test_bias", "true_cluster_id",
]
