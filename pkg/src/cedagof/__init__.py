"""Goodness-of-fit by clustering an observed sample among simulated mimicries."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .ingest import Sample, SummaryStats, edf_eval, load_housefly, load_sample, make_sample, summarize
from .hcluster import ClusterAssignment, Dendrogram, DistanceMatrix, cut, euclidean_distances, leaf_order, ward_d2_cluster
from .binning import BinIntervals, count_bins, intervals_from_cut
from .mimicry import CountMatrix, MimicryConfig, P0Matrix, build_count_matrix, simulate_mimicries, to_p0
from .treepv import CedaResult, PoddsVector, ceda_pvalue, cluster_p0, podds_all, run_ceda
from .bindiff import bin_diff, cluster_signs, sign_threshold
from .classical import TestResult, ks_test, moore_bins, pearson_chisq, qq_data, shapiro_wilk, stephens_dstar

__all__ = [
    "__version__",
    "BACKEND",
    "Sample",
    "SummaryStats",
    "edf_eval",
    "load_housefly",
    "load_sample",
    "make_sample",
    "summarize",
    "ClusterAssignment",
    "Dendrogram",
    "DistanceMatrix",
    "cut",
    "euclidean_distances",
    "leaf_order",
    "ward_d2_cluster",
    "BinIntervals",
    "count_bins",
    "intervals_from_cut",
    "CountMatrix",
    "MimicryConfig",
    "P0Matrix",
    "build_count_matrix",
    "simulate_mimicries",
    "to_p0",
    "CedaResult",
    "PoddsVector",
    "ceda_pvalue",
    "cluster_p0",
    "podds_all",
    "run_ceda",
    "bin_diff",
    "cluster_signs",
    "sign_threshold",
    "TestResult",
    "ks_test",
    "moore_bins",
    "pearson_chisq",
    "qq_data",
    "shapiro_wilk",
    "stephens_dstar",
]
