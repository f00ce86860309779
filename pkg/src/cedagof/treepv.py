"""Product-of-odds scores on a clustering tree and the tree-based p-value."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .binning import BinIntervals, intervals_from_cut
from .hcluster import Dendrogram, cluster_values, cut, euclidean_distances, ward_d2_cluster
from .ingest import Sample
from .mimicry import CountMatrix, MimicryConfig, P0Matrix, build_count_matrix, simulate_mimicries, to_p0


@dataclass(frozen=True)
class PoddsVector:
    """Per-leaf product of odds. ``exact`` keeps rationals so ties compare exactly."""

    exact: tuple[Fraction, ...]
    observed_index: int = 0

    @property
    def values(self) -> np.ndarray:
        return np.array([float(f) for f in self.exact])

    def __len__(self) -> int:
        return len(self.exact)


def cluster_p0(p0: P0Matrix | np.ndarray, backend: str | None = None) -> Dendrogram:
    rows = p0.values if isinstance(p0, P0Matrix) else np.asarray(p0, dtype=np.float64)
    return ward_d2_cluster(euclidean_distances(rows), backend=backend)


def podds_all(t: Dendrogram, observed_index: int = 0) -> PoddsVector:
    """Product of odds along each root-to-leaf path.

    At every internal node the leaf's factor is (leaves on its own branch) /
    (leaves on the other branch).
    """
    M = t.n_leaves
    if M < 2:
        raise ValueError("tree needs at least 2 leaves")
    out: list[Fraction | None] = [None] * M
    stack = [(t.root, Fraction(1))]
    while stack:
        node, acc = stack.pop()
        if node < M:
            out[node] = acc
            continue
        a, b = t.children(node)
        ca, cb = t.leaf_count(a), t.leaf_count(b)
        stack.append((a, acc * Fraction(ca, cb)))
        stack.append((b, acc * Fraction(cb, ca)))
    return PoddsVector(tuple(out), observed_index)


def ceda_pvalue(pv: PoddsVector) -> float:
    """Share of the other leaves whose Podds is strictly below the observed leaf's."""
    j = pv.observed_index
    target = pv.exact[j]
    below = sum(1 for i, v in enumerate(pv.exact) if i != j and v < target)
    return below / (len(pv.exact) - 1)


@dataclass(frozen=True, eq=False)
class CedaResult:
    p_value: float
    podds: PoddsVector
    dendrogram: Dendrogram
    K: int
    m: int
    seed: int
    intervals: BinIntervals
    counts: CountMatrix
    p0: P0Matrix
    data_tree: Dendrogram

    def to_json(self) -> dict:
        return {
            "p_value": self.p_value,
            "podds": [float(v) for v in self.podds.exact],
            "observed_index": self.podds.observed_index,
            "K": self.K,
            "m": self.m,
            "seed": self.seed,
            "intervals": [[_num(lo), _num(hi)] for lo, hi in self.intervals.as_pairs()],
            "merges": self.dendrogram.to_json()["merges"],
        }


def _num(x: float):
    if x == float("inf"):
        return "+inf"
    if x == float("-inf"):
        return "-inf"
    return x


def run_ceda(
    s: Sample,
    K: int,
    cfg: MimicryConfig,
    data_tree: Dendrogram | None = None,
    boundary_rule: str = "midpoint",
    backend: str | None = None,
) -> CedaResult:
    """Full pipeline: cluster the data, bin by the K-cut, simulate, cluster P0, score.

    ``data_tree`` may be passed to reuse the clustering of ``s`` across seeds.
    """
    if K < 2:
        raise ValueError("K must be at least 2")
    if data_tree is None:
        data_tree = cluster_values(s.values, backend=backend)
    intervals = intervals_from_cut(s, cut(data_tree, K), rule=boundary_rule)
    mims = simulate_mimicries(cfg, s.n)
    counts = build_count_matrix(s, mims, intervals)
    p0 = to_p0(counts)
    tree = cluster_p0(p0, backend=backend)
    pv = podds_all(tree, observed_index=0)
    return CedaResult(
        p_value=ceda_pvalue(pv),
        podds=pv,
        dendrogram=tree,
        K=K,
        m=cfg.m,
        seed=cfg.seed,
        intervals=intervals,
        counts=counts,
        p0=p0,
        data_tree=data_tree,
    )
