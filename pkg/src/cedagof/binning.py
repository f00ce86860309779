"""Bin intervals from a tree cut of the observed sample, and bin counting."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .hcluster import ClusterAssignment, Dendrogram, cut
from .ingest import Sample


class BinningError(ValueError):
    pass


@dataclass(frozen=True)
class BinIntervals:
    """K bins split at ``boundaries``: (-inf, b1], (b1, b2], ..., (b_{K-1}, +inf)."""

    boundaries: tuple[float, ...]

    def __post_init__(self):
        b = self.boundaries
        if any(not math.isfinite(x) for x in b):
            raise BinningError("boundaries must be finite")
        if any(b[i] >= b[i + 1] for i in range(len(b) - 1)):
            raise BinningError("boundaries must be strictly increasing")

    @property
    def K(self) -> int:
        return len(self.boundaries) + 1

    def as_pairs(self) -> list[tuple[float, float]]:
        """The K x 2 interval table with infinite outer ends."""
        edges = (-math.inf, *self.boundaries, math.inf)
        return [(edges[k], edges[k + 1]) for k in range(self.K)]

    def labels(self) -> list[str]:
        return [f"({_fmt(lo)},{_fmt(hi)}]" if math.isfinite(hi) else f"({_fmt(lo)},{_fmt(hi)})" for lo, hi in self.as_pairs()]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("lower,upper\n")
        for lo, hi in self.as_pairs():
            buf.write(f"{_fmt(lo)},{_fmt(hi)}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "BinIntervals":
        lines = [ln for ln in text.strip().splitlines()[1:] if ln.strip()]
        pairs = [tuple(float(c) for c in ln.split(",")) for ln in lines]
        return cls(tuple(hi for _, hi in pairs[:-1]))


def _fmt(x: float) -> str:
    if x == math.inf:
        return "+inf"
    if x == -math.inf:
        return "-inf"
    return repr(float(x))


def intervals_from_cut(s: Sample, a: ClusterAssignment, rule: str = "midpoint") -> BinIntervals:
    """Bins whose interior edges separate adjacent clusters of the sorted sample.

    ``rule="midpoint"`` puts each edge halfway between the largest value of one
    cluster and the smallest of the next; ``rule="left"`` puts it at the
    left cluster's maximum. Clusters must be runs of consecutive order
    statistics with no value shared between neighbours.
    """
    if len(a.labels) != s.n:
        raise BinningError("assignment size does not match sample")
    if rule not in ("midpoint", "left"):
        raise BinningError(f"unknown boundary rule {rule!r}")
    v = s.values
    labels = np.asarray(a.labels)
    spans = sorted(
        (float(v[labels == c].min()), float(v[labels == c].max())) for c in range(a.K)
    )
    bounds = []
    for (lo0, hi0), (lo1, hi1) in zip(spans, spans[1:]):
        if hi0 > lo1:
            raise BinningError("clusters are not intervals of the sorted sample")
        if hi0 == lo1:
            raise BinningError(
                f"adjacent clusters share the value {hi0}; choose a different K"
            )
        bounds.append(0.5 * (hi0 + lo1) if rule == "midpoint" else hi0)
    return BinIntervals(tuple(bounds))


def count_bins(values, b: BinIntervals) -> np.ndarray:
    """Counts per bin under right-closed membership; always sums to ``len(values)``."""
    idx = np.searchsorted(np.asarray(b.boundaries, dtype=np.float64), np.asarray(values, dtype=np.float64), side="left")
    return np.bincount(np.ravel(idx), minlength=b.K).astype(np.int64)


def piecewise_linear_cdf_distance(s: Sample, b: BinIntervals) -> float:
    """L-infinity gap between the sample EDF and the histogram's piecewise-linear CDF.

    The outer bins are closed at the sample minimum and maximum so the
    interpolating CDF runs from 0 at the minimum to 1 at the maximum.
    """
    v = s.values
    n = s.n
    counts = count_bins(v, b)
    knots_x = np.array([v[0], *b.boundaries, v[-1]], dtype=np.float64)
    knots_y = np.concatenate([[0.0], np.cumsum(counts) / n])
    xs = np.unique(v)
    pl = np.interp(xs, knots_x, knots_y)
    right = np.searchsorted(v, xs, side="right") / n
    left = np.searchsorted(v, xs, side="left") / n
    return float(max(np.max(np.abs(pl - right)), np.max(np.abs(pl - left))))


def choose_k(s: Sample, tree: Dendrogram, k_min: int = 3, k_max: int = 15, tol: float = 0.03) -> tuple[int, float]:
    """Smallest K whose binned piecewise-linear CDF is within ``tol`` of the EDF.

    Falls back to the K with the smallest distance when none qualifies.
    Returns ``(K, distance)``.
    """
    best: tuple[float, int] | None = None
    for K in range(k_min, min(k_max, s.n) + 1):
        try:
            b = intervals_from_cut(s, cut(tree, K))
        except BinningError:
            continue
        dist = piecewise_linear_cdf_distance(s, b)
        if dist <= tol:
            return K, dist
        if best is None or dist < best[0]:
            best = (dist, K)
    if best is None:
        raise BinningError("no valid K in range")
    return best[1], best[0]
