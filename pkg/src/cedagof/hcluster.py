"""Ward.D2 agglomerative clustering, tree cuts and leaf ordering.

Node ids follow the usual linkage convention: ``0..M-1`` are leaves and the
merge at step ``t`` creates node ``M + t``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _backend


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Symmetric Euclidean distances, stored squared.

    The squared form is what the Ward recurrence consumes, so keeping it
    avoids a square-root round trip.
    """

    squared: np.ndarray

    @property
    def size(self) -> int:
        return int(self.squared.shape[0])

    @property
    def entries(self) -> np.ndarray:
        return np.sqrt(self.squared)

    def __getitem__(self, ij) -> float:
        return float(np.sqrt(self.squared[ij]))


def euclidean_distances(values) -> DistanceMatrix:
    """Pairwise Euclidean distances between scalars or between equal-length rows."""
    if isinstance(values, np.ndarray):
        x = values.astype(np.float64)
    else:
        rows = list(values)
        lengths = {len(r) for r in rows if np.ndim(r) > 0}
        if len(lengths) > 1:
            raise ValueError(f"rows have unequal lengths: {sorted(lengths)}")
        x = np.asarray(rows, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise ValueError("expected a 1-D sequence or a 2-D array of rows")
    if x.shape[0] < 2:
        raise ValueError("need at least 2 points")
    if not np.all(np.isfinite(x)):
        raise ValueError("non-finite coordinates")
    sq = np.zeros((x.shape[0], x.shape[0]))
    for col in x.T:
        diff = col[:, None] - col[None, :]
        sq += diff * diff
    sq.setflags(write=False)
    return DistanceMatrix(sq)


@dataclass(frozen=True, eq=False)
class Dendrogram:
    """Binary merge tree.

    Attributes
    ----------
    n_leaves : int
    left, right : ndarray of int
        Child node ids per merge; ``left`` holds the smaller id.
    height : ndarray of float
        Unsquared Ward.D2 linkage distance at each merge.
    size : ndarray of int
        Leaf count of the node created by each merge.
    """

    n_leaves: int
    left: np.ndarray
    right: np.ndarray
    height: np.ndarray
    size: np.ndarray

    @property
    def root(self) -> int:
        return 2 * self.n_leaves - 2

    def merges(self) -> list[tuple[int, int, float, int]]:
        return [
            (int(a), int(b), float(h), int(c))
            for a, b, h, c in zip(self.left, self.right, self.height, self.size)
        ]

    def children(self, node: int) -> tuple[int, int]:
        t = node - self.n_leaves
        return int(self.left[t]), int(self.right[t])

    def leaf_count(self, node: int) -> int:
        return 1 if node < self.n_leaves else int(self.size[node - self.n_leaves])

    def to_json(self) -> dict:
        return {
            "n_leaves": self.n_leaves,
            "merges": [
                {"left": a, "right": b, "height": h, "size": c} for a, b, h, c in self.merges()
            ],
        }

    @classmethod
    def from_json(cls, obj: dict | str) -> "Dendrogram":
        if isinstance(obj, str):
            obj = json.loads(obj)
        m = obj["merges"]
        return cls(
            n_leaves=int(obj["n_leaves"]),
            left=np.array([r["left"] for r in m], dtype=np.int64),
            right=np.array([r["right"] for r in m], dtype=np.int64),
            height=np.array([r["height"] for r in m], dtype=np.float64),
            size=np.array([r["size"] for r in m], dtype=np.int64),
        )

    def same_as(self, other: "Dendrogram") -> bool:
        return (
            self.n_leaves == other.n_leaves
            and np.array_equal(self.left, other.left)
            and np.array_equal(self.right, other.right)
            and np.array_equal(self.height, other.height)
            and np.array_equal(self.size, other.size)
        )


def ward_d2_cluster(d: DistanceMatrix, backend: str | None = None) -> Dendrogram:
    """Cluster with Ward.D2 linkage.

    Squared distances go through the Lance-Williams Ward update and the
    recorded height is the square root of the merged pair's linkage value.
    Among equally close pairs the one with the smallest (left id, right id)
    merges first, so the output is fully deterministic.
    """
    if d.size < 2:
        raise ValueError("need at least 2 points")
    kernel = _backend.get_kernels(backend)
    left, right, height, size = kernel(d.squared)
    for a in (left, right, height, size):
        a.setflags(write=False)
    return Dendrogram(d.size, left, right, height, size)


@dataclass(frozen=True)
class ClusterAssignment:
    K: int
    labels: tuple[int, ...]

    def members(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.K)]
        for leaf, c in enumerate(self.labels):
            out[c].append(leaf)
        return out


def cut(t: Dendrogram, K: int) -> ClusterAssignment:
    """Undo the last ``K - 1`` merges; clusters numbered by smallest member leaf."""
    M = t.n_leaves
    if not 1 <= K <= M:
        raise ValueError(f"K must be in [1, {M}], got {K}")
    parent = list(range(2 * M - 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for step in range(M - K):
        node = M + step
        parent[find(int(t.left[step]))] = node
        parent[find(int(t.right[step]))] = node

    roots = [find(i) for i in range(M)]
    relabel: dict[int, int] = {}
    for r in roots:  # leaves visited in ascending order
        if r not in relabel:
            relabel[r] = len(relabel)
    return ClusterAssignment(K, tuple(relabel[r] for r in roots))


def leaf_order(t: Dendrogram) -> list[int]:
    """Leaves left to right by depth-first traversal, left child first."""
    M = t.n_leaves
    order: list[int] = []
    stack = [t.root]
    while stack:
        node = stack.pop()
        if node < M:
            order.append(node)
        else:
            a, b = t.children(node)
            stack.append(b)
            stack.append(a)
    return order


def cluster_values(values: Sequence[float] | np.ndarray, backend: str | None = None) -> Dendrogram:
    """Shorthand for clustering scalars or rows straight from data."""
    return ward_d2_cluster(euclidean_distances(values), backend=backend)
