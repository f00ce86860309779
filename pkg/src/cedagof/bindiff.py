"""Per-bin sign of mimicry-minus-observed counts, for the diagnostic heatmap."""

from __future__ import annotations

import io

import numpy as np

from .hcluster import Dendrogram, euclidean_distances, ward_d2_cluster
from .mimicry import CountMatrix


def bin_diff(c: CountMatrix | np.ndarray, flip: bool = False) -> np.ndarray:
    """``counts[i] - counts[0]`` for every row; ``flip=True`` gives observed minus mimicry."""
    counts = c.counts if isinstance(c, CountMatrix) else np.asarray(c)
    d = counts.astype(np.int64) - counts[0].astype(np.int64)
    return -d if flip else d


def sign_threshold(d) -> np.ndarray:
    return np.sign(np.asarray(d)).astype(np.int8)


def cluster_signs(sm: np.ndarray, backend: str | None = None) -> Dendrogram:
    return ward_d2_cluster(euclidean_distances(np.asarray(sm, dtype=np.float64)), backend=backend)


def signs_to_csv(sm: np.ndarray, labels: list[str] | None = None) -> str:
    K = sm.shape[1]
    labels = labels or [f"bin{k + 1}" for k in range(K)]
    buf = io.StringIO()
    buf.write("row," + ",".join(f'"{lab}"' for lab in labels) + "\n")
    for i, row in enumerate(sm):
        name = "observed" if i == 0 else f"sim{i}"
        buf.write(name + "," + ",".join(str(int(x)) for x in row) + "\n")
    return buf.getvalue()
