"""Pure numpy implementation of the Ward.D2 merge loop.

Must stay bit-for-bit identical to ``_ckernels.pyx``; the arithmetic in the
Lance-Williams update is written in the same order in both.
"""

import numpy as np


def _row_nn(d2, i, ids):
    """Nearest active slot to ``i``; ties go to the smaller node id."""
    row = d2[i]
    best = row.min()
    if best == np.inf:
        return -1, np.inf
    cand = np.flatnonzero(row == best)
    if cand.size > 1:
        cand = cand[np.argsort(ids[cand], kind="stable")]
    return int(cand[0]), float(best)


def ward_linkage(sqdist):
    """Agglomerate with Ward.D2 given a square matrix of squared distances.

    Returns ``(left, right, height, size)`` arrays of length M - 1. Node ids
    0..M-1 are leaves; merge t creates node M + t. ``left`` is the smaller
    child id. At each step the globally closest pair merges, ties broken by
    the lexicographically smallest (smaller id, larger id).
    """
    d2 = np.array(sqdist, dtype=np.float64, copy=True)
    M = d2.shape[0]
    left = np.empty(M - 1, dtype=np.int64)
    right = np.empty(M - 1, dtype=np.int64)
    height = np.empty(M - 1, dtype=np.float64)
    size = np.empty(M - 1, dtype=np.int64)

    np.fill_diagonal(d2, np.inf)
    ids = np.arange(M, dtype=np.int64)
    counts = np.ones(M, dtype=np.float64)
    active = np.ones(M, dtype=bool)
    nn = np.empty(M, dtype=np.int64)
    nnd = np.empty(M, dtype=np.float64)
    for i in range(M):
        nn[i], nnd[i] = _row_nn(d2, i, ids)

    for step in range(M - 1):
        act = np.flatnonzero(active)
        dmin = nnd[act].min()
        cand = act[nnd[act] == dmin]
        if cand.size == 1:
            i = int(cand[0])
        else:
            a, b = ids[cand], ids[nn[cand]]
            lo, hi = np.minimum(a, b), np.maximum(a, b)
            i = int(cand[np.lexsort((hi, lo))[0]])
        j = int(nn[i])
        # slot of the smaller node id plays the "i" role in the update
        if ids[j] < ids[i]:
            i, j = j, i
        ni, nj = counts[i], counts[j]
        dij = d2[i, j]

        left[step] = ids[i]
        right[step] = ids[j]
        height[step] = np.sqrt(dij)
        size[step] = int(ni + nj)

        s, t = min(i, j), max(i, j)
        others = act[(act != i) & (act != j)]
        nk = counts[others]
        new = ((ni + nk) * d2[i, others] + (nj + nk) * d2[j, others] - nk * dij) / (ni + nj + nk)
        new = np.maximum(new, 0.0)

        d2[t, :] = np.inf
        d2[:, t] = np.inf
        d2[s, others] = new
        d2[others, s] = new
        ids[s] = M + step
        counts[s] = ni + nj
        active[t] = False

        if others.size == 0:
            break
        stale = others[(nn[others] == i) | (nn[others] == j)]
        fresh = others[(nn[others] != i) & (nn[others] != j)]
        # new node has the largest id, so it only wins on strict improvement
        better = fresh[d2[fresh, s] < nnd[fresh]]
        nn[better] = s
        nnd[better] = d2[better, s]
        for k in stale:
            nn[k], nnd[k] = _row_nn(d2, k, ids)
        nn[s], nnd[s] = _row_nn(d2, s, ids)

    return left, right, height, size
