"""Vectorized numpy versions of the compiled kernels (same signatures)."""

import numpy as np


def _edge_arrays(indptr, indices, weights):
    rows = np.repeat(np.arange(len(indptr) - 1), np.diff(indptr))
    upper = rows < indices
    return rows[upper], indices[upper], weights[upper]


def sweep_prefixes(order, indptr, indices, weights, degrees):
    """Volume and cut weight of every proper prefix of ``order``."""
    n = len(order)
    if n < 2:
        return np.empty(0), np.empty(0)
    rank = np.empty(n, dtype=np.int64)
    rank[order] = np.arange(n)
    eu, ev, ew = _edge_arrays(indptr, indices, weights)
    # An edge crosses prefix k iff min(rank) <= k < max(rank).
    lo = np.minimum(rank[eu], rank[ev])
    hi = np.maximum(rank[eu], rank[ev])
    delta = np.zeros(n + 1)
    np.add.at(delta, lo, ew)
    np.add.at(delta, hi, -ew)
    cuts = np.cumsum(delta)[: n - 1]
    vols = np.cumsum(degrees[order])[: n - 1]
    return vols, cuts


def enumerate_cuts(indptr, indices, weights, degrees):
    """Volume and cut weight of every subset, indexed by bitmask."""
    n = len(degrees)
    masks = np.arange(1 << n, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(n)) & 1).astype(bool)
    vols = bits.astype(np.float64) @ np.asarray(degrees, dtype=np.float64)
    eu, ev, ew = _edge_arrays(indptr, indices, weights)
    cuts = np.zeros(1 << n)
    for u, v, w in zip(eu, ev, ew):
        cuts += w * (bits[:, u] ^ bits[:, v])
    return vols, cuts
