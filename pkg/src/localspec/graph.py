"""Weighted undirected graphs, cuts and their conductance, Laplacian primitives.

Conductance follows the volume-scaled convention

    phi(S) = vol(G) * w(S, S_bar) / (vol(S) * vol(S_bar))

which is symmetric under complementation. The more common min-volume variant
``w(S, S_bar) / min(vol(S), vol(S_bar))`` is exposed as
:attr:`Cut.min_volume_conductance` for comparison with other tools.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from . import kernels
from .errors import DegenerateCutError, InputError

MAX_BRUTE_FORCE_NODES = 20


class Graph:
    """Immutable connected weighted undirected graph on nodes ``0..n-1``.

    Parallel edges are merged by summing weights; self-loops, non-positive
    weights and disconnected inputs are rejected. ``labels`` maps dense ids
    back to the names used in the source file.
    """

    __slots__ = (
        "node_count",
        "heads",
        "tails",
        "weights",
        "degrees",
        "total_volume",
        "adjacency",
        "laplacian",
        "labels",
        "_label_index",
        "_frozen",
        "__weakref__",
    )

    def __init__(self, node_count: int, edges: Iterable[Sequence], labels=None):
        n = int(node_count)
        if n < 2:
            raise InputError(f"a graph needs at least two nodes, got {n}")
        rows = [tuple(e) for e in edges]
        if rows and any(len(e) not in (2, 3) for e in rows):
            raise InputError("edges must be (u, v) or (u, v, w) tuples")
        u = np.array([e[0] for e in rows], dtype=np.int64)
        v = np.array([e[1] for e in rows], dtype=np.int64)
        w = np.array([e[2] if len(e) == 3 else 1.0 for e in rows], dtype=np.float64)
        if len(u) and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n):
            raise InputError(f"edge endpoint outside 0..{n - 1}")
        loops = np.flatnonzero(u == v)
        if len(loops):
            raise InputError(f"self-loop at node {u[loops[0]]}")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise InputError("edge weights must be finite and strictly positive")

        lo, hi = np.minimum(u, v), np.maximum(u, v)
        upper = sp.coo_matrix((w, (lo, hi)), shape=(n, n)).tocsr()
        upper.sum_duplicates()
        upper.sort_indices()
        coo = upper.tocoo()
        adjacency = (upper + upper.T).tocsr()
        adjacency.sort_indices()
        adjacency.indptr = adjacency.indptr.astype(np.int32)
        adjacency.indices = adjacency.indices.astype(np.int32)

        ncomp, comp = connected_components(adjacency, directed=False)
        if ncomp > 1:
            sizes = sorted(np.bincount(comp).tolist(), reverse=True)
            raise InputError(f"graph is disconnected: component sizes {sizes}")

        degrees = np.asarray(adjacency.sum(axis=1)).ravel()
        laplacian = (sp.diags(degrees) - adjacency).tocsr()

        if labels is None:
            labels = tuple(str(i) for i in range(n))
        else:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n:
                raise InputError(f"expected {n} labels, got {len(labels)}")
            if len(set(labels)) != n:
                raise InputError("node labels must be unique")

        arrays = {
            "heads": coo.row.astype(np.int64),
            "tails": coo.col.astype(np.int64),
            "weights": coo.data.astype(np.float64),
            "degrees": degrees,
        }
        for name, arr in arrays.items():
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        for mat in (adjacency, laplacian):
            for arr in (mat.data, mat.indices, mat.indptr):
                arr.setflags(write=False)
        object.__setattr__(self, "node_count", n)
        object.__setattr__(self, "total_volume", float(degrees.sum()))
        object.__setattr__(self, "adjacency", adjacency)
        object.__setattr__(self, "laplacian", laplacian)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_label_index", {lab: i for i, lab in enumerate(labels)})
        object.__setattr__(self, "_frozen", True)

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    def __repr__(self):
        return f"Graph(n={self.node_count}, m={self.edge_count}, vol={self.total_volume:g})"

    @property
    def n(self) -> int:
        return self.node_count

    @property
    def edge_count(self) -> int:
        return len(self.weights)

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        """Each undirected edge once, as ``(u, v, w)`` with ``u < v``."""
        return list(zip(self.heads.tolist(), self.tails.tolist(), self.weights.tolist()))

    def neighbors(self, i: int) -> np.ndarray:
        a = self.adjacency
        return a.indices[a.indptr[i] : a.indptr[i + 1]]

    def index_of(self, label) -> int:
        """Dense id for an original node label."""
        try:
            return self._label_index[str(label)]
        except KeyError:
            raise InputError(f"unknown node {label!r}") from None


@dataclass(frozen=True)
class Cut:
    """One side ``members`` of a cut together with its volume statistics."""

    members: frozenset
    volume: float
    cut_weight: float
    conductance: float
    graph_volume: float

    @property
    def complement_volume(self) -> float:
        return self.graph_volume - self.volume

    @property
    def min_volume_conductance(self) -> float:
        return self.cut_weight / min(self.volume, self.complement_volume)

    def __len__(self):
        return len(self.members)


def node_mask(graph: Graph, nodes) -> np.ndarray:
    """Boolean membership vector; raises InputError on unknown ids."""
    idx = np.asarray(list(nodes) if not isinstance(nodes, np.ndarray) else nodes)
    mask = np.zeros(graph.node_count, dtype=bool)
    if idx.size == 0:
        return mask
    if idx.dtype == bool:
        if idx.shape != (graph.node_count,):
            raise InputError("boolean mask has the wrong length")
        return idx.copy()
    if not np.issubdtype(idx.dtype, np.integer):
        raise InputError(f"node ids must be integers, got {idx.dtype}")
    if idx.min() < 0 or idx.max() >= graph.node_count:
        bad = idx[(idx < 0) | (idx >= graph.node_count)][0]
        raise InputError(f"unknown node id {bad}")
    mask[idx] = True
    return mask


def _vector(graph: Graph, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (graph.node_count,):
        raise InputError(f"expected a vector of length {graph.node_count}, got shape {x.shape}")
    return x


def volume(graph: Graph, nodes) -> float:
    """Sum of weighted degrees over ``nodes``."""
    return float(graph.degrees[node_mask(graph, nodes)].sum())


def cut_weight(graph: Graph, mask: np.ndarray) -> float:
    crossing = mask[graph.heads] != mask[graph.tails]
    return float(graph.weights[crossing].sum())


def conductance(graph: Graph, nodes) -> Cut:
    mask = node_mask(graph, nodes)
    if not mask.any() or mask.all():
        raise DegenerateCutError("a cut needs nodes on both sides")
    vol_in = float(graph.degrees[mask].sum())
    vol_out = float(graph.degrees[~mask].sum())
    w = cut_weight(graph, mask)
    return Cut(
        members=frozenset(np.flatnonzero(mask).tolist()),
        volume=vol_in,
        cut_weight=w,
        conductance=graph.total_volume * w / (vol_in * vol_out),
        graph_volume=graph.total_volume,
    )


def complement(graph: Graph, nodes) -> frozenset:
    return frozenset(np.flatnonzero(~node_mask(graph, nodes)).tolist())


def _all_cuts(graph: Graph):
    if graph.node_count > MAX_BRUTE_FORCE_NODES:
        raise InputError(
            f"exhaustive enumeration refused for n={graph.node_count} > {MAX_BRUTE_FORCE_NODES}"
        )
    a = graph.adjacency
    return kernels.enumerate_cuts(a.indptr, a.indices, a.data, graph.degrees)


def _mask_members(mask: int, n: int) -> list[int]:
    return [i for i in range(n) if (mask >> i) & 1]


def min_conductance_brute(graph: Graph) -> Cut:
    """Exact phi(G) by enumerating every cut (exponential; n <= 20)."""
    vols, cuts = _all_cuts(graph)
    n = graph.node_count
    half = 1 << (n - 1)  # node n-1 always on the far side
    vols, cuts = vols[1:half], cuts[1:half]
    phi = graph.total_volume * cuts / (vols * (graph.total_volume - vols))
    best = int(np.argmin(phi)) + 1
    return conductance(graph, _mask_members(best, n))


def min_conductance_containing(graph: Graph, node: int, max_volume: float) -> Cut | None:
    """Exact phi(u, k): best proper set containing ``node`` with volume <= k.

    Returns None when no such set exists.
    """
    vols, cuts = _all_cuts(graph)
    n = graph.node_count
    masks = np.arange(1 << n, dtype=np.int64)
    admitted = ((masks >> node) & 1).astype(bool)
    admitted[-1] = False
    admitted &= vols <= max_volume
    if not admitted.any():
        return None
    idx = np.flatnonzero(admitted)
    v = vols[idx]
    phi = graph.total_volume * cuts[idx] / (v * (graph.total_volume - v))
    return conductance(graph, _mask_members(int(idx[np.argmin(phi)]), n))


def laplacian_quadratic(graph: Graph, x) -> float:
    """x^T L x as a sum over edges of w_ij (x_i - x_j)^2."""
    x = _vector(graph, x)
    diff = x[graph.heads] - x[graph.tails]
    return float(np.dot(graph.weights, diff * diff))


def apply_laplacian(graph: Graph, x) -> np.ndarray:
    return graph.laplacian @ _vector(graph, x)


def d_inner(graph: Graph, x, y) -> float:
    """Degree-weighted inner product x^T D y."""
    x, y = _vector(graph, x), _vector(graph, y)
    return float(np.dot(x * graph.degrees, y))


def d_norm(graph: Graph, x) -> float:
    return float(np.sqrt(d_inner(graph, x, x)))


def dense_laplacian(graph: Graph) -> np.ndarray:
    return graph.laplacian.toarray()


def complete_graph_laplacian(graph: Graph, nodes=None) -> np.ndarray:
    """Laplacian of the degree-weighted complete graph on ``nodes``.

    Edge ``ij`` carries weight ``d_i d_j / vol(nodes)``, so the complete graph
    has the same degrees as G on that vertex set. With ``nodes=None`` this is
    ``L_Kn = D - D 1 1^T D / vol(G)``.
    """
    if nodes is None:
        mask = np.ones(graph.node_count, dtype=bool)
    else:
        mask = node_mask(graph, nodes)
    d = np.where(mask, graph.degrees, 0.0)
    vol = d.sum()
    if vol == 0:
        return np.zeros((graph.node_count, graph.node_count))
    return np.diag(d) - np.outer(d, d) / vol
