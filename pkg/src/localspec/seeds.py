"""Seed vectors: unit D-norm vectors D-orthogonal to the all-ones vector.

A node set T is encoded by

    s_T = sqrt(vol(T) vol(T_bar) / vol(G)) * (1_T / vol(T) - 1_T_bar / vol(T_bar))

which is positive on T. Squared D-inner products between seeds measure how
well two cuts are correlated.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSeedError, InputError
from .graph import Graph, d_inner, node_mask


@dataclass(frozen=True)
class SeedVector:
    """Seed values plus where they came from.

    ``kind`` is ``"single_node"``, ``"node_set"`` or ``"free_vector"``;
    ``nodes`` lists the seed nodes for the first two kinds.
    """

    values: np.ndarray
    kind: str = "free_vector"
    nodes: tuple = field(default=())

    def __post_init__(self):
        self.values.setflags(write=False)

    @property
    def node(self) -> int | None:
        return self.nodes[0] if self.kind == "single_node" else None

    def describe(self, graph: Graph | None = None) -> str:
        names = [graph.labels[i] for i in self.nodes] if graph is not None else list(map(str, self.nodes))
        if self.kind == "single_node":
            return f"node:{names[0]}"
        if self.kind == "node_set":
            return "set:" + ",".join(names)
        return "vector"


def _set_vector(graph: Graph, mask: np.ndarray) -> np.ndarray:
    if not mask.any() or mask.all():
        raise DegenerateSeedError("seed set must be a nonempty proper subset")
    vol_in = graph.degrees[mask].sum()
    vol_out = graph.degrees[~mask].sum()
    scale = np.sqrt(vol_in * vol_out / graph.total_volume)
    return np.where(mask, scale / vol_in, -scale / vol_out)


def seed_from_set(graph: Graph, nodes) -> SeedVector:
    mask = node_mask(graph, nodes)
    members = tuple(np.flatnonzero(mask).tolist())
    return SeedVector(_set_vector(graph, mask), "node_set", members)


def seed_from_node(graph: Graph, u: int) -> SeedVector:
    mask = node_mask(graph, [u])
    return SeedVector(_set_vector(graph, mask), "single_node", (int(u),))


def seed_from_vector(graph: Graph, z) -> SeedVector:
    """Project ``z`` D-orthogonally off the all-ones vector and normalize."""
    z = np.asarray(z, dtype=np.float64)
    if z.shape != (graph.node_count,):
        raise InputError(f"seed vector must have length {graph.node_count}")
    if not np.all(np.isfinite(z)):
        raise InputError("seed vector has non-finite entries")
    r = z - (z @ graph.degrees) / graph.total_volume
    norm = np.sqrt(d_inner(graph, r, r))
    if norm < 1e-12 * max(1.0, np.sqrt(d_inner(graph, z, z))):
        raise DegenerateSeedError("seed vector is parallel to the all-ones vector")
    return SeedVector(r / norm, "free_vector")


def as_seed(graph: Graph, seed) -> SeedVector:
    """Accept a SeedVector, a node id, or a raw vector."""
    if isinstance(seed, SeedVector):
        if seed.values.shape != (graph.node_count,):
            raise InputError("seed does not match the graph size")
        return seed
    if isinstance(seed, (int, np.integer)):
        return seed_from_node(graph, int(seed))
    return seed_from_vector(graph, seed)


def correlation_with_set(graph: Graph, seed, nodes) -> float:
    """(s^T D s_T)^2 for the cut vector of ``nodes``."""
    s = as_seed(graph, seed).values
    t = _set_vector(graph, node_mask(graph, nodes))
    return d_inner(graph, s, t) ** 2


def set_correlation(graph: Graph, first, second) -> float:
    """Correlation K(T, U) between two cuts."""
    return correlation_with_set(graph, seed_from_set(graph, first), second)


def parse_seed_spec(graph: Graph, spec: str) -> SeedVector:
    """Parse ``node:<id>``, ``set:<id,id,...>`` or ``vec:<path>``.

    Ids are node labels as they appeared in the graph file.
    """
    kind, sep, arg = spec.partition(":")
    if not sep or not arg:
        raise InputError(f"bad seed spec {spec!r}; expected node:ID, set:ID,ID or vec:PATH")
    if kind == "node":
        return seed_from_node(graph, graph.index_of(arg.strip()))
    if kind == "set":
        ids = [graph.index_of(x.strip()) for x in arg.split(",") if x.strip()]
        return seed_from_set(graph, ids)
    if kind == "vec":
        try:
            with open(arg) as fh:
                vals = [float(line) for line in fh if line.strip() and not line.lstrip().startswith("#")]
        except OSError as exc:
            raise InputError(f"cannot read seed vector: {exc}") from None
        except ValueError as exc:
            raise InputError(f"bad seed vector file {arg}: {exc}") from None
        return seed_from_vector(graph, vals)
    raise InputError(f"unknown seed kind {kind!r}")
