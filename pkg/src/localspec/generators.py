"""Small named graphs and random connected graphs for examples and tests."""

from __future__ import annotations

import itertools

import numpy as np

from .graph import Graph


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def star_graph(leaves: int) -> Graph:
    """Center 0 joined to nodes 1..leaves."""
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def barbell_graph() -> Graph:
    """Triangles {0,1,2} and {3,4,5} joined by the bridge 2-3."""
    return Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])


def random_connected_graph(n: int, p: float, rng, weighted: bool = False) -> Graph:
    """Erdos-Renyi G(n, p) overlaid on a random spanning tree.

    ``rng`` is a numpy Generator. With ``weighted`` the weights are uniform
    on [0.5, 2).
    """
    perm = rng.permutation(n)
    edges = {}
    for k in range(1, n):
        a, b = perm[k], perm[rng.integers(k)]
        edges[(min(a, b), max(a, b))] = True
    for i, j in itertools.combinations(range(n), 2):
        if rng.random() < p:
            edges[(i, j)] = True
    keys = sorted(edges)
    if weighted:
        ws = rng.uniform(0.5, 2.0, size=len(keys))
        return Graph(n, [(int(i), int(j), float(w)) for (i, j), w in zip(keys, ws)])
    return Graph(n, [(int(i), int(j)) for i, j in keys])


def ring_of_cliques(cliques: int, size: int) -> Graph:
    """``cliques`` copies of K_size, consecutive copies joined by one edge."""
    edges = []
    for c in range(cliques):
        base = c * size
        edges += [(base + i, base + j) for i, j in itertools.combinations(range(size), 2)]
        edges.append((base + size - 1, ((c + 1) % cliques) * size))
    return Graph(cliques * size, edges)


def clustered_graph(sizes, p_in: float, p_out: float, rng) -> Graph:
    """Planted-partition graph, made connected by a spanning path through blocks."""
    n = sum(sizes)
    block = np.repeat(np.arange(len(sizes)), sizes)
    edges = set()
    for i, j in itertools.combinations(range(n), 2):
        if rng.random() < (p_in if block[i] == block[j] else p_out):
            edges.add((i, j))
    edges.update((i, i + 1) for i in range(n - 1))
    return Graph(n, sorted(edges))
