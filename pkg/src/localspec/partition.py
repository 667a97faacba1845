"""Sweep-cut rounding, the LocalCut pipeline, BFS-ball baselines and profiles."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import shortest_path

from . import kernels
from .errors import DegenerateCutError, EmptySweepError, InputError, LocalSpecError
from .graph import Cut, Graph, _vector, conductance, node_mask
from .localspectral import Solution, solve_for_gamma
from .seeds import SeedVector, as_seed
from .spectral import fiedler_space, lambda2_v2


@dataclass(frozen=True)
class SweepResult:
    """Best prefix of a sweep plus the full trace.

    Trace rows are ``(prefix size, volume, conductance, admitted)``; prefixes
    follow ``order``, which sorts by value descending with ties broken by
    node id.
    """

    best: Cut
    sweep_trace: list
    order: np.ndarray
    constrained: bool = False
    volume_cap: float | None = None
    required_node: int | None = None


@dataclass(frozen=True)
class ProfilePoint:
    gamma: float
    size_factor: float | None
    cut: Cut | None
    lower_bound_lambda: float
    lower_bound_volume: float
    seed_descriptor: str
    status: str = "ok"
    contains_seed: bool | None = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def sweep_order(x: np.ndarray) -> np.ndarray:
    return np.lexsort((np.arange(len(x)), -x)).astype(np.int64)


def _prefixes(graph: Graph, x):
    x = _vector(graph, x)
    if not np.all(np.isfinite(x)):
        raise InputError("sweep vector has non-finite entries")
    if np.ptp(x) == 0.0:
        raise DegenerateCutError("cannot sweep a constant vector")
    order = sweep_order(x)
    a = graph.adjacency
    vols, cuts = kernels.sweep_prefixes(order, a.indptr, a.indices, a.data, graph.degrees)
    total = graph.total_volume
    phi = total * cuts / (vols * (total - vols))
    return order, vols, cuts, phi


def _result(graph, order, vols, cuts, phi, admitted, **flags) -> SweepResult:
    idx = np.flatnonzero(admitted)
    k = int(idx[np.argmin(phi[idx])])
    best = Cut(
        members=frozenset(order[: k + 1].tolist()),
        volume=float(vols[k]),
        cut_weight=float(cuts[k]),
        conductance=float(phi[k]),
        graph_volume=graph.total_volume,
    )
    trace = [
        (i + 1, float(v), float(p), bool(ok)) for i, (v, p, ok) in enumerate(zip(vols, phi, admitted))
    ]
    order.setflags(write=False)
    return SweepResult(best, trace, order, **flags)


def sweep_cut(graph: Graph, x) -> SweepResult:
    """Minimum-conductance prefix {i : x_i >= t} over all n - 1 thresholds."""
    order, vols, cuts, phi = _prefixes(graph, x)
    return _result(graph, order, vols, cuts, phi, np.ones(len(vols), dtype=bool))


def sweep_cut_constrained(graph: Graph, x, volume_cap: float, required_node: int | None = None) -> SweepResult:
    """Best prefix with volume <= ``volume_cap`` (and containing ``required_node``)."""
    if not volume_cap > 0:
        raise InputError("volume cap must be positive")
    if required_node is not None:
        node_mask(graph, [required_node])
    order, vols, cuts, phi = _prefixes(graph, x)
    admitted = vols <= volume_cap
    if required_node is not None:
        where = int(np.flatnonzero(order == required_node)[0])
        admitted &= np.arange(len(vols)) >= where
    if not admitted.any():
        raise EmptySweepError(
            f"no sweep prefix has volume <= {volume_cap:g}"
            + ("" if required_node is None else f" and contains node {required_node}")
        )
    return _result(
        graph, order, vols, cuts, phi, admitted,
        constrained=True, volume_cap=float(volume_cap), required_node=required_node,
    )


def local_sweep(graph: Graph, seed, gamma: float, size_factor: float | None = None):
    """LocalCut returning the whole sweep: ``(SweepResult, Solution)``.

    With a size factor c the sweep admits prefixes of volume at most c * k_gamma;
    single-node seeds additionally require the prefix to contain that node.
    """
    s = as_seed(graph, seed)
    sol = solve_for_gamma(graph, s, gamma)
    if size_factor is None:
        return sweep_cut(graph, sol.x), sol
    if not size_factor > 0:
        raise InputError("size factor must be positive")
    sweep = sweep_cut_constrained(graph, sol.x, size_factor * sol.k_gamma, s.node)
    return sweep, sol


def local_cut(graph: Graph, seed, gamma: float, size_factor: float | None = None) -> tuple[Cut, Solution]:
    sweep, sol = local_sweep(graph, seed, gamma, size_factor)
    return sweep.best, sol


def bfs_ball_baseline(graph: Graph, u: int) -> list[tuple[int, Cut]]:
    """Conductance of hop-radius balls around ``u`` until the ball covers G."""
    node_mask(graph, [u])
    dist = shortest_path(graph.adjacency, unweighted=True, indices=u)
    out = []
    for r in range(1, int(dist.max())):
        out.append((r, conductance(graph, np.flatnonzero(dist <= r))))
    return out


def global_partition(graph: Graph) -> Cut:
    """Best sweep cut of v_2."""
    _, v2 = lambda2_v2(graph)
    return sweep_cut(graph, v2).best


def worker_count(threads: int | None = None) -> int:
    """Worker pool size: ``threads``, else LOCALSPEC_THREADS, else the CPU count."""
    if threads is None:
        raw = os.environ.get("LOCALSPEC_THREADS", "").strip()
        if raw:
            try:
                threads = int(raw)
            except ValueError:
                raise InputError(f"LOCALSPEC_THREADS must be an integer, got {raw!r}") from None
        else:
            threads = os.cpu_count() or 1
    if threads < 1:
        raise InputError("thread count must be at least 1")
    return threads


def _profile_point(graph: Graph, s: SeedVector, gamma: float, size_factor, descriptor: str) -> ProfilePoint:
    try:
        sweep, sol = local_sweep(graph, s, gamma, size_factor)
    except LocalSpecError as exc:
        return ProfilePoint(gamma, size_factor, None, float("nan"), float("nan"), descriptor, f"error:{type(exc).__name__}")
    cut = sweep.best
    contains = None if s.node is None else s.node in cut.members
    return ProfilePoint(gamma, size_factor, cut, sol.lambda_value, sol.k_gamma, descriptor, "ok", contains)


def profile(graph: Graph, seed, gamma_grid, size_factor: float | None = 2.0, threads: int | None = None) -> list[ProfilePoint]:
    """One LocalCut run per gamma, in grid order. Failed runs keep their slot
    with an ``error:<kind>`` status."""
    s = as_seed(graph, seed)
    grid = [float(g) for g in gamma_grid]
    descriptor = s.describe(graph)
    fiedler_space(graph)  # warm the shared cache before fanning out
    workers = min(worker_count(threads), max(1, len(grid)))
    if workers == 1:
        return [_profile_point(graph, s, g, size_factor, descriptor) for g in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda g: _profile_point(graph, s, g, size_factor, descriptor), grid))


def gamma_grid(start: float, stop: float, step: float) -> np.ndarray:
    """start, start + step, ... up to ``stop``; ``stop`` itself is appended
    when the lattice misses it."""
    if not step > 0:
        raise InputError("gamma step must be positive")
    if stop < start:
        raise InputError("gamma stop must not be below gamma start")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    grid = start + step * np.arange(count)
    if stop - grid[-1] > 1e-9 * step:
        grid = np.append(grid, stop)
    return grid


def volume_jumps(points: list[ProfilePoint], factor: float = 5.0) -> list[int]:
    """Indices i where the output volume grows more than ``factor`` from point i - 1."""
    out = []
    for i in range(1, len(points)):
        a, b = points[i - 1], points[i]
        if a.cut is not None and b.cut is not None and b.cut.volume > factor * a.cut.volume:
            out.append(i)
    return out
