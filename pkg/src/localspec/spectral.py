"""Generalized eigenpairs of L w = lambda D w.

The second pair is computed by block inverse iteration on the normalized
operator ``N = D^{-1/2} L D^{-1/2}`` with the trivial eigenvector
``D^{1/2} 1`` projected out after every solve, followed by a Rayleigh-Ritz
step on the block. When lambda_2 is degenerate any vector of its eigenspace
may be returned; :func:`fiedler_space` exposes the whole converged eigenspace
for callers that need to choose within it.
"""

from __future__ import annotations

import threading
import weakref
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .errors import InputError, SolverError
from .graph import Graph

DEFAULT_TOL = 1e-10
DEFAULT_MAXITER = 10_000
MAX_DENSE_NODES = 2000
_SHIFT = 1e-6
_BLOCK = 6

_cache: "weakref.WeakKeyDictionary[Graph, FiedlerSpace]" = weakref.WeakKeyDictionary()
_cache_lock = threading.Lock()


@dataclass(frozen=True)
class GeneralizedSpectrum:
    """All eigenpairs, ascending; ``eigenvectors[:, i]`` is D-orthonormal."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    degrees: np.ndarray

    def __len__(self):
        return len(self.eigenvalues)


@dataclass(frozen=True)
class FiedlerSpace:
    """lambda_2 with a D-orthonormal basis (columns) of its eigenspace."""

    value: float
    basis: np.ndarray
    residual: float
    iterations: int
    tol: float

    @property
    def vector(self) -> np.ndarray:
        return self.basis[:, 0]

    @property
    def multiplicity(self) -> int:
        return self.basis.shape[1]


def _fix_sign(w: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(w)))
    return -w if w[k] < 0 else w


def full_spectrum(graph: Graph) -> GeneralizedSpectrum:
    """Dense generalized eigendecomposition (n <= 2000)."""
    n = graph.node_count
    if n > MAX_DENSE_NODES:
        raise InputError(f"dense spectrum refused for n={n} > {MAX_DENSE_NODES}")
    isq = 1.0 / np.sqrt(graph.degrees)
    normalized = isq[:, None] * graph.laplacian.toarray() * isq[None, :]
    vals, vecs = la.eigh(normalized)
    vals[0] = max(vals[0], 0.0)
    w = isq[:, None] * vecs
    for i in range(n):
        w[:, i] = _fix_sign(w[:, i])
    vals.setflags(write=False)
    w.setflags(write=False)
    return GeneralizedSpectrum(vals, w, graph.degrees)


def _residual(graph: Graph, w: np.ndarray, lam: float) -> float:
    return float(np.linalg.norm(graph.laplacian @ w - lam * graph.degrees * w))


def _block_inverse_iteration(graph: Graph, tol: float, maxiter: int) -> FiedlerSpace:
    n = graph.node_count
    d = graph.degrees
    sqd = np.sqrt(d)
    isq = 1.0 / sqd
    trivial = sqd / np.linalg.norm(sqd)

    normalized = sp.diags(isq) @ graph.laplacian @ sp.diags(isq)
    lu = splu((normalized + _SHIFT * sp.identity(n)).tocsc())

    def deflate(z):
        return z - np.outer(trivial, trivial @ z)

    b = min(_BLOCK, n - 1)
    rng = np.random.default_rng(20100521)
    q, _ = np.linalg.qr(deflate(rng.standard_normal((n, b))))
    best = np.inf
    for it in range(1, maxiter + 1):
        q, _ = np.linalg.qr(deflate(lu.solve(q)))
        h = q.T @ (normalized @ q)
        theta, y = la.eigh((h + h.T) / 2)
        u = q @ y
        w0 = isq * u[:, 0]
        res = _residual(graph, w0, theta[0])
        best = min(best, res)
        if res <= tol:
            break
        q = u
    else:
        raise SolverError(
            f"lambda_2 iteration did not converge in {maxiter} steps (residual {best:.3e})",
            residual=best,
            iterations=maxiter,
        )

    # Other Ritz pairs that share the eigenvalue and have converged too.
    cols = [0]
    gap = max(1e-8, 1e-6 * abs(theta[0]))
    for j in range(1, b):
        if abs(theta[j] - theta[0]) <= gap and _residual(graph, isq * u[:, j], theta[j]) <= 1e3 * tol:
            cols.append(j)
    basis = isq[:, None] * u[:, cols]
    basis -= np.outer(np.ones(n), d @ basis / d.sum())
    basis, _ = np.linalg.qr(sqd[:, None] * basis)
    basis = isq[:, None] * basis
    basis[:, 0] = _fix_sign(basis[:, 0])
    lam = float(theta[0])
    basis.setflags(write=False)
    return FiedlerSpace(lam, basis, _residual(graph, basis[:, 0], lam), it, tol)


def fiedler_space(graph: Graph, tol: float = DEFAULT_TOL, maxiter: int = DEFAULT_MAXITER) -> FiedlerSpace:
    """lambda_2 and its eigenspace, cached per graph for the default settings."""
    if tol <= 0:
        raise InputError("tol must be positive")
    with _cache_lock:
        hit = _cache.get(graph)
    if hit is not None and hit.tol <= tol:
        return hit
    space = _block_inverse_iteration(graph, tol, maxiter)
    with _cache_lock:
        if tol >= DEFAULT_TOL or graph not in _cache:
            _cache[graph] = space
    return space


def lambda2_v2(graph: Graph, tol: float = DEFAULT_TOL, maxiter: int = DEFAULT_MAXITER):
    """(lambda_2, v_2) with v_2^T D v_2 = 1 and v_2^T D 1 = 0.

    The sign puts the largest-magnitude entry positive.
    """
    space = fiedler_space(graph, tol, maxiter)
    return space.value, space.vector.copy()


def rayleigh_quotient(graph: Graph, x) -> float:
    x = np.asarray(x, dtype=np.float64)
    return float(x @ (graph.laplacian @ x)) / float(x @ (graph.degrees * x))
