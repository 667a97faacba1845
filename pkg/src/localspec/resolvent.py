"""Solve (L - gamma D) y = D s for gamma < lambda_2.

For gamma < 0 the matrix is positive definite and plain conjugate gradients
apply. For 0 <= gamma < lambda_2 it is indefinite (the all-ones direction has
eigenvalue -gamma), but it is positive definite on the subspace
{y : y^T D 1 = 0}, and it maps that subspace onto {r : 1^T r = 0}, which
contains D s. So MINRES is run on Q A Q, Q being the orthogonal projector onto
the subspace, and any solution of the projected system solves the original
one. Both branches return the representative D-orthogonal to 1, which is
(L - gamma D)^+ D s in the pseudoinverse sense used throughout.

Close to the pole at lambda_2 the system is nearly singular and Krylov
iterates stagnate before reaching ``tol`` (the attainable residual is roughly
eps * cond(A) * ||D s||). The stopping test accepts the rounding floor
``c * eps * ||A|| ||y||`` and, if restarts stop making progress, the solve is
redone with the lambda_2 eigenspace W split off analytically:

    y = W (W^T D s) / (lambda_2 - gamma) + y_perp

where y_perp solves the well-conditioned system on the D-orthogonal
complement of {1, W}. The residual of that answer is limited by the residual
of W itself, amplified by 1/(lambda_2 - gamma); that amount is reported as
``floor``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InputError, PoleError, SolverError
from .graph import Graph
from .seeds import SeedVector
from .spectral import GeneralizedSpectrum, fiedler_space

DEFAULT_TOL = 1e-10
_EPS = np.finfo(float).eps
_FLOOR_FACTOR = 64.0


@dataclass(frozen=True)
class ResolventResult:
    y: np.ndarray
    gamma: float
    residual: float
    iterations: int
    method: str
    floor: float = 0.0


def _seed_values(graph: Graph, s) -> np.ndarray:
    v = s.values if isinstance(s, SeedVector) else np.asarray(s, dtype=np.float64)
    if v.shape != (graph.node_count,):
        raise InputError(f"seed must have length {graph.node_count}")
    scale = np.sqrt(v @ (graph.degrees * v) * graph.total_volume)
    if abs(v @ graph.degrees) > 1e-10 * max(scale, 1e-300):
        raise InputError("seed is not D-orthogonal to the all-ones vector")
    return v


def _cg(matvec, b, x, target, maxiter):
    r = b - matvec(x)
    p = r.copy()
    rr = r @ r
    k = 0
    while k < maxiter and np.sqrt(rr) > target(x):
        k += 1
        ap = matvec(p)
        alpha = rr / (p @ ap)
        x = x + alpha * p
        r = r - alpha * ap
        rr_new = r @ r
        p = r + (rr_new / rr) * p
        rr = rr_new
    return x, k


def _minres(matvec, b, x, target, maxiter):
    r1 = b - matvec(x)
    y = r1.copy()
    beta = np.linalg.norm(r1)
    if beta == 0.0:
        return x, 0
    oldb = 0.0
    dbar = 0.0
    epsln = 0.0
    phibar = beta
    cs, sn = -1.0, 0.0
    w = np.zeros_like(b)
    w2 = np.zeros_like(b)
    r2 = r1.copy()
    k = 0
    while k < maxiter:
        k += 1
        v = y / beta
        y = matvec(v)
        if k >= 2:
            y = y - (beta / oldb) * r1
        alfa = v @ y
        y = y - (alfa / beta) * r2
        r1, r2 = r2, y
        oldb, beta = beta, np.linalg.norm(y)
        oldeps = epsln
        delta = cs * dbar + sn * alfa
        gbar = sn * dbar - cs * alfa
        epsln = sn * beta
        dbar = -cs * beta
        gamma = max(np.hypot(gbar, beta), _EPS)
        cs, sn = gbar / gamma, beta / gamma
        phi = cs * phibar
        phibar = sn * phibar
        w1, w2 = w2, w
        w = (v - oldeps * w1 - delta * w2) / gamma
        x = x + phi * w
        if phibar <= target(x) or beta == 0.0:
            break
    return x, k


def solve_resolvent(
    graph: Graph,
    s,
    gamma: float,
    tol: float = DEFAULT_TOL,
    maxiter: int | None = None,
    preconditioner: str | None = None,
    lambda2: float | None = None,
) -> ResolventResult:
    """Krylov solve of (L - gamma D) y = D s, D-projected against 1.

    ``preconditioner="jacobi"`` rescales the system symmetrically by the
    diagonal, which is proportional to D. ``lambda2`` skips the eigensolve
    used to validate ``gamma``.
    """
    gamma = float(gamma)
    if tol <= 0:
        raise InputError("tol must be positive")
    if lambda2 is None:
        lambda2 = fiedler_space(graph).value
    if not gamma < lambda2:
        raise DomainError(f"gamma={gamma!r} must be below lambda_2={lambda2!r}")
    if preconditioner not in (None, "jacobi"):
        raise InputError(f"unknown preconditioner {preconditioner!r}")
    sv = _seed_values(graph, s)
    n = graph.node_count
    d = graph.degrees
    if maxiter is None:
        maxiter = 20 * n + 1000

    b = d * sv
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        return ResolventResult(np.zeros(n), gamma, 0.0, 0, "trivial")

    lap = graph.laplacian
    if preconditioner == "jacobi":
        scale = 1.0 / np.sqrt(d)
    else:
        scale = np.ones(n)
    projected = gamma >= 0.0
    direction = scale * d
    direction /= np.linalg.norm(direction)

    def operator(z):
        y = scale * z
        return scale * (lap @ y - gamma * (d * y))

    if projected:

        def matvec(z):
            z = z - direction * (direction @ z)
            az = operator(z)
            return az - direction * (direction @ az)

        rhs = scale * b
        rhs = rhs - direction * (direction @ rhs)
        method = "minres"
        krylov = _minres
    else:
        matvec = operator
        rhs = scale * b
        method = "cg"
        krylov = _cg

    norm_a = float(np.max(d) * (1.0 + abs(1.0 - gamma)))
    smin = float(np.min(scale))

    def floor_of(y):
        return _FLOOR_FACTOR * _EPS * (norm_a * np.linalg.norm(y) + bnorm)

    def true_residual(y):
        return float(np.linalg.norm(lap @ y - gamma * (d * y) - b))

    def target(z):
        # Krylov residuals are measured after scaling; ||S r|| <= t*min(S) implies ||r|| <= t.
        return 0.25 * smin * max(tol * bnorm, floor_of(scale * z))

    z = np.zeros(n)
    total = 0
    previous = np.inf
    while True:
        z, k = krylov(matvec, rhs, z, target, maxiter - total)
        total += k
        y = scale * z
        if projected:
            y = y - (y @ d) / graph.total_volume
        res = true_residual(y)
        if res <= max(tol * bnorm, floor_of(y)):
            floor = floor_of(y)
            break
        if total >= maxiter or k == 0 or res > 0.5 * previous:
            y, res, floor, extra = _deflated_solve(graph, sv, gamma, tol, maxiter, true_residual, floor_of)
            total += extra
            method += "+deflated"
            if res > max(tol * bnorm, floor):
                raise SolverError(
                    f"{method} stopped at relative residual {res / bnorm:.3e} after {total} iterations",
                    residual=res / bnorm,
                    iterations=total,
                )
            break
        previous = res
    y = y - (y @ d) / graph.total_volume
    y.setflags(write=False)
    return ResolventResult(y, gamma, res / bnorm, total, method, floor / bnorm)


def _deflated_solve(graph, sv, gamma, tol, maxiter, true_residual, floor_of, space=None):
    space = fiedler_space(graph) if space is None else space
    d = graph.degrees
    w = np.asarray(space.basis)
    b = d * sv
    bnorm = np.linalg.norm(b)
    coeff = w.T @ b
    at_pole = gamma == space.value
    pole = np.zeros_like(b) if at_pole else w @ coeff / (space.value - gamma)

    basis, _ = np.linalg.qr(np.column_stack([d, d[:, None] * w]))
    lap = graph.laplacian

    def project(z):
        return z - basis @ (basis.T @ z)

    def matvec(z):
        z = project(z)
        return project(lap @ z - gamma * (d * z))

    rhs = project(b - d * (w @ coeff))
    if np.linalg.norm(rhs) > 0.0:

        def target(z):
            return 0.25 * max(tol * bnorm, floor_of(pole + z))

        z, k = _minres(matvec, rhs, np.zeros_like(b), target, maxiter)
        z = project(z)
    else:
        z, k = np.zeros_like(b), 0
    y = pole + z
    if at_pole:
        floor = floor_of(y) + np.linalg.norm(d * (w @ coeff))
    else:
        eig_res = np.linalg.norm(lap @ (w @ coeff) - space.value * (d * (w @ coeff)))
        floor = floor_of(y) + eig_res / (space.value - gamma)
    return y, true_residual(y), floor, k


def solve_at_pole(graph: Graph, s, tol: float = DEFAULT_TOL, maxiter: int | None = None) -> ResolventResult:
    """(L - lambda_2 D)^+ D s for a seed with no component along the lambda_2 eigenspace.

    The pseudoinverse acts on the complement of that eigenspace, so the result
    is finite. A seed component above 1e-8 raises :class:`PoleError`.
    """
    sv = _seed_values(graph, s)
    space = fiedler_space(graph)
    d = graph.degrees
    b = d * sv
    bnorm = np.linalg.norm(b)
    if np.linalg.norm(space.basis.T @ b) > 1e-8 * max(bnorm, 1e-300):
        raise PoleError("seed has a component along the lambda_2 eigenspace")
    if maxiter is None:
        maxiter = 20 * graph.node_count + 1000
    gamma = space.value
    lap = graph.laplacian
    norm_a = float(np.max(d) * (1.0 + abs(1.0 - gamma)))

    def floor_of(y):
        return _FLOOR_FACTOR * _EPS * (norm_a * np.linalg.norm(y) + bnorm)

    def true_residual(y):
        return float(np.linalg.norm(lap @ y - gamma * (d * y) - b))

    y, res, floor, k = _deflated_solve(graph, sv, gamma, tol, maxiter, true_residual, floor_of, space)
    if res > max(tol * bnorm, floor):
        raise SolverError(
            f"pole solve stopped at relative residual {res / bnorm:.3e} after {k} iterations",
            residual=res / bnorm,
            iterations=k,
        )
    y = y - (y @ d) / graph.total_volume
    y.setflags(write=False)
    return ResolventResult(y, gamma, res / bnorm, k, "minres+deflated", floor / bnorm)


def eigen_expansion(spectrum: GeneralizedSpectrum, s, gamma: float, terms: int | None = None) -> np.ndarray:
    """sum_{i>=2} (w_i^T D s) / (lambda_i - gamma) * w_i over the first ``terms`` pairs."""
    gamma = float(gamma)
    lam = spectrum.eigenvalues
    w = spectrum.eigenvectors
    sv = s.values if isinstance(s, SeedVector) else np.asarray(s, dtype=np.float64)
    rest = lam[1:]
    if np.any(np.abs(rest - gamma) <= 1e-12):
        raise PoleError(f"gamma={gamma!r} coincides with a generalized eigenvalue")
    if gamma > lam[1]:
        raise DomainError(f"gamma={gamma!r} must be below lambda_2={lam[1]!r}")
    stop = len(lam) if terms is None else 1 + int(terms)
    coeff = (w[:, 1:stop].T @ (spectrum.degrees * sv)) / (lam[1:stop] - gamma)
    return w[:, 1:stop] @ coeff
