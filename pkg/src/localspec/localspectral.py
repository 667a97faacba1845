"""The locally-biased spectral program and its solution by a search on gamma.

    minimize    x^T L x
    subject to  x^T D x = 1,  x^T D 1 = 0,  (x^T D s)^2 >= kappa

For kappa above the seed's correlation with the Fiedler space the optimum is
the normalized resolvent ``(L - gamma D)^+ D s`` for the unique gamma < lambda_2
at which the correlation constraint is tight. That gamma is found by
bisection, since the achieved correlation decreases as gamma grows.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg as la

from .errors import DomainError, HypothesisViolation, InputError, NumericalError, SolverError
from .graph import Graph, complete_graph_laplacian, laplacian_quadratic, node_mask
from .resolvent import DEFAULT_TOL, solve_at_pole, solve_resolvent
from .seeds import as_seed, correlation_with_set, seed_from_node
from .spectral import fiedler_space

KAPPA_TOL = 1e-10
MAX_BISECTION_STEPS = 200
MAX_CERTIFICATE_NODES = 500
_POLE_GAP = 1e-9
_SCAN_POINTS = 64


@dataclass(frozen=True)
class Solution:
    """Optimizer output. ``active`` is False when the correlation constraint is slack."""

    x: np.ndarray
    gamma: float
    kappa_target: float | None
    kappa_achieved: float
    lambda_value: float
    k_gamma: float
    residual: float = 0.0
    iterations: int = 0
    bisection_steps: int = 0
    active: bool = True


@dataclass(frozen=True)
class DualCertificate:
    alpha: float
    beta: float
    min_eigenvalue: float
    objective: float
    active: bool = True

    def is_feasible(self, tol: float = 1e-6) -> bool:
        return self.min_eigenvalue >= -tol


def _normalized(graph: Graph, sv: np.ndarray, y: np.ndarray):
    d = graph.degrees
    norm = math.sqrt(float(y @ (d * y)))
    if not norm > 0.0 or not math.isfinite(norm):
        raise NumericalError("resolvent solution vanished")
    x = y / norm
    corr = float(sv @ (d * x))
    if corr < 0:
        x = -x
        corr = -corr
    x.setflags(write=False)
    return x, corr * corr


def _solve(graph, sv, gamma, tol, kappa_target=None, lambda2=None, preconditioner=None) -> Solution:
    r = solve_resolvent(graph, sv, gamma, tol=tol, lambda2=lambda2, preconditioner=preconditioner)
    x, kappa = _normalized(graph, sv, r.y)
    return Solution(
        x=x,
        gamma=float(gamma),
        kappa_target=kappa_target,
        kappa_achieved=kappa,
        lambda_value=laplacian_quadratic(graph, x),
        k_gamma=1.0 / kappa if kappa > 0 else math.inf,
        residual=r.residual,
        iterations=r.iterations,
    )


def solve_for_gamma(graph: Graph, seed, gamma: float, tol: float = DEFAULT_TOL, preconditioner=None) -> Solution:
    """Normalized resolvent at a fixed gamma in (-vol(G), lambda_2).

    Negative gamma gives personalized PageRank with teleportation
    alpha = 1 / (1 - gamma).
    """
    s = as_seed(graph, seed)
    gamma = float(gamma)
    if not gamma > -graph.total_volume:
        raise DomainError(f"gamma={gamma!r} must exceed -vol(G)={-graph.total_volume!r}")
    return _solve(graph, s.values, gamma, tol, preconditioner=preconditioner)


def _fiedler_direction(graph: Graph, sv: np.ndarray):
    """Unit v_2 closest to the seed inside the lambda_2 eigenspace, and (s^T D v_2)^2."""
    space = fiedler_space(graph)
    coeff = space.basis.T @ (graph.degrees * sv)
    norm = float(np.linalg.norm(coeff))
    if norm > 0.0:
        v2 = space.basis @ (coeff / norm)
    else:
        v2 = space.vector.copy()
    return space.value, v2, norm


def solve_localspectral(
    graph: Graph,
    seed,
    kappa: float,
    tol: float = KAPPA_TOL,
    solver_tol: float = DEFAULT_TOL,
    orthogonal: str = "raise",
) -> Solution:
    """Optimal x for correlation ``kappa`` in [0, 1).

    On return ``kappa <= kappa_achieved <= kappa + tol`` unless the bracket
    collapses first, in which case the feasible end of the bracket is used.

    A seed orthogonal to the lambda_2 eigenspace breaks the resolvent
    characterization; by default that raises :class:`HypothesisViolation`.
    With ``orthogonal="limit"`` the optimum is computed anyway: below the
    correlation reachable at gamma = lambda_2 it is a mix of v_2 and the
    pole-free resolvent at lambda_2 (still certified by the dual point
    alpha = lambda_2), above it the usual search applies.
    """
    if orthogonal not in ("raise", "limit"):
        raise InputError(f"orthogonal must be 'raise' or 'limit', got {orthogonal!r}")
    kappa = float(kappa)
    if not 0.0 <= kappa < 1.0:
        raise DomainError(f"kappa={kappa!r} must lie in [0, 1)")
    s = as_seed(graph, seed)
    sv = s.values
    lam2, v2, corr = _fiedler_direction(graph, sv)

    if corr < 1e-10 and kappa > 0.0:
        if orthogonal == "raise":
            raise HypothesisViolation(
                f"seed is orthogonal to the lambda_2 eigenspace (|s^T D v2| = {corr:.2e}); "
                "the resolvent characterization does not apply"
            )
        limit = _pole_limit(graph, sv, kappa, lam2, v2, solver_tol)
        if limit is not None:
            return limit
    if kappa <= corr * corr:
        x = v2 if sv @ (graph.degrees * v2) >= 0 else -v2
        x.setflags(write=False)
        k2 = corr * corr
        return Solution(
            x=x,
            gamma=lam2,
            kappa_target=kappa,
            kappa_achieved=k2,
            lambda_value=lam2,
            k_gamma=1.0 / k2 if k2 > 0 else math.inf,
            active=False,
        )

    def at(gamma):
        return _solve(graph, sv, gamma, solver_tol, kappa_target=kappa, lambda2=lam2)

    def done(sol):
        return sol.kappa_achieved >= kappa and sol.kappa_achieved - kappa <= tol

    steps = 0
    hi = lam2 - min(_POLE_GAP, 0.5 * lam2)
    if corr < 1e-10:
        hi = lam2 - min(1e-6, 0.5 * lam2)
    upper = at(hi)
    steps += 1
    if upper.kappa_achieved >= kappa:
        return _with_steps(upper, steps)

    lo = -graph.total_volume
    lower = at(lo)
    steps += 1
    while lower.kappa_achieved < kappa:
        if steps >= MAX_BISECTION_STEPS:
            raise SolverError(f"no gamma reaches kappa={kappa!r}; lowest tried {lo!r}", iterations=steps)
        lo *= 2.0
        lower = at(lo)
        steps += 1
    if done(lower):
        return _with_steps(lower, steps)

    monotone = True
    while steps < MAX_BISECTION_STEPS:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            # Bracket exhausted at floating-point resolution.
            return _with_steps(lower, steps)
        sol = at(mid)
        steps += 1
        k = sol.kappa_achieved
        if k > lower.kappa_achieved + 1e-8 or k < upper.kappa_achieved - 1e-8:
            monotone = False
            break
        if k >= kappa:
            lo, lower = mid, sol
            if done(sol):
                return _with_steps(sol, steps)
        else:
            hi, upper = mid, sol
    if monotone:
        raise SolverError(
            f"bisection on gamma did not converge in {MAX_BISECTION_STEPS} steps; bracket [{lo!r}, {hi!r}]",
            iterations=steps,
        )
    return _scan(at, lower, upper, kappa, done, steps)


def _pole_limit(graph, sv, kappa, lam2, v2, tol):
    """x = a y + b v_2 with y = (L - lambda_2 D)^+ D s, when that reaches ``kappa``."""
    r = solve_at_pole(graph, sv, tol=tol)
    d = graph.degrees
    y = r.y
    sy = float(sv @ (d * y))
    yy = float(y @ (d * y))
    reach = sy * sy / yy
    if kappa > reach:
        return None
    a2 = kappa / (sy * sy)
    b = math.sqrt(max(0.0, 1.0 - a2 * yy))
    x = math.sqrt(a2) * y + b * v2
    x = x / math.sqrt(float(x @ (d * x)))
    x.setflags(write=False)
    achieved = float(sv @ (d * x)) ** 2
    return Solution(
        x=x,
        gamma=lam2,
        kappa_target=kappa,
        kappa_achieved=achieved,
        lambda_value=laplacian_quadratic(graph, x),
        k_gamma=1.0 / achieved,
        residual=r.residual,
        iterations=r.iterations,
    )


def _scan(at, lower, upper, kappa, done, steps):
    """Grid-scan fallback for when the correlation is not monotone in gamma."""
    warnings.warn("correlation not monotone in gamma; falling back to a grid scan", RuntimeWarning)
    grid = np.linspace(lower.gamma, upper.gamma, _SCAN_POINTS)
    best = lower
    for g in grid[1:-1]:
        sol = at(g)
        steps += 1
        if sol.kappa_achieved >= kappa:
            best = sol
    nxt = next(g for g in grid if g > best.gamma)
    lo, hi = best.gamma, nxt
    while steps < 2 * MAX_BISECTION_STEPS and hi - lo > 1e-15 * max(1.0, abs(lo)):
        mid = 0.5 * (lo + hi)
        sol = at(mid)
        steps += 1
        if sol.kappa_achieved >= kappa:
            lo, best = mid, sol
            if done(sol):
                break
        else:
            hi = mid
    return _with_steps(best, steps)


def _with_steps(sol: Solution, steps: int) -> Solution:
    return replace(sol, bisection_steps=steps)


def _perp_basis(n: int) -> np.ndarray:
    q, _ = np.linalg.qr(np.column_stack([np.ones(n), np.eye(n)[:, : n - 1]]))
    return q[:, 1:]


def dual_certificate(graph: Graph, seed, solution: Solution) -> DualCertificate:
    """Dual point (alpha, beta) recovered from a primal solution.

    alpha = gamma and beta = (lambda - gamma) / kappa_achieved. Feasibility
    is checked by a dense eigensolve of L - alpha L_Kn - beta (Ds)(Ds)^T on
    the complement of the all-ones vector; the reported objective uses the
    requested kappa so that the duality gap reflects the bisection tolerance.
    For a slack constraint the certificate is (lambda_2, 0).
    """
    n = graph.node_count
    if n > MAX_CERTIFICATE_NODES:
        raise InputError(f"dense certificate refused for n={n} > {MAX_CERTIFICATE_NODES}")
    s = as_seed(graph, seed)
    kappa = solution.kappa_achieved if solution.kappa_target is None else solution.kappa_target
    alpha = float(solution.gamma)
    if solution.active:
        beta = (solution.lambda_value - alpha) / solution.kappa_achieved
    else:
        beta = 0.0
    ds = graph.degrees * s.values
    m = graph.laplacian.toarray() - alpha * complete_graph_laplacian(graph) - beta * np.outer(ds, ds)
    p = _perp_basis(n)
    low = float(la.eigvalsh(p.T @ m @ p, subset_by_index=[0, 0])[0])
    return DualCertificate(alpha, beta, low, alpha + beta * kappa, solution.active)


def improvement_bound(graph: Graph, seed, kappa: float, nodes, solution: Solution | None = None) -> float:
    """Lower bound on phi(T) from the optimum at ``kappa`` and T's seed correlation."""
    if solution is None:
        solution = solve_localspectral(graph, seed, kappa)
    kappa_t = correlation_with_set(graph, seed, nodes)
    lam = solution.lambda_value
    if kappa <= kappa_t:
        return lam
    return kappa_t / kappa * lam


def phi_lower_bound_for_volume(graph: Graph, u: int, k: float) -> float:
    """lambda(G, v_u, 1/k), a lower bound on the best conductance of a set
    containing ``u`` with volume at most ``k``."""
    node_mask(graph, [u])
    k = float(k)
    if not k > 0:
        raise DomainError("k must be positive")
    d_u = float(graph.degrees[u])
    if k < d_u:
        warnings.warn(f"k={k!r} is below d_u={d_u!r}; no set containing u fits", RuntimeWarning)
    s = seed_from_node(graph, u)
    kappa = 1.0 / k
    if kappa > 1.0:
        warnings.warn("correlation 1/k exceeds 1; the program is infeasible", RuntimeWarning)
        return math.inf
    if kappa == 1.0:
        return laplacian_quadratic(graph, s.values)
    return solve_localspectral(graph, s, kappa, orthogonal="limit").lambda_value
