import math

import numpy as np
import pytest

from localspec.errors import DegenerateCutError, EmptySweepError, InputError
from localspec.generators import barbell_graph, clustered_graph, cycle_graph, ring_of_cliques, star_graph
from localspec.graph import conductance, min_conductance_brute, min_conductance_containing
from localspec.localspectral import solve_localspectral
from localspec.partition import (
    bfs_ball_baseline,
    gamma_grid,
    global_partition,
    local_cut,
    local_sweep,
    profile,
    sweep_cut,
    sweep_cut_constrained,
    volume_jumps,
    worker_count,
)
from localspec.seeds import seed_from_node, seed_from_set, seed_from_vector
from localspec.spectral import lambda2_v2, rayleigh_quotient

from conftest import random_graphs


def prefix_oracle(g, x):
    """All prefix conductances by direct recomputation."""
    order = sorted(range(g.n), key=lambda i: (-x[i], i))
    return order, [conductance(g, order[: k + 1]).conductance for k in range(g.n - 1)]


class TestSweep:
    def test_barbell_v2(self):
        g = barbell_graph()
        _, v2 = lambda2_v2(g)
        best = sweep_cut(g, v2).best
        assert best.conductance == pytest.approx(2 / 7)
        assert best.conductance == pytest.approx(min_conductance_brute(g).conductance)

    def test_c4_hand(self):
        r = sweep_cut(cycle_graph(4), [2, 1, -1, -2])
        assert [t[2] for t in r.sweep_trace] == pytest.approx([4 / 3, 1, 4 / 3])
        assert r.best.members == {0, 1} and r.best.conductance == 1

    def test_trace_and_oracle(self):
        rng = np.random.default_rng(0)
        for g in random_graphs(60, 15, 3, 30):
            x = rng.standard_normal(g.n)
            r = sweep_cut(g, x)
            order, phis = prefix_oracle(g, x)
            assert len(r.sweep_trace) == g.n - 1
            assert list(r.order) == order
            assert [t[2] for t in r.sweep_trace] == pytest.approx(phis, rel=1e-12)
            assert r.best.conductance == min(t[2] for t in r.sweep_trace)

    def test_ties_by_id(self):
        r = sweep_cut(cycle_graph(6), [1, 0, 1, 0, 1, 0])
        assert list(r.order) == [0, 2, 4, 1, 3, 5]

    def test_cheeger_inequality(self):
        rng = np.random.default_rng(1)
        for g in random_graphs(61, 100, 3, 40):
            x = rng.standard_normal(g.n)
            x -= (x @ g.degrees) / g.total_volume
            assert sweep_cut(g, x).best.conductance ** 2 <= 8 * rayleigh_quotient(g, x) + 1e-8

    def test_constant(self):
        with pytest.raises(DegenerateCutError):
            sweep_cut(cycle_graph(4), np.ones(4))
        with pytest.raises(InputError):
            sweep_cut(cycle_graph(4), [1, 2, np.nan, 0])


class TestConstrainedSweep:
    def test_vacuous_cap(self):
        rng = np.random.default_rng(2)
        for g in random_graphs(62, 10, 4, 20):
            x = rng.standard_normal(g.n)
            u = int(rng.integers(g.n))
            order, phis = prefix_oracle(g, x)
            where = order.index(u)
            if where == g.n - 1:
                with pytest.raises(EmptySweepError):
                    sweep_cut_constrained(g, x, g.total_volume, u)
                continue
            r = sweep_cut_constrained(g, x, g.total_volume, u)
            assert r.best.conductance == pytest.approx(min(phis[where:]))
            free = sweep_cut(g, x).best
            if u in free.members:
                assert r.best == free

    def test_cap_below_first(self):
        g = barbell_graph()
        x = np.array([5.0, 1, 1, 0, 0, 0])
        with pytest.raises(EmptySweepError):
            sweep_cut_constrained(g, x, 1.5, 0)

    def test_barbell_triangle(self):
        g = barbell_graph()
        _, v2 = lambda2_v2(g)
        if v2[0] < 0:
            v2 = -v2
        r = sweep_cut_constrained(g, v2, 7, 0)
        assert r.best.members == {0, 1, 2} and r.best.conductance == pytest.approx(2 / 7)
        assert r.constrained and r.volume_cap == 7 and r.required_node == 0
        assert all(t[1] <= 7 for t in r.sweep_trace if t[3])

    def test_bad_cap(self):
        with pytest.raises(InputError):
            sweep_cut_constrained(barbell_graph(), np.arange(6.0), 0)


class TestLocalCut:
    def test_barbell_size_factor_rule(self):
        # At gamma=-0.5 the cap 2*k_gamma is about 2.56, so only {seed} is admissible.
        g = barbell_graph()
        sweep, sol = local_sweep(g, seed_from_node(g, 0), -0.5, 2)
        assert sweep.volume_cap == pytest.approx(2 * sol.k_gamma)
        assert sweep.volume_cap < 7
        admissible = [t for t in sweep.sweep_trace if t[3]]
        assert sweep.best.conductance == min(t[2] for t in admissible)
        assert 0 in sweep.best.members

    def test_barbell_triangle_without_cap(self):
        g = barbell_graph()
        cut, _ = local_cut(g, seed_from_node(g, 0), -0.5)
        assert cut.members == {0, 1, 2} and cut.conductance == pytest.approx(2 / 7)
        _, sol = local_cut(g, seed_from_node(g, 0), -0.5)
        cut, _ = local_cut(g, seed_from_node(g, 0), -0.5, (7 + 1e-9) / sol.k_gamma)
        assert cut.members == {0, 1, 2}

    def test_near_lambda2_matches_global(self):
        g = clustered_graph([12, 18], 0.6, 0.05, np.random.default_rng(5))
        lam, v2 = lambda2_v2(g)
        glob = global_partition(g)
        for u in (0, 7, 20):
            cut, _ = local_cut(g, seed_from_node(g, u), lam * (1 - 1e-6))
            assert cut.members in (glob.members, frozenset(range(g.n)) - glob.members) or math.isclose(
                cut.conductance, glob.conductance, rel_tol=1e-9
            )

    def test_sqrt_conductance_guarantee(self):
        for g in random_graphs(63, 8, 4, 10):
            for u in range(g.n):
                for k in (g.degrees[u] + 1, g.total_volume / 2):
                    best = min_conductance_containing(g, u, k)
                    if best is None or 1 / k >= 1:
                        continue
                    sol = solve_localspectral(g, seed_from_node(g, u), 1 / k, orthogonal="limit")
                    phi = sweep_cut(g, sol.x).best.conductance
                    assert phi <= math.sqrt(8 * best.conductance) + 1e-6

    def test_set_seed_has_no_containment(self):
        g = barbell_graph()
        sweep, _ = local_sweep(g, seed_from_set(g, [0, 1]), -0.2, 3)
        assert sweep.required_node is None

    def test_bad_size_factor(self):
        g = barbell_graph()
        with pytest.raises(InputError):
            local_cut(g, 0, -0.5, 0)


class TestBallsAndGlobal:
    def test_c4(self):
        balls = bfs_ball_baseline(cycle_graph(4), 0)
        assert len(balls) == 1
        r, c = balls[0]
        assert r == 1 and c.members == {0, 1, 3} and c.conductance == pytest.approx(4 / 3)

    def test_star_center(self):
        assert bfs_ball_baseline(star_graph(4), 0) == []

    def test_barbell(self):
        balls = bfs_ball_baseline(barbell_graph(), 0)
        assert balls[0][1].members == {0, 1, 2}
        assert balls[0][1] == conductance(barbell_graph(), [0, 1, 2])
        assert [r for r, _ in balls] == [1, 2]

    def test_global(self):
        assert global_partition(barbell_graph()).conductance == pytest.approx(2 / 7)
        assert global_partition(cycle_graph(4)).conductance == pytest.approx(1)

    def test_global_balanced_on_two_clusters(self):
        g = clustered_graph([40, 40], 0.3, 0.01, np.random.default_rng(3))
        c = global_partition(g)
        assert min(c.volume, c.complement_volume) >= 0.25 * g.total_volume


class TestProfile:
    def test_cardinality_order_and_errors(self):
        g = ring_of_cliques(5, 5)
        lam, _ = lambda2_v2(g)
        grid = list(np.linspace(-3, lam * 0.99, 40)) + [lam + 0.1]
        pts = profile(g, seed_from_node(g, 0), grid, 2.0, threads=4)
        assert len(pts) == len(grid)
        assert [p.gamma for p in pts] == grid
        assert pts[-1].status == "error:DomainError" and pts[-1].cut is None

    def test_thousand_points(self):
        g = ring_of_cliques(3, 4)
        lam, _ = lambda2_v2(g)
        pts = profile(g, seed_from_node(g, 0), np.linspace(-2, lam * 0.9, 1000), 2.0)
        assert len(pts) == 1000

    def test_lower_bound_consistency(self):
        g = clustered_graph([15, 15, 15], 0.4, 0.02, np.random.default_rng(4))
        lam, _ = lambda2_v2(g)
        pts = profile(g, seed_from_node(g, 3), np.linspace(-2, lam * 0.999, 60), 2.0)
        for p in pts:
            if p.ok and p.contains_seed and p.cut.volume <= p.lower_bound_volume:
                assert p.lower_bound_lambda <= p.cut.conductance + 1e-8

    def test_deterministic_across_threads(self):
        g = ring_of_cliques(4, 5)
        grid = np.linspace(-2, 0.01, 25)
        a = profile(g, 0, grid, 2.0, threads=1)
        b = profile(g, 0, grid, 2.0, threads=6)
        assert [p.status for p in a] == [p.status for p in b]
        assert [p.cut for p in a] == [p.cut for p in b]
        assert np.array_equal([p.lower_bound_lambda for p in a], [p.lower_bound_lambda for p in b], equal_nan=True)

    def test_volume_jumps(self):
        g = ring_of_cliques(6, 6)
        lam, _ = lambda2_v2(g)
        pts = profile(g, seed_from_node(g, 0), np.linspace(-1, lam * 0.9999, 200), 2.0)
        sizes = [p.cut.volume for p in pts if p.ok]
        assert volume_jumps(pts, 1.5) and max(sizes) > 1.5 * min(sizes)

    def test_grid(self):
        g = gamma_grid(-1.0, 0.0028, 0.001)
        assert len(g) == 1004 and g[0] == -1.0 and g[-1] == 0.0028
        assert len(gamma_grid(0, 1, 0.25)) == 5
        with pytest.raises(InputError):
            gamma_grid(0, 1, 0)
        with pytest.raises(InputError):
            gamma_grid(1, 0, 0.1)

    def test_worker_count(self, monkeypatch):
        monkeypatch.setenv("LOCALSPEC_THREADS", "3")
        assert worker_count() == 3
        assert worker_count(5) == 5
        monkeypatch.setenv("LOCALSPEC_THREADS", "many")
        with pytest.raises(InputError):
            worker_count()
        monkeypatch.setenv("LOCALSPEC_THREADS", "0")
        with pytest.raises(InputError):
            worker_count()

    def test_vector_seed_profile(self):
        g = ring_of_cliques(4, 4)
        s = seed_from_vector(g, g.degrees + np.arange(g.n))
        pts = profile(g, s, [-1.0, -0.5], 3.0)
        assert all(p.seed_descriptor == "vector" and p.contains_seed is None for p in pts)
