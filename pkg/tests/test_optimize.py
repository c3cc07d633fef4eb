import numpy as np
import pytest

from specmax.graphs import (
    LengthFunction,
    build_graph,
    cycle_graph,
    path_graph,
    uniform_lengths,
)
from specmax.optimize import OptimizerConfig, lambda1_gradient, maximize_lambda1
from specmax.randgen import random_cyclic_graph, random_lengths
from specmax.spectral import lambda1, lambda1_normalized


def central_difference(g, l, rel_h=1e-6):
    grad = np.empty(g.edge_count)
    for k, e in enumerate(g.edges):
        h = rel_h * l.of(*e)
        up = dict(l.lengths)
        down = dict(l.lengths)
        up[e] = l.of(*e) + h
        down[e] = l.of(*e) - h
        grad[k] = (
            lambda1(g, LengthFunction(up)) - lambda1(g, LengthFunction(down))
        ) / (2 * h)
    return grad


class TestGradient:
    def test_matches_finite_differences_on_triangle(self):
        g = cycle_graph(3)
        worst = 0.0
        for seed in range(20):
            rng = np.random.default_rng(seed)
            l = random_lengths(rng, g)
            grad = lambda1_gradient(g, l)
            if grad is None:
                continue
            fd = central_difference(g, l)
            worst = max(worst, np.abs(fd - grad).max() / np.abs(grad).max())
        assert worst <= 1e-5

    def test_uniform_c4_is_degenerate(self):
        g = cycle_graph(4)
        assert lambda1_gradient(g, uniform_lengths(g, 1 / 8)) is None

    def test_single_edge_against_oracle(self):
        g = path_graph(2)
        l = uniform_lengths(g, 0.5)
        grad = lambda1_gradient(g, l)
        fd = central_difference(g, l)
        np.testing.assert_allclose(grad, fd, rtol=1e-6)

    def test_scale_identity(self):
        # lambda1(c l) = lambda1(l)/c^2 forces sum l_e dlambda/dl_e = -2 lambda
        rng = np.random.default_rng(3)
        for _ in range(15):
            g = random_cyclic_graph(rng, int(rng.integers(3, 8)))
            l = random_lengths(rng, g)
            grad = lambda1_gradient(g, l)
            if grad is None:
                continue
            lens = np.array([l.of(*e) for e in g.edges])
            assert lens @ grad == pytest.approx(-2 * lambda1(g, l), rel=1e-6)


class TestMaximize:
    def test_single_edge_converges_to_eight(self):
        rep = maximize_lambda1(path_graph(2))
        assert rep.verdict == "converged"
        assert rep.best_value == pytest.approx(8.0, abs=1e-9)
        assert rep.best.of(1, 2) == pytest.approx(0.5, rel=1e-12)

    def test_triangle_divergence(self):
        rep = maximize_lambda1(cycle_graph(3))
        assert rep.verdict == "divergence_suspected"
        assert rep.best_value > 500.0

    def test_paw_divergence(self):
        g = build_graph(4, [(1, 2), (2, 3), (3, 1), (3, 4)])
        rep = maximize_lambda1(g, OptimizerConfig(budget=500))
        assert rep.verdict == "divergence_suspected"

    def test_budget_zero_keeps_initial(self):
        rep = maximize_lambda1(cycle_graph(3), OptimizerConfig(budget=0, starts=2))
        assert rep.verdict == "budget_exhausted"
        assert len(rep.iterations) == 1

    def test_objective_nondecreasing(self):
        rep = maximize_lambda1(cycle_graph(3), OptimizerConfig(budget=50, starts=3))
        objs = [r.objective for r in rep.iterations]
        assert all(b >= a for a, b in zip(objs, objs[1:]))

    def test_positive_lengths_throughout(self):
        rep = maximize_lambda1(cycle_graph(4), OptimizerConfig(budget=40, starts=2))
        for rec in rep.iterations:
            assert all(v > 0 for v in rec.lengths.lengths.values())

    def test_reported_best_is_normalized(self):
        rep = maximize_lambda1(cycle_graph(3), OptimizerConfig(budget=30, starts=2))
        assert 2 * rep.best.total() == pytest.approx(1.0, rel=1e-12)

    def test_scale_shift_invariance(self):
        # adding a constant to all log-lengths leaves the objective unchanged
        g = cycle_graph(3)
        rng = np.random.default_rng(8)
        l = random_lengths(rng, g)
        base = lambda1_normalized(g, l)
        shifted = lambda1_normalized(g, l.scaled(float(np.exp(1.3))))
        assert shifted == pytest.approx(base, rel=1e-10)

    @pytest.mark.parametrize(
        "edges,n",
        [
            ([(1, 2), (2, 3)], 3),
            ([(1, 2), (2, 3), (3, 4)], 4),
            ([(1, 2), (1, 3), (1, 4)], 4),
            ([(1, 2), (2, 3), (3, 4), (4, 5)], 5),
            ([(1, 2), (1, 3), (1, 4), (4, 5)], 5),
        ],
    )
    def test_small_trees_stay_bounded(self, edges, n):
        rep = maximize_lambda1(build_graph(n, edges))
        assert rep.verdict != "divergence_suspected"

    def test_deterministic_given_seed(self):
        cfg = OptimizerConfig(budget=25, starts=2, seed=314)
        r1 = maximize_lambda1(cycle_graph(3), cfg)
        r2 = maximize_lambda1(cycle_graph(3), cfg)
        assert r1.best_value == r2.best_value
        assert [x.objective for x in r1.iterations] == [x.objective for x in r2.iterations]
