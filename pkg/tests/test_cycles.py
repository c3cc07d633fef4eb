import math

import numpy as np
import pytest

from specmax.cycles import (
    coefficient_matrices,
    cycle_lt,
    default_t_grid,
    explicit_pm_blocks,
    fit_loglog_slope,
    involution,
    involution_matrix,
    proof_vectors,
    sweep_asymptotics,
    symmetry_split,
)
from specmax.graphs import GraphError, LengthFunction, cycle_graph, fujiwara_weights
from specmax.spectral import assemble_laplacian, lambda1_normalized, symmetric_eigen


class TestCycleLt:
    def test_n4_values(self):
        l = cycle_lt(4, 0.1)
        assert l.of(1, 2) == 0.1
        assert l.of(2, 3) == 0.1
        assert l.of(3, 4) == 1.0
        assert l.of(1, 4) == 0.1
        w = fujiwara_weights(cycle_graph(4), l)
        np.testing.assert_allclose(w.m0, [0.2, 0.2, 1.1, 1.1], rtol=1e-15)

    def test_total_m0(self):
        for n in (3, 5, 8):
            t = 0.037
            w = fujiwara_weights(cycle_graph(n), cycle_lt(n, t))
            assert w.total_m0 == pytest.approx(2 * (1 + (n - 1) * t), rel=1e-14)

    def test_t_zero_rejected(self):
        with pytest.raises(GraphError):
            cycle_lt(4, 0.0)

    def test_induced_m0_pattern(self):
        n, t = 7, 0.01
        w = fujiwara_weights(cycle_graph(n), cycle_lt(n, t))
        for i in range(1, n - 1):
            assert w.m0_of(i) == pytest.approx(2 * t, rel=1e-15)
        assert w.m0_of(n - 1) == pytest.approx(1 + t, rel=1e-15)
        assert w.m0_of(n) == pytest.approx(1 + t, rel=1e-15)


class TestInvolution:
    def test_n6_mapping(self):
        assert involution(6) == (4, 3, 2, 1, 6, 5)

    @pytest.mark.parametrize("n", range(3, 13))
    def test_involutive(self, n):
        perm = involution(n)
        for i in range(1, n + 1):
            assert perm[perm[i - 1] - 1] == i

    def test_preserves_lengths_n5(self):
        n, t = 5, 0.01
        perm = involution(n)
        l = cycle_lt(n, t)
        for u, v in cycle_graph(n).edges:
            img = tuple(sorted((perm[u - 1], perm[v - 1])))
            assert l.of(*img) == l.of(u, v)


class TestSymmetrySplit:
    @pytest.mark.parametrize("n", [4, 6, 7, 9, 12])
    def test_union_of_spectra(self, n):
        for t in (0.1, 1e-3):
            g = cycle_graph(n)
            l = cycle_lt(n, t)
            split = symmetry_split(g, l, involution(n))
            mat = assemble_laplacian(g, l)
            full = np.sort(symmetric_eigen(mat).eigenvalues)
            union = np.sort(
                np.concatenate(
                    [
                        symmetric_eigen(split.plus_block).eigenvalues,
                        symmetric_eigen(split.minus_block).eigenvalues,
                    ]
                )
            )
            np.testing.assert_allclose(full, union, atol=1e-9 * mat.norm)

    def test_block_dimensions(self):
        even = symmetry_split(cycle_graph(6), cycle_lt(6, 0.1), involution(6))
        assert even.plus_block.order == 3 and even.minus_block.order == 3
        odd = symmetry_split(cycle_graph(5), cycle_lt(5, 0.1), involution(5))
        assert odd.plus_block.order == 3 and odd.minus_block.order == 2

    def test_commutes_with_laplacian(self):
        for n, t in ((4, 0.1), (7, 1e-3), (10, 1e-2)):
            g = cycle_graph(n)
            l = cycle_lt(n, t)
            mat = assemble_laplacian(g, l).entries
            p = involution_matrix(g, l, involution(n))
            comm = p @ mat - mat @ p
            assert np.abs(comm).max() <= 1e-12 * np.linalg.norm(mat)

    def test_rejects_non_automorphism(self):
        g = cycle_graph(5)
        l = cycle_lt(5, 0.1)
        swap_only = (2, 1, 3, 4, 5)  # involutive but not adjacency-preserving... (1,2) maps fine; (2,3)->(1,3) is not an edge
        with pytest.raises(GraphError, match="automorphism"):
            symmetry_split(g, l, swap_only)

    def test_rejects_length_violation(self):
        n = 6
        g = cycle_graph(n)
        # rotation-invariant involution of the plain hexagon that does NOT
        # preserve the one long edge of the family
        perm = (2, 1, 6, 5, 4, 3)
        with pytest.raises(GraphError, match="length"):
            symmetry_split(g, cycle_lt(n, 0.1), perm)

    def test_rejects_non_involution(self):
        g = cycle_graph(4)
        l = LengthFunction({e: 1.0 for e in g.edges})
        rotation = (2, 3, 4, 1)
        with pytest.raises(GraphError, match="involution"):
            symmetry_split(g, l, rotation)


class TestExplicitBlocks:
    @pytest.mark.parametrize("n", [4, 6, 10])
    def test_matches_generic_split(self, n):
        t = 0.01
        split = symmetry_split(cycle_graph(n), cycle_lt(n, t), involution(n))
        lp, lm = explicit_pm_blocks(n, t)
        np.testing.assert_allclose(
            split.plus_block.entries, lp.entries, rtol=1e-12, atol=1e-12 * lp.norm
        )
        np.testing.assert_allclose(
            split.minus_block.entries, lm.entries, rtol=1e-12, atol=1e-12 * lm.norm
        )
        for generic, hard in ((split.plus_block, lp), (split.minus_block, lm)):
            np.testing.assert_allclose(
                symmetric_eigen(generic).eigenvalues,
                symmetric_eigen(hard).eigenvalues,
                atol=1e-10 * hard.norm,
            )

    def test_last_diagonal_entries(self):
        t = 0.25
        lp, lm = explicit_pm_blocks(8, t)
        assert lp.entries[-1, -1] == pytest.approx(1 / t - 1 / (1 + t), rel=1e-15)
        assert lm.entries[-1, -1] == pytest.approx(1 / t + 1 / (1 + t), rel=1e-15)

    def test_n6_modified_entry(self):
        lp, _ = explicit_pm_blocks(6, 0.1)
        assert lp.entries[1, 1] == pytest.approx(50.0, rel=1e-13)

    def test_odd_n_rejected(self):
        with pytest.raises(GraphError):
            explicit_pm_blocks(5, 0.1)


class TestProofVectors:
    def test_n6_first_vector(self):
        t = 0.02
        v1, _, _ = proof_vectors(6, t)
        s = math.sqrt(2 * t)
        np.testing.assert_allclose(v1, [3 * s / 5, s / 5, -1.0], rtol=1e-15)

    @pytest.mark.parametrize("n", [4, 6, 8, 12])
    def test_w_perpendicular_v0(self, n):
        for t in (0.1, 1e-3):
            _, v0, w = proof_vectors(n, t)
            assert abs(w @ v0) <= 1e-13 * np.linalg.norm(w) * np.linalg.norm(v0)

    @pytest.mark.parametrize("n", [4, 6, 8, 12])
    def test_v0_spans_plus_kernel(self, n):
        for t in (0.1, 1e-3):
            lp, _ = explicit_pm_blocks(n, t)
            _, v0, _ = proof_vectors(n, t)
            assert np.linalg.norm(lp.entries @ v0) <= 1e-10 * lp.norm

    @pytest.mark.parametrize("n", [4, 6])
    def test_v1_approximates_lowest_minus_eigenvector(self, n):
        ratios = []
        for t in (1e-2, 1e-3, 1e-4):
            _, lm = explicit_pm_blocks(n, t)
            v1, _, _ = proof_vectors(n, t)
            res = symmetric_eigen(lm)
            u = res.eigenvectors[:, 0]
            v1n = v1 / np.linalg.norm(v1)
            if u @ v1n < 0:
                u = -u
            ratios.append(np.linalg.norm(u - v1n) / t**1.5)
        # remainder is O(t^{3/2}): the rescaled error stays bounded
        assert max(ratios) <= 0.5
        assert abs(ratios[-1] / ratios[-2] - 1.0) <= 0.2


class TestCoefficientMatrices:
    def test_n6_first_matrix(self):
        a, _ = coefficient_matrices(6)
        np.testing.assert_array_equal(a.entries, [[1.0, -0.5], [-0.5, 1.5]])

    def test_n4_second_matrix(self):
        _, b = coefficient_matrices(4)
        np.testing.assert_array_equal(b.entries, [[2.0, 1.0], [1.0, 0.5]])
        w = symmetric_eigen(b).eigenvalues
        np.testing.assert_allclose(w, [0.0, 2.5], atol=1e-14)

    @pytest.mark.parametrize("n", range(4, 26, 2))
    def test_definiteness_and_kernel(self, n):
        a, b = coefficient_matrices(n)
        assert symmetric_eigen(a).eigenvalues[0] > 1e-12
        wb = symmetric_eigen(b).eigenvalues
        assert abs(wb[0]) <= 1e-12
        assert wb[1] > 1e-12
        null = np.array([-0.5] + [1.0] * (n // 2 - 1))
        assert np.abs(b.entries @ null).max() <= 1e-13

    def test_b_positive_definite_on_balanced_subspace(self):
        # restricted to vectors whose trailing coordinates sum to zero
        for n in (6, 8, 16):
            _, b = coefficient_matrices(n)
            m = n // 2
            basis = [np.eye(m)[0]]
            for i in range(1, m - 1):
                vec = np.zeros(m)
                vec[i], vec[i + 1] = 1.0, -1.0
                basis.append(vec)
            q, _ = np.linalg.qr(np.column_stack(basis))
            restricted = q.T @ b.entries @ q
            w = np.linalg.eigvalsh((restricted + restricted.T) / 2)
            assert w[0] > 1e-12

    def test_empirical_quadratic_forms(self):
        # the 1/t^2 coefficients of the block quadratic forms converge to
        # the coefficient matrices
        rng = np.random.default_rng(0)
        for n in (6, 8):
            m = n // 2
            a, b = coefficient_matrices(n)
            ui = rng.normal(size=m - 1)
            t = 1e-6
            lp, lm = explicit_pm_blocks(n, t)
            u_last = math.sqrt(2 * t) / (n - 1) * sum(
                (n - 1 - 2 * (i + 1)) * ui[i] for i in range(m - 1)
            )
            um = np.concatenate([ui, [u_last]])
            assert um @ lm.entries @ um * t * t == pytest.approx(
                ui @ a.entries @ ui, rel=1e-5
            )
            uplus = rng.normal(size=m - 1)
            uplus -= uplus.mean()
            x = float(rng.normal())
            _, _, w = proof_vectors(n, t)
            vp = x * w + np.concatenate([uplus, [0.0]])
            xu = np.concatenate([[x], uplus])
            assert vp @ lp.entries @ vp * t * t == pytest.approx(
                xu @ b.entries @ xu, rel=1e-4
            )


class TestLoglogFit:
    def test_linear_data(self):
        fit = fit_loglog_slope([(1.0, 2.0), (10.0, 20.0), (100.0, 200.0)])
        assert fit.slope == pytest.approx(1.0, abs=1e-12)

    def test_inverse_square(self):
        pts = [(t, 7.0 / t**2) for t in (1e-1, 1e-2, 1e-3, 1e-4)]
        fit = fit_loglog_slope(pts)
        assert fit.slope == pytest.approx(-2.0, abs=1e-12)
        assert fit.max_residual <= 1e-12

    def test_two_points_rejected(self):
        with pytest.raises(ValueError):
            fit_loglog_slope([(1.0, 1.0), (2.0, 2.0)])

    def test_nonpositive_rejected(self):
        with pytest.raises(ValueError):
            fit_loglog_slope([(1.0, 1.0), (2.0, -2.0), (3.0, 3.0)])


class TestSweep:
    def test_n4_limit_constant(self):
        grid = default_t_grid(1e-3, 1e-6, 10)
        report = sweep_asymptotics(4, grid)
        assert report.limit_constant == pytest.approx(2 / 3, rel=0.05)

    def test_n6_slopes(self):
        report = sweep_asymptotics(6, default_t_grid(1e-3, 1e-6, 10))
        assert -1.05 <= report.fit_lam1.slope <= -0.95
        assert -2.1 <= report.fit_lam2.slope <= -1.9

    def test_records_carry_their_t(self):
        grid = default_t_grid(1e-2, 1e-4, 5)
        report = sweep_asymptotics(5, grid)
        assert tuple(r.t for r in report.records) == grid
        for r in report.records:
            assert r.lam1_t == pytest.approx(r.lam1 * r.t, rel=1e-15)

    def test_divergence_witness(self):
        # the scale-invariant objective grows monotonically along the family
        # and beats the explicit lower bound at t = 1e-4
        for n in (3, 4, 7):
            grid = default_t_grid(1e-1, 1e-4, 6)
            vals = [
                lambda1_normalized(cycle_graph(n), cycle_lt(n, t)) for t in grid
            ]
            assert all(b > a for a, b in zip(vals, vals[1:]))
            assert vals[-1] >= 8 / ((n - 1) * 1e-4) * 0.9

    def test_small_n_rejected(self):
        with pytest.raises(GraphError):
            sweep_asymptotics(2)

    def test_grid_validation(self):
        with pytest.raises(ValueError, match="decreasing"):
            sweep_asymptotics(4, [1e-3, 1e-2, 1e-4])
        with pytest.raises(ValueError, match="0.1"):
            sweep_asymptotics(4, [0.5, 1e-3, 1e-4])
