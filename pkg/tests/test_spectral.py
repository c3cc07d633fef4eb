import numpy as np
import pytest

from specmax.graphs import (
    GraphError,
    LengthFunction,
    build_graph,
    cycle_graph,
    fujiwara_weights,
    normalize_lengths,
    path_graph,
    uniform_lengths,
)
from specmax.randgen import random_connected_graph, random_lengths
from specmax.spectral import (
    SymMatrix,
    apply_laplacian,
    assemble_laplacian,
    lambda1,
    lambda1_eigenfunction,
    lambda1_info,
    lambda1_normalized,
    m0_inner,
    rayleigh_quotient,
    symmetric_eigen,
)


def uniform_normalized_cycle(n):
    g = cycle_graph(n)
    return g, normalize_lengths(uniform_lengths(g))


class TestAssembleLaplacian:
    def test_uniform_triangle_entries(self):
        g = cycle_graph(3)
        mat = assemble_laplacian(g, uniform_lengths(g, 1 / 6)).entries
        np.testing.assert_allclose(np.diag(mat), 36.0, rtol=1e-14)
        off = mat[~np.eye(3, dtype=bool)]
        np.testing.assert_allclose(off, -18.0, rtol=1e-14)

    def test_single_edge(self):
        g = path_graph(2)
        mat = assemble_laplacian(g, uniform_lengths(g, 0.5)).entries
        np.testing.assert_array_equal(mat, [[4.0, -4.0], [-4.0, 4.0]])

    def test_kernel_vector(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            g = random_connected_graph(rng, int(rng.integers(2, 10)))
            l = random_lengths(rng, g)
            mat = assemble_laplacian(g, l)
            x0 = np.sqrt(np.asarray(fujiwara_weights(g, l).m0))
            x0 /= np.linalg.norm(x0)
            assert np.linalg.norm(mat.entries @ x0) <= 1e-10 * mat.norm

    def test_disconnected_rejected(self):
        g = build_graph(4, [(1, 2), (3, 4)])
        with pytest.raises(GraphError, match="connected"):
            assemble_laplacian(g, uniform_lengths(g))

    def test_exact_symmetry_enforced(self):
        with pytest.raises(ValueError, match="symmetric"):
            SymMatrix(np.array([[0.0, 1.0], [1.0 + 1e-15, 0.0]]))


class TestApplyLaplacian:
    def test_constant_in_kernel(self):
        g = cycle_graph(5)
        l = uniform_lengths(g, 0.3)
        np.testing.assert_array_equal(apply_laplacian(g, l, np.ones(5)), np.zeros(5))

    def test_uniform_triangle_action(self):
        g = cycle_graph(3)
        out = apply_laplacian(g, uniform_lengths(g, 1 / 6), [1.0, -1.0, 0.0])
        np.testing.assert_allclose(out, [54.0, -54.0, 0.0], rtol=1e-13)

    def test_path_eigenfunction(self):
        g = path_graph(3)
        out = apply_laplacian(g, uniform_lengths(g, 0.25), [1.0, -1.0, 1.0])
        np.testing.assert_allclose(out, [32.0, -32.0, 32.0], rtol=1e-13)

    def test_matrix_operator_consistency(self):
        # matrix acting on sqrt(m0)-scaled coordinates equals the operator
        rng = np.random.default_rng(1)
        for _ in range(25):
            g = random_connected_graph(rng, int(rng.integers(2, 9)))
            l = random_lengths(rng, g)
            phi = rng.normal(size=g.n)
            d = np.sqrt(np.asarray(fujiwara_weights(g, l).m0))
            lhs = assemble_laplacian(g, l).entries @ (d * phi)
            rhs = d * apply_laplacian(g, l, phi)
            np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-12 * np.abs(rhs).max())

    def test_dimension_mismatch(self):
        g = cycle_graph(3)
        with pytest.raises(GraphError):
            apply_laplacian(g, uniform_lengths(g), [1.0, 2.0])


class TestSymmetricEigen:
    def test_identity(self):
        res = symmetric_eigen(np.eye(3))
        np.testing.assert_array_equal(res.eigenvalues, [1.0, 1.0, 1.0])

    def test_two_by_two(self):
        res = symmetric_eigen(np.array([[4.0, -4.0], [-4.0, 4.0]]))
        np.testing.assert_allclose(res.eigenvalues, [0.0, 8.0], atol=1e-14)

    def test_uniform_c4(self):
        g, l = uniform_normalized_cycle(4)
        res = symmetric_eigen(assemble_laplacian(g, l))
        np.testing.assert_allclose(res.eigenvalues, [0.0, 64.0, 64.0, 128.0], atol=1e-10)

    def test_orthonormality_and_residual(self):
        g, l = uniform_normalized_cycle(9)
        mat = assemble_laplacian(g, l)
        res = symmetric_eigen(mat)
        np.testing.assert_allclose(
            res.eigenvectors.T @ res.eigenvectors, np.eye(9), atol=1e-10
        )
        assert res.residual <= 1e-11 * mat.norm

    def test_permutation_invariance(self):
        rng = np.random.default_rng(2)
        g = random_connected_graph(rng, 7)
        l = random_lengths(rng, g)
        perm = rng.permutation(7) + 1
        g2 = build_graph(7, [(perm[u - 1], perm[v - 1]) for u, v in g.edges])
        l2 = LengthFunction(
            {(perm[u - 1], perm[v - 1]): l.of(u, v) for u, v in g.edges}
        )
        mat = assemble_laplacian(g, l)
        w1 = symmetric_eigen(mat).eigenvalues
        w2 = symmetric_eigen(assemble_laplacian(g2, l2)).eigenvalues
        np.testing.assert_allclose(w1, w2, rtol=1e-9, atol=1e-9 * mat.norm)


class TestLambda1:
    def test_single_edge(self):
        g = path_graph(2)
        assert lambda1(g, uniform_lengths(g, 0.5)) == pytest.approx(8.0, abs=1e-12)

    def test_uniform_triangle(self):
        g, l = uniform_normalized_cycle(3)
        assert lambda1(g, l) == pytest.approx(54.0, rel=1e-12)

    def test_uniform_path3(self):
        g = path_graph(3)
        l = uniform_lengths(g, 0.25)
        res = symmetric_eigen(assemble_laplacian(g, l))
        np.testing.assert_allclose(res.eigenvalues, [0.0, 16.0, 32.0], atol=1e-12)
        assert lambda1(g, l) == pytest.approx(16.0, rel=1e-13)

    def test_kernel_is_simple(self):
        rng = np.random.default_rng(3)
        for _ in range(15):
            g = random_connected_graph(rng, int(rng.integers(2, 9)))
            l = random_lengths(rng, g)
            w = symmetric_eigen(assemble_laplacian(g, l)).eigenvalues
            norm = assemble_laplacian(g, l).norm
            assert abs(w[0]) <= 1e-12 * norm
            assert w[1] > 1e-8 * norm  # positive and separated from the kernel

    def test_multiplicity_flag_uniform_c4(self):
        g, l = uniform_normalized_cycle(4)
        info = lambda1_info(g, l)
        assert info.multiplicity == 2
        assert not info.is_simple


class TestRayleighQuotient:
    def test_eigenfunction_attains_lambda1(self):
        rng = np.random.default_rng(4)
        g = random_connected_graph(rng, 6)
        l = random_lengths(rng, g)
        phi = lambda1_eigenfunction(g, l)
        assert rayleigh_quotient(g, l, phi) == pytest.approx(lambda1(g, l), rel=1e-12)

    def test_uniform_triangle_value(self):
        g, l = uniform_normalized_cycle(3)
        assert rayleigh_quotient(g, l, [1.0, -1.0, 0.0]) == pytest.approx(54.0, rel=1e-13)

    def test_constant_function(self):
        g, l = uniform_normalized_cycle(3)
        phi = np.ones(3)
        assert rayleigh_quotient(g, l, phi) == 0.0
        # the orthogonality precondition fails for constants
        assert m0_inner(g, l, phi, np.ones(3)) != pytest.approx(0.0, abs=1e-12)

    def test_zero_function_rejected(self):
        g, l = uniform_normalized_cycle(3)
        with pytest.raises(GraphError):
            rayleigh_quotient(g, l, np.zeros(3))

    def test_lower_bound_over_random_orthogonal(self):
        rng = np.random.default_rng(5)
        g = random_connected_graph(rng, 6)
        l = random_lengths(rng, g)
        lam = lambda1(g, l)
        m0 = np.asarray(fujiwara_weights(g, l).m0)
        lowest = np.inf
        for _ in range(10_000):
            phi = rng.normal(size=6)
            phi -= (m0 @ phi) / m0.sum()
            lowest = min(lowest, rayleigh_quotient(g, l, phi))
        assert lowest >= lam - 1e-9
        phi = lambda1_eigenfunction(g, l)
        assert rayleigh_quotient(g, l, phi) <= lowest + lam * 1e-6


class TestLambda1Normalized:
    def test_triangle_unit_lengths(self):
        g = cycle_graph(3)
        assert lambda1_normalized(g, uniform_lengths(g)) == pytest.approx(54.0, rel=1e-12)

    def test_c4_unit_lengths(self):
        g = cycle_graph(4)
        assert lambda1_normalized(g, uniform_lengths(g)) == pytest.approx(64.0, rel=1e-12)

    def test_scale_invariance(self):
        rng = np.random.default_rng(6)
        for _ in range(25):
            g = random_connected_graph(rng, int(rng.integers(2, 9)))
            l = random_lengths(rng, g)
            c = float(rng.uniform(0.1, 10.0))
            base = lambda1_normalized(g, l)
            assert lambda1_normalized(g, l.scaled(c)) == pytest.approx(base, rel=1e-10)

    def test_matches_normalized_lambda1(self):
        rng = np.random.default_rng(7)
        g = random_connected_graph(rng, 5)
        l = random_lengths(rng, g)
        assert lambda1_normalized(g, l) == pytest.approx(
            lambda1(g, normalize_lengths(l)), rel=1e-11
        )
