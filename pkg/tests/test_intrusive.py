import numpy as np
import pytest

from ssfem.fem import assemble_load, assemble_stiffness, solve_deterministic
from ssfem.intrusive import (
    assemble_mode_matrices,
    build_block_operator,
    dense_block_matrix,
    solve_intrusive,
    stochastic_rhs,
)
from ssfem.kle import eigen_2d, gaussian_modes
from ssfem.lognormal import lognormal_pce, lognormal_sample
from ssfem.mesh import structured_mesh
from ssfem.pce import build_basis, build_cijk


def make_problem(nx=4, ny=4, dim=3, p_u=2, sigma=0.3, p_a=None):
    mesh = structured_mesh(nx, ny)
    expansion = eigen_2d(0.5, 1.0, sigma**2, dim)
    modes = gaussian_modes(expansion, mesh.nodes, 0.0, dim)
    basis_u = build_basis(dim, p_u)
    basis_in = build_basis(dim, 2 * p_u if p_a is None else p_a)
    l_field = lognormal_pce(modes, mesh.nodes, basis_in)
    return mesh, modes, basis_u, l_field


class TestModeMatrices:
    def test_mean_mode_equals_deterministic_assembly(self):
        mesh, _, _, l_field = make_problem()
        matrices = assemble_mode_matrices(mesh, l_field)
        assert len(matrices) == len(l_field.basis)
        expected = assemble_stiffness(mesh, l_field.coeffs[0]).toarray()
        np.testing.assert_allclose(matrices[0].toarray(), expected, atol=0.0)

    def test_modes_vanish_as_sigma_goes_to_zero(self):
        maxima = []
        for sigma in (1e-4, 1e-6, 1e-8):
            mesh, _, _, l_field = make_problem(sigma=sigma)
            matrices = assemble_mode_matrices(mesh, l_field)
            maxima.append(max(np.abs(m.toarray()).max() for m in matrices[1:]))
            assert maxima[-1] < 10 * sigma
        assert maxima[0] > maxima[1] > maxima[2]

    def test_all_modes_symmetric(self):
        mesh, _, _, l_field = make_problem()
        for matrix in assemble_mode_matrices(mesh, l_field):
            diff = (matrix - matrix.T).toarray()
            assert np.abs(diff).max() < 1e-12

    def test_all_modes_share_sparsity_pattern(self):
        mesh, _, _, l_field = make_problem()
        matrices = assemble_mode_matrices(mesh, l_field)
        for matrix in matrices[1:]:
            assert np.array_equal(matrix.indptr, matrices[0].indptr)
            assert np.array_equal(matrix.indices, matrices[0].indices)

    def test_requires_input_field(self):
        mesh, _, basis_u, l_field = make_problem()
        solution_like = type(l_field)(l_field.basis, l_field.nodes, l_field.coeffs, kind="solution")
        with pytest.raises(ValueError):
            assemble_mode_matrices(mesh, solution_like)


class TestBlockOperator:
    def test_single_block_reduces_to_mean_matrix(self, rng):
        mesh, _, _, l_field = make_problem(p_u=0)
        basis_u = build_basis(3, 0)
        op, interior = build_block_operator(mesh, l_field, basis_u)
        x = rng.normal(size=mesh.n_nodes)
        expected = op.matrices[0] @ x + (1.0 - interior) * x
        np.testing.assert_allclose(op.apply(x), expected, atol=1e-14)

    def test_block_columns_match_definition(self, rng):
        mesh, _, basis_u, l_field = make_problem(nx=3, ny=3, dim=2, p_u=1)
        cijk = build_cijk(l_field.basis, basis_u)
        op, _ = build_block_operator(mesh, l_field, basis_u, cijk=cijk)
        n, nb = mesh.n_nodes, len(basis_u)
        j = 1
        xj = rng.normal(size=n)
        x = np.zeros(nb * n)
        x[j * n : (j + 1) * n] = xj
        result = op.apply(x).reshape(nb, n)
        for k in range(nb):
            expected = sum(
                cijk.get(i, j, k) * (op.matrices[i] @ xj) for i in range(len(l_field.basis))
            )
            expected += op.boundary_mask * (xj if k == j else 0.0)
            np.testing.assert_allclose(result[k], expected, atol=1e-12)

    def test_matches_dense_assembly_on_nine_node_mesh(self, rng):
        # explicit-assembly oracle: 9 nodes, two random dimensions, first order
        mesh, _, _, l_field = make_problem(nx=2, ny=2, dim=2, p_u=1)
        basis_u = build_basis(2, 1)
        op, _ = build_block_operator(mesh, l_field, basis_u)
        dense = dense_block_matrix(op.matrices, op.cijk, len(basis_u), 1.0 - op.boundary_mask)
        for _ in range(5):
            x = rng.normal(size=op.total_dim)
            np.testing.assert_allclose(op.apply(x), dense @ x, atol=1e-12)

    def test_operator_symmetry(self, rng):
        mesh, _, basis_u, l_field = make_problem()
        op, _ = build_block_operator(mesh, l_field, basis_u)
        for _ in range(5):
            x = rng.normal(size=op.total_dim)
            y = rng.normal(size=op.total_dim)
            left = np.dot(op.apply(x), y)
            right = np.dot(x, op.apply(y))
            assert abs(left - right) <= 1e-10 * max(abs(left), abs(right))

    def test_positive_definite_on_random_vectors(self, rng):
        mesh, _, basis_u, l_field = make_problem()
        op, _ = build_block_operator(mesh, l_field, basis_u)
        for _ in range(100):
            x = rng.normal(size=op.total_dim)
            assert np.dot(x, op.apply(x)) > 0.0

    def test_rejects_wrong_length(self):
        mesh, _, basis_u, l_field = make_problem()
        op, _ = build_block_operator(mesh, l_field, basis_u)
        with pytest.raises(ValueError):
            op.apply(np.zeros(op.total_dim + 1))


class TestStochasticRhs:
    def test_block_zero_carries_load(self):
        mesh = structured_mesh(3, 3)
        basis_u = build_basis(2, 2)
        load = assemble_load(mesh, 1.0)
        rhs = stochastic_rhs(load, basis_u).reshape(len(basis_u), mesh.n_nodes)
        np.testing.assert_allclose(rhs[0], load, atol=0.0)
        assert np.all(rhs[1:] == 0.0)

    def test_norm_equals_load_norm(self):
        mesh = structured_mesh(4, 4)
        basis_u = build_basis(3, 3)
        load = assemble_load(mesh, 2.5)
        rhs = stochastic_rhs(load, basis_u)
        assert np.linalg.norm(rhs) == pytest.approx(np.linalg.norm(load), rel=1e-15)


class TestSolveIntrusive:
    def test_deterministic_degeneration(self):
        mesh, modes, basis_u, _ = make_problem()
        flat = modes.copy()
        flat[1:] = 0.0
        l_field = lognormal_pce(flat, mesh.nodes, build_basis(3, 4))
        sol = solve_intrusive(mesh, l_field, 1.0, basis_u)
        u_det = solve_deterministic(mesh, np.exp(flat[0]), 1.0)
        np.testing.assert_allclose(sol.coeffs[0], u_det, atol=1e-9)
        assert np.linalg.norm(sol.coeffs[1:]) < 1e-8

    def test_boundary_rows_vanish_in_every_block(self):
        mesh, _, basis_u, l_field = make_problem(p_u=3)
        sol = solve_intrusive(mesh, l_field, 1.0, basis_u)
        np.testing.assert_allclose(sol.coeffs[:, mesh.boundary_nodes], 0.0, atol=1e-14)

    def test_first_order_terms_dominate(self):
        mesh, _, _, l_field = make_problem(nx=6, ny=6, p_u=3)
        basis_u = build_basis(3, 3)
        sol = solve_intrusive(mesh, l_field, 1.0, basis_u)
        by_degree = {}
        for j, orders in enumerate(basis_u.terms):
            degree = sum(orders)
            if degree:
                by_degree.setdefault(degree, []).append(np.abs(sol.coeffs[j]).max())
        maxima = {d: max(v) for d, v in by_degree.items()}
        assert maxima[1] >= maxima[2] >= maxima[3]

    def test_linearity_in_source(self):
        mesh, _, basis_u, l_field = make_problem()
        sol1 = solve_intrusive(mesh, l_field, 1.0, basis_u)
        sol3 = solve_intrusive(mesh, l_field, 3.0, basis_u)
        np.testing.assert_allclose(sol3.coeffs, 3.0 * sol1.coeffs, atol=1e-9)

    def test_surrogate_predicts_fresh_samples(self):
        # the solved expansion evaluated at new germ samples must reproduce
        # direct solves at those samples, with spectral decay in the order
        mesh = structured_mesh(8, 8)
        expansion = eigen_2d(0.5, 1.0, 0.09, 3)
        modes = gaussian_modes(expansion, mesh.nodes, 0.0, 3)
        interior = np.setdiff1d(np.arange(mesh.n_nodes), mesh.boundary_nodes)
        xis = np.random.default_rng(42).standard_normal(size=(8, 3))
        worst_by_order = []
        for order in (1, 2, 3):
            basis_u = build_basis(3, order)
            l_field = lognormal_pce(modes, mesh.nodes, build_basis(3, 2 * order))
            sol = solve_intrusive(mesh, l_field, 1.0, basis_u)
            worst = 0.0
            for xi in xis:
                direct = solve_deterministic(mesh, lognormal_sample(modes, xi), 1.0)
                surrogate = sol.evaluate(xi)
                worst = max(
                    worst,
                    np.linalg.norm(surrogate[interior] - direct[interior])
                    / np.linalg.norm(direct[interior]),
                )
            worst_by_order.append(worst)
        assert worst_by_order[0] > worst_by_order[1] > worst_by_order[2]
        assert worst_by_order[2] < 1e-3
