"""Non-intrusive spectral projection over sparse-grid samples.

The deterministic solver is driven as a black box at every quadrature node
of the germ; the chaos coefficients are then the quadrature estimates of
the projection integrals divided by the analytic basis variances.  Samples
use the exact exponential of the truncated Gaussian field, not its chaos
expansion, which keeps this route an independent check on the coupled
Galerkin solve.
"""

import numpy as np

from .errors import SolverError
from .fem import StiffnessAssembler, apply_dirichlet, assemble_load, pcg
from .field import StochasticField
from .lognormal import lognormal_sample
from .pce import eval_psi


def sample_count(grid):
    """Number of deduplicated sample points the grid will request."""
    return grid.points.shape[0]


def project_samples(samples, grid, basis_out):
    """Quadrature projection of per-sample nodal responses onto the chaos basis.

    `samples[q]` is the response at grid point q.  Returns the coefficient
    matrix (n_terms, n_nodes): coeff_k = sum_q w_q psi_k(xi_q) u_q / <psi_k^2>.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.shape[0] != grid.points.shape[0]:
        raise ValueError(
            f"got {samples.shape[0]} responses for {grid.points.shape[0]} grid points"
        )
    if grid.dim != basis_out.dim:
        raise ValueError(f"grid dimension {grid.dim} does not match basis dimension {basis_out.dim}")
    psi = np.stack(
        [eval_psi(basis_out, k, grid.points) for k in range(len(basis_out))], axis=1
    )  # (n_points, n_terms)
    weighted = psi * grid.weights[:, None]
    return (weighted.T @ samples) / basis_out.variances[:, None]


def nisp_solve(mesh, g_modes, basis_out, grid, source, rtol=1e-10):
    """Sample the PDE at every sparse-grid node and project onto the chaos basis.

    Points are visited in the grid's (lexicographically sorted) order; the
    mesh geometry is factored once and reassembled per coefficient sample.
    A failing sample solve aborts with the offending node in the message.
    """
    assembler = StiffnessAssembler(mesh)
    load = assemble_load(mesh, source)
    responses = np.empty((grid.points.shape[0], mesh.n_nodes))
    for q, xi in enumerate(grid.points):
        coeff = lognormal_sample(g_modes, xi)
        matrix = assembler.assemble(coeff)
        constrained, rhs = apply_dirichlet(matrix, load, mesh.boundary_nodes)
        inv_diag = 1.0 / constrained.diagonal()
        try:
            responses[q], _ = pcg(constrained, rhs, inv_diag, rtol, maxiter=10 * mesh.n_nodes)
        except SolverError as err:
            raise SolverError(
                f"sample solve failed at grid node {q} (xi={xi.tolist()}): {err}",
                iterations=err.iterations,
                residual=err.residual,
            ) from err
    coeffs = project_samples(responses, grid, basis_out)
    return StochasticField(basis_out, mesh.nodes, coeffs, kind="solution")
