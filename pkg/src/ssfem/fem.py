"""Deterministic P1 finite element kernel for -div(c grad u) = f on triangles.

Stiffness matrices are stored in scipy CSR form.  The per-element diffusion
coefficient is the mean of the three vertex values (one-point centroid
rule, consistent with P1 accuracy), so input fields are fully described by
nodal values.
"""

import numpy as np
from scipy import sparse

from .errors import SolverError


def element_stiffness(vertices, coeff):
    """3x3 P1 stiffness matrix coeff * |T| * (grad phi_r . grad phi_s)."""
    v = np.asarray(vertices, dtype=float)
    d1, d2 = v[1] - v[0], v[2] - v[0]
    area2 = d1[0] * d2[1] - d1[1] * d2[0]
    if area2 <= 0.0:
        raise ValueError(f"triangle with non-positive area: vertices {v.tolist()}")
    # constant P1 gradients: grad phi_r = (b_r, c_r) / (2A)
    b = np.array([v[1, 1] - v[2, 1], v[2, 1] - v[0, 1], v[0, 1] - v[1, 1]])
    c = np.array([v[2, 0] - v[1, 0], v[0, 0] - v[2, 0], v[1, 0] - v[0, 0]])
    return coeff * (np.outer(b, b) + np.outer(c, c)) / (2.0 * area2)


class StiffnessAssembler:
    """Reusable global assembly: geometry factors computed once per mesh.

    Repeated assemblies over the same mesh (sampling loops, per-mode input
    coefficients) only recompute the per-element coefficient scaling.
    """

    def __init__(self, mesh):
        self.mesh = mesh
        p, t = mesh.nodes, mesh.triangles
        v0, v1, v2 = p[t[:, 0]], p[t[:, 1]], p[t[:, 2]]
        b = np.stack([v1[:, 1] - v2[:, 1], v2[:, 1] - v0[:, 1], v0[:, 1] - v1[:, 1]], axis=1)
        c = np.stack([v2[:, 0] - v1[:, 0], v0[:, 0] - v2[:, 0], v1[:, 0] - v0[:, 0]], axis=1)
        d1, d2 = v1 - v0, v2 - v0
        area2 = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]
        if np.any(area2 <= 0.0):
            bad = int(np.argmax(area2 <= 0.0))
            raise ValueError(f"triangle {bad} has non-positive area")
        # unscaled element matrices (M, 3, 3); multiply by centroid coeff
        self._kernels = (b[:, :, None] * b[:, None, :] + c[:, :, None] * c[:, None, :]) / (
            2.0 * area2[:, None, None]
        )
        self._rows = np.repeat(t, 3, axis=1).ravel()
        self._cols = np.tile(t, (1, 3)).ravel()
        self.areas = 0.5 * area2

    def assemble(self, coeff_at_nodes):
        coeff = np.asarray(coeff_at_nodes, dtype=float)
        if coeff.shape != (self.mesh.n_nodes,):
            raise ValueError(
                f"coefficient vector must have length {self.mesh.n_nodes}, got {coeff.shape}"
            )
        centroid = coeff[self.mesh.triangles].mean(axis=1)
        data = (centroid[:, None, None] * self._kernels).ravel()
        matrix = sparse.coo_matrix(
            (data, (self._rows, self._cols)), shape=(self.mesh.n_nodes, self.mesh.n_nodes)
        )
        return matrix.tocsr()


def assemble_stiffness(mesh, coeff_at_nodes):
    """Global stiffness matrix for the nodal coefficient field (CSR, symmetric)."""
    return StiffnessAssembler(mesh).assemble(coeff_at_nodes)


def assemble_load(mesh, source):
    """Load vector for a constant or per-node source: f * |T| / 3 per vertex."""
    t = mesh.triangles
    p = mesh.nodes
    d1 = p[t[:, 1]] - p[t[:, 0]]
    d2 = p[t[:, 2]] - p[t[:, 0]]
    areas = 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])
    source = np.asarray(source, dtype=float)
    if source.ndim == 0:
        per_tri = float(source) * areas
    elif source.shape == (mesh.n_nodes,):
        per_tri = source[t].mean(axis=1) * areas
    else:
        raise ValueError(f"source must be scalar or length-{mesh.n_nodes} vector")
    load = np.zeros(mesh.n_nodes)
    np.add.at(load, t.ravel(), np.repeat(per_tri / 3.0, 3))
    return load


def apply_dirichlet(matrix, rhs, boundary_nodes, unit_diagonal=True):
    """Homogeneous Dirichlet rows/columns eliminated symmetrically.

    Boundary rows and columns are zeroed (keeping the matrix symmetric) and
    the rhs entries cleared; with `unit_diagonal` the constrained equations
    read u_i = 0.
    """
    n = matrix.shape[0]
    keep = np.ones(n)
    keep[np.asarray(boundary_nodes, dtype=int)] = 0.0
    selector = sparse.diags(keep)
    constrained = (selector @ matrix @ selector).tocsr()
    if unit_diagonal:
        constrained = (constrained + sparse.diags(1.0 - keep)).tocsr()
    return constrained, np.asarray(rhs, dtype=float) * keep


def pcg(operator, rhs, inv_diag, rtol, maxiter):
    """Jacobi-preconditioned conjugate gradients to ||r|| <= rtol * ||b||.

    `operator` is a CSR matrix or a callable computing the matrix-vector
    product.  Returns (x, iterations); raises SolverError when the cap is
    reached, carrying the last relative residual.
    """
    apply_op = operator.dot if sparse.issparse(operator) else operator
    rhs = np.asarray(rhs, dtype=float)
    rhs_norm = np.linalg.norm(rhs)
    x = np.zeros_like(rhs)
    if rhs_norm == 0.0:
        return x, 0
    r = rhs.copy()
    z = inv_diag * r
    p = z.copy()
    rz = r @ z
    for iteration in range(1, maxiter + 1):
        q = apply_op(p)
        curvature = p @ q
        if curvature <= 0.0 or not np.isfinite(curvature):
            raise SolverError(
                f"conjugate gradient breakdown at iteration {iteration} "
                f"(p.Ap = {curvature:g}); the operator is not positive definite "
                f"or the tolerance is below machine precision",
                iterations=iteration,
                residual=np.linalg.norm(r) / rhs_norm,
            )
        alpha = rz / curvature
        x += alpha * p
        r -= alpha * q
        if np.linalg.norm(r) <= rtol * rhs_norm:
            return x, iteration
        z = inv_diag * r
        rz_next = r @ z
        p = z + (rz_next / rz) * p
        rz = rz_next
    residual = np.linalg.norm(r) / rhs_norm
    raise SolverError(
        f"conjugate gradients did not reach rtol={rtol:g} within {maxiter} iterations "
        f"(relative residual {residual:.3e})",
        iterations=maxiter,
        residual=residual,
    )


def solve_deterministic(mesh, coeff_at_nodes, source, rtol=1e-10):
    """Solve -div(c grad u) = f with u = 0 on the boundary for one coefficient sample."""
    coeff = np.asarray(coeff_at_nodes, dtype=float)
    if np.any(coeff <= 0.0):
        raise ValueError("diffusion coefficient must be strictly positive")
    matrix = assemble_stiffness(mesh, coeff)
    load = assemble_load(mesh, source)
    constrained, rhs = apply_dirichlet(matrix, load, mesh.boundary_nodes)
    inv_diag = 1.0 / constrained.diagonal()
    solution, _ = pcg(constrained, rhs, inv_diag, rtol, maxiter=10 * mesh.n_nodes)
    return solution
