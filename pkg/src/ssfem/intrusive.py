"""Coupled stochastic Galerkin solve for all chaos coefficients at once.

One deterministic stiffness matrix is assembled per input chaos term; the
coupled operator is never assembled globally.  Its action contracts the
per-mode matrices through the sparse moment tensor block by block, which
trades memory for repeated small sparse matrix-vector products.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .fem import StiffnessAssembler, assemble_load, pcg
from .field import StochasticField
from .pce import CijkTensor, build_cijk


def assemble_mode_matrices(mesh, l_field):
    """One stiffness matrix per input coefficient row (exactly P_A + 1 assemblies)."""
    if l_field.kind != "input":
        raise ValueError("mode matrices require an input-coefficient field")
    assembler = StiffnessAssembler(mesh)
    return [assembler.assemble(row) for row in l_field.coeffs]


@dataclass
class BlockOperator:
    """Matrix-free action of the coupled Galerkin operator.

    Block k of the result is sum_{i,j} C_ijk * A_i x_j over the stored
    moment-tensor entries, plus an identity on the constrained nodes of the
    diagonal blocks.  The per-mode matrices must already have boundary rows
    and columns zeroed (no unit diagonal).
    """

    matrices: list
    cijk: CijkTensor
    n_blocks: int
    boundary_mask: np.ndarray
    _by_pair: dict = field(init=False, repr=False)

    def __post_init__(self):
        by_pair = {}
        for (i, j, k), value in self.cijk.entries.items():
            if j < self.n_blocks and k < self.n_blocks and i < len(self.matrices):
                by_pair.setdefault((i, j), []).append((k, value))
        self._by_pair = by_pair

    @property
    def n_nodes(self):
        return self.matrices[0].shape[0]

    @property
    def total_dim(self):
        return self.n_nodes * self.n_blocks

    def apply(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.total_dim,):
            raise ValueError(f"block vector must have length {self.total_dim}, got {x.shape}")
        blocks_in = x.reshape(self.n_blocks, self.n_nodes)
        blocks_out = self.boundary_mask * blocks_in
        for (i, j), targets in self._by_pair.items():
            product = self.matrices[i] @ blocks_in[j]
            for k, value in targets:
                blocks_out[k] += value * product
        return blocks_out.ravel()

    def __call__(self, x):
        return self.apply(x)


def stochastic_rhs(load_vector, basis_out):
    """Block right-hand side of the Galerkin system for a deterministic source.

    The source is orthogonal to every non-constant basis function, so block
    0 carries the deterministic load and all other blocks vanish.
    """
    load_vector = np.asarray(load_vector, dtype=float)
    rhs = np.zeros((len(basis_out), load_vector.size))
    rhs[0] = load_vector
    return rhs.ravel()


def dense_block_matrix(mode_matrices, cijk, n_blocks, interior_mask):
    """Explicitly assembled dense coupled matrix; debug oracle for tiny meshes.

    `interior_mask` holds zeros at constrained nodes, matching the mask
    returned by :func:`build_block_operator`.
    """
    n = mode_matrices[0].shape[0]
    full = np.zeros((n_blocks * n, n_blocks * n))
    for (i, j, k), value in cijk.entries.items():
        if i < len(mode_matrices) and j < n_blocks and k < n_blocks:
            full[k * n : (k + 1) * n, j * n : (j + 1) * n] += value * mode_matrices[i].toarray()
    for k in range(n_blocks):
        for node in np.flatnonzero(interior_mask == 0.0):
            full[k * n + node, k * n + node] += 1.0
    return full


def build_block_operator(mesh, l_field, basis_out, cijk=None):
    """Constrain the per-mode matrices and wire them into a BlockOperator."""
    if cijk is None:
        cijk = build_cijk(l_field.basis, basis_out)
    matrices = assemble_mode_matrices(mesh, l_field)
    mask = np.ones(mesh.n_nodes)
    mask[mesh.boundary_nodes] = 0.0
    selector = sparse.diags(mask)
    constrained = [(selector @ m @ selector).tocsr() for m in matrices]
    boundary_mask = 1.0 - mask
    op = BlockOperator(constrained, cijk, len(basis_out), boundary_mask)
    return op, mask


def solve_intrusive(mesh, l_field, source, basis_out, rtol=1e-8, cijk=None):
    """Solve the coupled Galerkin system; returns the solution chaos field.

    Conjugate gradients on the block operator, preconditioned with the
    mean-mode diagonal replicated across blocks.  Dirichlet conditions are
    applied block-wise: the same constrained node set in every block, unit
    diagonal only on the block diagonal.
    """
    op, interior_mask = build_block_operator(mesh, l_field, basis_out, cijk=cijk)
    load = assemble_load(mesh, source) * interior_mask
    rhs = stochastic_rhs(load, basis_out)

    mean_diag = op.matrices[0].diagonal()
    block_diag = np.where(interior_mask > 0.0, mean_diag, 1.0)
    inv_diag = np.tile(1.0 / block_diag, len(basis_out))

    solution, _ = pcg(op.apply, rhs, inv_diag, rtol, maxiter=10 * op.total_dim)
    coeffs = solution.reshape(len(basis_out), mesh.n_nodes)
    return StochasticField(basis_out, mesh.nodes, coeffs, kind="solution")
