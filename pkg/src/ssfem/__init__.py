"""Spectral stochastic finite element toolkit for the 2D lognormal diffusion problem.

Solves -div(c(x, xi) grad u) = f on the unit square with homogeneous
Dirichlet conditions, where c is a lognormal random field, by two routes:

* a coupled stochastic Galerkin solve for all chaos coefficients at once,
* non-intrusive spectral projection over Smolyak sparse-grid samples,

and provides the supporting machinery: Karhunen-Loeve eigenanalysis of the
exponential covariance kernel, Hermite polynomial chaos bases and moment
tensors, P1 triangular finite elements, Gauss-Hermite/Smolyak quadrature,
and field statistics / export utilities.
"""

from .errors import ConfigError, MeshFormatError, SolverError
from .field import StochasticField, field_from_csv
from .fem import (
    StiffnessAssembler,
    apply_dirichlet,
    assemble_load,
    assemble_stiffness,
    element_stiffness,
    solve_deterministic,
)
from .intrusive import BlockOperator, assemble_mode_matrices, solve_intrusive, stochastic_rhs
from .kle import (
    Eigenpair1D,
    KlExpansion2D,
    eigen_1d,
    eigen_2d,
    eigenfunction_2d,
    gaussian_modes,
    partial_sum_ratio,
    solve_omegas,
)
from .lognormal import lognormal_pce, lognormal_sample
from .mesh import TriMesh, load_mesh, save_mesh, structured_mesh
from .nisp import nisp_solve, project_samples, sample_count
from .pce import CijkTensor, PceBasis, build_basis, build_cijk, eval_psi, hermite_1d, psi_variance
from .postproc import compare_fields, export_vtk, field_stats
from .sparsegrid import Quadrature1D, SparseGrid, gauss_hermite, smolyak

__all__ = [
    "BlockOperator",
    "CijkTensor",
    "ConfigError",
    "Eigenpair1D",
    "KlExpansion2D",
    "MeshFormatError",
    "PceBasis",
    "Quadrature1D",
    "SolverError",
    "SparseGrid",
    "StiffnessAssembler",
    "StochasticField",
    "TriMesh",
    "apply_dirichlet",
    "assemble_load",
    "assemble_mode_matrices",
    "assemble_stiffness",
    "build_basis",
    "build_cijk",
    "compare_fields",
    "eigen_1d",
    "eigen_2d",
    "eigenfunction_2d",
    "element_stiffness",
    "eval_psi",
    "export_vtk",
    "field_from_csv",
    "field_stats",
    "gauss_hermite",
    "gaussian_modes",
    "hermite_1d",
    "load_mesh",
    "lognormal_pce",
    "lognormal_sample",
    "nisp_solve",
    "partial_sum_ratio",
    "project_samples",
    "psi_variance",
    "sample_count",
    "save_mesh",
    "smolyak",
    "solve_deterministic",
    "solve_intrusive",
    "solve_omegas",
    "stochastic_rhs",
    "structured_mesh",
]

__version__ = "0.1.0"
