"""Hermite polynomial chaos: multi-index bases, evaluation, variances, moment tensors.

Uses probabilists' Hermite polynomials orthogonal under the *normalized*
standard Gaussian measure, so the constant term has unit variance and
<psi_m^2> = m!.
"""

from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from .sparsegrid import gauss_hermite

# Triple-product entries at or below this magnitude are roundoff: every true
# entry is a product of factorial ratios, hence an integer.
CIJK_DROP_TOL = 1e-12


def _degree_block(dim, degree):
    """Multi-indices of one total degree, in the classical interleaved order.

    Terms are grouped by their highest active dimension d (ascending).  For
    each d the first cross term (one power in d, rest of the degree on the
    earlier dimensions) comes first, then the terms with two or more powers
    of dimension d led by the pure power, then the remaining cross terms.
    For three dimensions at degree two this yields
    (2,0,0), (1,1,0), (0,2,0), (1,0,1), (0,0,2), (0,1,1) -- the textbook
    ordering x1^2, x1*x2, x2^2, x1*x3, x3^2, x2*x3.
    """
    if degree == 0:
        return [(0,) * dim]
    if dim == 1:
        return [(degree,)]
    block = []
    for d in range(dim):
        tail = (0,) * (dim - 1 - d)
        if d == 0:
            block.append((degree,) + (0,) * (dim - 1))
            continue
        cross = [t + (1,) + tail for t in _degree_block(d, degree - 1)]
        high = []
        for power in range(degree, 1, -1):
            high.extend(t + (power,) + tail for t in _degree_block(d, degree - power))
        block.append(cross[0])
        block.extend(high)
        block.extend(cross[1:])
    return block


@dataclass(frozen=True)
class PceBasis:
    """Graded total-degree Hermite chaos basis.

    `terms[j]` is the multi-index (m_1, ..., m_dim) of basis function j;
    term 0 is the constant.  `variances[j] = prod_i m_i!`.
    """

    dim: int
    order: int
    terms: tuple
    variances: np.ndarray

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, PceBasis):
            return NotImplemented
        return self.dim == other.dim and self.order == other.order and self.terms == other.terms

    def index_of(self, orders):
        """Position of a multi-index in the basis; raises KeyError if absent."""
        orders = tuple(int(m) for m in orders)
        try:
            return self.terms.index(orders)
        except ValueError:
            raise KeyError(f"multi-index {orders} not in basis (dim={self.dim}, order={self.order})")


def build_basis(dim, order):
    """Build the graded chaos basis with (dim+order)! / (dim! order!) terms."""
    if dim < 1:
        raise ValueError(f"stochastic dimension must be >= 1, got {dim}")
    if order < 0:
        raise ValueError(f"basis order must be >= 0, got {order}")
    terms = []
    for degree in range(order + 1):
        terms.extend(_degree_block(dim, degree))
    expected = comb(dim + order, order)
    assert len(terms) == expected, "term enumeration lost or duplicated indices"
    variances = np.array([float(np.prod([factorial(m) for m in t])) for t in terms])
    return PceBasis(dim, order, tuple(terms), variances)


def hermite_1d(n, x):
    """Probabilists' Hermite polynomial psi_n(x) via the three-term recurrence.

    psi_0 = 1, psi_1 = x, psi_n = x*psi_{n-1} - (n-1)*psi_{n-2}.
    Accepts scalars or arrays.
    """
    if n < 0:
        raise ValueError(f"polynomial degree must be >= 0, got {n}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = x.copy()
    for k in range(2, n + 1):
        prev, cur = cur, x * cur - (k - 1) * prev
    return cur if cur.ndim else float(cur)


def eval_psi(basis, j, xi):
    """Evaluate basis function j at germ sample(s) xi.

    `xi` has shape (dim,) or (n_samples, dim); returns a scalar or an
    (n_samples,) array accordingly.
    """
    if not 0 <= j < len(basis):
        raise IndexError(f"basis index {j} out of range [0, {len(basis) - 1}]")
    xi = np.asarray(xi, dtype=float)
    squeeze = xi.ndim == 1
    samples = np.atleast_2d(xi)
    if samples.shape[1] != basis.dim:
        raise ValueError(f"expected {basis.dim} germ components, got {samples.shape[1]}")
    value = np.ones(samples.shape[0])
    for d, m in enumerate(basis.terms[j]):
        if m:
            value *= hermite_1d(m, samples[:, d])
    return float(value[0]) if squeeze else value


def psi_variance(basis, j):
    """<psi_j^2> = prod_i m_i! for basis term j."""
    if not 0 <= j < len(basis):
        raise IndexError(f"basis index {j} out of range [0, {len(basis) - 1}]")
    return float(basis.variances[j])


@dataclass(frozen=True)
class CijkTensor:
    """Sparse third-moment tensor <psi_i psi_j psi_k>.

    Index i ranges over an input basis (shape[0] terms), j and k over an
    output basis.  Only entries with magnitude above the drop tolerance are
    stored, as a dict (i, j, k) -> value.
    """

    shape: tuple
    entries: dict

    def get(self, i, j, k):
        return self.entries.get((i, j, k), 0.0)

    def write(self, path):
        """Debug export: lines "i j k value", lexicographically sorted."""
        with open(path, "w") as fh:
            for (i, j, k) in sorted(self.entries):
                fh.write(f"{i} {j} {k} {self.entries[(i, j, k)]:.15g}\n")


def _moment_table(max_a, max_b, max_c):
    """1D triple moments <psi_a psi_b psi_c> by exact Gauss-Hermite quadrature."""
    table = np.zeros((max_a + 1, max_b + 1, max_c + 1))
    for a in range(max_a + 1):
        for b in range(max_b + 1):
            for c in range(max_c + 1):
                rule = gauss_hermite((a + b + c) // 2 + 1)
                table[a, b, c] = np.sum(
                    rule.weights
                    * hermite_1d(a, rule.nodes)
                    * hermite_1d(b, rule.nodes)
                    * hermite_1d(c, rule.nodes)
                )
    return table


def build_cijk(basis_in, basis_out, drop_tol=CIJK_DROP_TOL):
    """Moment tensor <psi_i psi_j psi_k> with i over basis_in, j,k over basis_out.

    Each entry factorizes into a product of one-dimensional triple moments,
    one per stochastic dimension; the 1D moments are computed by quadrature
    that is exact for the polynomial degree involved.
    """
    if basis_in.dim != basis_out.dim:
        raise ValueError(f"basis dimensions differ: {basis_in.dim} vs {basis_out.dim}")
    moments = _moment_table(basis_in.order, basis_out.order, basis_out.order)
    n_in, n_out = len(basis_in), len(basis_out)
    entries = {}
    for i, mi in enumerate(basis_in.terms):
        for j, mj in enumerate(basis_out.terms):
            for k in range(j, n_out):
                mk = basis_out.terms[k]
                value = 1.0
                for d in range(basis_in.dim):
                    value *= moments[mi[d], mj[d], mk[d]]
                    if value == 0.0:
                        break
                if abs(value) > drop_tol:
                    entries[(i, j, k)] = value
                    if k != j:
                        entries[(i, k, j)] = value
    return CijkTensor((n_in, n_out, n_out), entries)
