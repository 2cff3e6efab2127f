"""Node-indexed chaos coefficient fields and their CSV serialization."""

from dataclasses import dataclass

import numpy as np

from .pce import PceBasis, build_basis, eval_psi

_KINDS = ("input", "solution")


@dataclass
class StochasticField:
    """A random field as one chaos coefficient vector per basis term.

    `coeffs` has shape (n_terms, n_nodes); row 0 is the mean.  `kind` is
    "input" for coefficient fields of the diffusion coefficient (mean row
    strictly positive) or "solution" for chaos coefficients of the PDE
    solution.  `nodes` carries the (n_nodes, 2) mesh coordinates so fields
    are self-describing on disk.
    """

    basis: PceBasis
    nodes: np.ndarray
    coeffs: np.ndarray
    kind: str = "solution"

    def __post_init__(self):
        self.nodes = np.asarray(self.nodes, dtype=float)
        self.coeffs = np.asarray(self.coeffs, dtype=float)
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        if self.coeffs.ndim != 2 or self.coeffs.shape[0] != len(self.basis):
            raise ValueError(
                f"coeffs must have shape ({len(self.basis)}, n_nodes), got {self.coeffs.shape}"
            )
        if self.nodes.shape != (self.coeffs.shape[1], 2):
            raise ValueError(
                f"nodes must have shape ({self.coeffs.shape[1]}, 2), got {self.nodes.shape}"
            )
        if not np.all(np.isfinite(self.coeffs)):
            raise ValueError("coefficient field contains non-finite entries")
        if self.kind == "input" and np.any(self.coeffs[0] <= 0.0):
            raise ValueError("input-coefficient field must have a strictly positive mean row")

    @property
    def n_nodes(self):
        return self.coeffs.shape[1]

    def evaluate(self, xi):
        """Evaluate the chaos expansion at germ sample(s) xi.

        Returns (n_nodes,) for a single sample or (n_samples, n_nodes).
        """
        xi = np.asarray(xi, dtype=float)
        squeeze = xi.ndim == 1
        samples = np.atleast_2d(xi)
        psi = np.stack([eval_psi(self.basis, j, samples) for j in range(len(self.basis))], axis=1)
        values = psi @ self.coeffs
        return values[0] if squeeze else values

    def to_csv(self, path):
        """Write "node,x,y,c0,...,cP" rows at 15 significant digits."""
        n_terms = len(self.basis)
        header = "node,x,y," + ",".join(f"c{j}" for j in range(n_terms))
        with open(path, "w") as fh:
            fh.write(f"# ssfem field kind={self.kind} dim={self.basis.dim} order={self.basis.order}\n")
            fh.write(header + "\n")
            for i in range(self.n_nodes):
                coords = f"{self.nodes[i, 0]:.15g},{self.nodes[i, 1]:.15g}"
                values = ",".join(f"{v:.15g}" for v in self.coeffs[:, i])
                fh.write(f"{i},{coords},{values}\n")


def field_from_csv(path, basis=None, kind=None):
    """Load a StochasticField written by :meth:`StochasticField.to_csv`.

    The leading metadata comment supplies basis dimension/order and kind
    when not given explicitly; the column header must be exactly
    node,x,y,c0..cP in order.
    """
    meta = {}
    with open(path) as fh:
        lines = fh.read().splitlines()
    rows = []
    header = None
    for line in lines:
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            for token in stripped.lstrip("#").split():
                if "=" in token:
                    key, _, value = token.partition("=")
                    meta[key] = value
            continue
        if header is None:
            header = stripped
            continue
        rows.append(stripped)
    if header is None or not rows:
        raise ValueError(f"{path}: no field data found")
    columns = header.split(",")
    n_terms = len(columns) - 3
    if columns[:3] != ["node", "x", "y"] or columns[3:] != [f"c{j}" for j in range(n_terms)]:
        raise ValueError(
            f"{path}: header must be node,x,y,c0..c{n_terms - 1} in order, got {header!r}"
        )
    if basis is None:
        if "dim" not in meta or "order" not in meta:
            raise ValueError(f"{path}: no basis metadata; pass basis= explicitly")
        basis = build_basis(int(meta["dim"]), int(meta["order"]))
    if len(basis) != n_terms:
        raise ValueError(f"{path}: {n_terms} coefficient columns but basis has {len(basis)} terms")
    if kind is None:
        kind = meta.get("kind", "solution")
    data = np.array([[float(v) for v in row.split(",")] for row in rows])
    order = np.argsort(data[:, 0].astype(int))
    data = data[order]
    nodes = data[:, 1:3]
    coeffs = data[:, 3:].T
    return StochasticField(basis, nodes, coeffs, kind=kind)
