"""Gauss-Hermite quadrature and Smolyak sparse grids for the standard normal measure.

All rules integrate against the normalized Gaussian density, so weights sum
to one and a level-m one-dimensional rule is exact for polynomials of degree
2m - 1.  Levels grow linearly: level m has exactly m nodes.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np
from scipy.linalg import eigh_tridiagonal

# Coordinates closer than this are considered the same sparse-grid point.
DEDUP_TOL = 1e-12


@dataclass(frozen=True)
class Quadrature1D:
    """One-dimensional Gauss-Hermite rule: `level` nodes, unit total weight."""

    level: int
    nodes: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True)
class SparseGrid:
    """Deduplicated multidimensional quadrature nodes with signed weights.

    Points are sorted lexicographically by coordinates; `weights[q]` belongs
    to `points[q]`.  Weights sum to one but individual weights may be
    negative (combination-technique coefficients).
    """

    dim: int
    level: int
    points: np.ndarray  # (n_points, dim)
    weights: np.ndarray  # (n_points,)


@lru_cache(maxsize=None)
def _hermite_rule(level):
    if level == 1:
        return np.zeros(1), np.ones(1)
    # Golub-Welsch on the Jacobi matrix of the probabilists' Hermite
    # recurrence x He_k = He_{k+1} + k He_{k-1}: zero diagonal, off-diagonal
    # sqrt(k).  Weights are the squared first eigenvector components (the
    # measure has unit total mass).
    offdiag = np.sqrt(np.arange(1.0, level))
    nodes, vectors = eigh_tridiagonal(np.zeros(level), offdiag)
    weights = vectors[0] ** 2
    # enforce the exact +/- symmetry of the rule
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    weights = weights / weights.sum()
    return nodes, weights


def gauss_hermite(level):
    """Gauss-Hermite rule with `level` points for the standard normal weight.

    Exact for polynomials of degree <= 2*level - 1.
    """
    if level < 1:
        raise ValueError(f"quadrature level must be >= 1, got {level}")
    nodes, weights = _hermite_rule(int(level))
    return Quadrature1D(int(level), nodes.copy(), weights.copy())


def _tensor_rule(levels):
    """Tensor product of 1D rules; returns (points (n,d), weights (n,))."""
    rules = [_hermite_rule(m) for m in levels]
    grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
    points = np.stack([g.ravel() for g in grids], axis=1)
    weights = rules[0][1]
    for r in rules[1:]:
        weights = np.outer(weights, r[1]).ravel()
    return points, weights


def smolyak(dim, level):
    """Smolyak sparse grid for the standard normal measure.

    Union of tensor-product Gauss-Hermite grids with per-dimension levels
    l' = (l_1, ..., l_d), l_i >= 1, restricted to level <= |l'| <= level+d-1.
    Each tensor grid carries the combination coefficient
    ``(-1)**(level+d-1-|l'|) * C(d-1, level+d-1-|l'|)``; coincident points
    are merged by summing weights and zero-weight points are dropped.

    The resulting rule integrates every monomial of total degree
    <= 2*level - 1 exactly.
    """
    if dim < 1 or level < 1:
        raise ValueError(f"need dim >= 1 and level >= 1, got dim={dim}, level={level}")
    merged = {}
    for q in range(level, level + dim):
        coeff = (-1) ** (level + dim - 1 - q) * comb(dim - 1, level + dim - 1 - q)
        for levels in itertools.product(range(1, level + 1), repeat=dim):
            if sum(levels) != q:
                continue
            points, weights = _tensor_rule(levels)
            for point, weight in zip(points, weights):
                key = tuple(np.round(point / DEDUP_TOL).astype(np.int64))
                if key in merged:
                    merged[key] = (merged[key][0], merged[key][1] + coeff * weight)
                else:
                    merged[key] = (point, coeff * weight)
    kept = [(tuple(p), w) for p, w in merged.values() if abs(w) > 1e-14]
    kept.sort(key=lambda item: item[0])
    points = np.array([p for p, _ in kept], dtype=float).reshape(len(kept), dim)
    weights = np.array([w for _, w in kept], dtype=float)
    return SparseGrid(dim, level, points, weights)
