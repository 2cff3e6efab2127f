"""Shared independent oracles for the test suite."""

import itertools
from math import factorial

import numpy as np
import pytest

from ssfem.sparsegrid import gauss_hermite


def tensor_gauss_hermite(dim, level):
    """Full tensor-product Gauss-Hermite rule (points (n, dim), weights (n,))."""
    rule = gauss_hermite(level)
    points = np.array(list(itertools.product(rule.nodes, repeat=dim)))
    weights = np.ones(points.shape[0])
    for combo_index, combo in enumerate(itertools.product(range(level), repeat=dim)):
        for position in combo:
            weights[combo_index] *= rule.weights[position]
    return points, weights


def triple_moment_closed_form(a, b, c):
    """<psi_a psi_b psi_c> for probabilists' Hermite under the normal measure."""
    total = a + b + c
    if total % 2:
        return 0.0
    s = total // 2
    if s < a or s < b or s < c:
        return 0.0
    return (
        factorial(a)
        * factorial(b)
        * factorial(c)
        / (factorial(s - a) * factorial(s - b) * factorial(s - c))
    )


def double_factorial(n):
    result = 1
    while n > 1:
        result *= n
        n -= 2
    return result


def gaussian_moment(power):
    """E[xi^power] for a standard normal variable."""
    return double_factorial(power - 1) if power % 2 == 0 else 0.0


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
