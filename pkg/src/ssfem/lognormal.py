"""Chaos expansion and exact sampling of the lognormal diffusion coefficient.

The coefficient is c(x, xi) = exp(g(x, xi)) with the truncated Gaussian log
field g(x, xi) = g_0(x) + sum_j g_j(x) xi_j.  Its chaos coefficients have
the closed form

    c_0(x) = exp(g_0(x) + 0.5 * sum_j g_j(x)^2)
    c_m(x) = c_0(x) * prod_d g_d(x)^{m_d} / m_d!

for the multi-index m, i.e. the expectation of the shifted Hermite basis
divided by its variance.
"""

from math import factorial

import numpy as np

from .field import StochasticField


def lognormal_pce(g_modes, nodes, basis):
    """Chaos coefficients of exp(Gaussian field) as an input StochasticField.

    `g_modes` is the (L + 1, n_nodes) array of log-field modes (mean row
    first); `basis` must have dimension L.
    """
    g_modes = np.asarray(g_modes, dtype=float)
    n_dims = g_modes.shape[0] - 1
    if n_dims != basis.dim:
        raise ValueError(f"basis dimension {basis.dim} does not match {n_dims} field modes")
    mean = np.exp(g_modes[0] + 0.5 * np.sum(g_modes[1:] ** 2, axis=0))
    coeffs = np.empty((len(basis), g_modes.shape[1]))
    for j, orders in enumerate(basis.terms):
        term = mean.copy()
        for d, m in enumerate(orders):
            if m:
                term = term * g_modes[1 + d] ** m / factorial(m)
        coeffs[j] = term
    return StochasticField(basis, nodes, coeffs, kind="input")


def lognormal_sample(g_modes, xi):
    """Exact pointwise field sample exp(g_0 + sum_j g_j * xi_j); always positive."""
    g_modes = np.asarray(g_modes, dtype=float)
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (g_modes.shape[0] - 1,):
        raise ValueError(f"expected {g_modes.shape[0] - 1} germ components, got {xi.shape}")
    log_field = g_modes[0] + xi @ g_modes[1:]
    return np.exp(log_field)
