"""Karhunen-Loeve eigenanalysis of the exponential covariance kernel.

Analytic eigenpairs of C(s, t) = variance * exp(-|s - t| / corr_length) on
the symmetric interval [-a, a], tensorized to the square [-a, a]^2.  The PDE
mesh lives on the unit square, so field evaluations shift coordinates by
-0.5 before applying the eigenfunctions (half_width 0.5 covers the unit
square exactly).
"""

from dataclasses import dataclass
from math import ceil, sqrt

import numpy as np


@dataclass(frozen=True)
class Eigenpair1D:
    """One analytic eigenpair on [-a, a].

    `parity` selects the eigenfunction branch: "odd" (1st, 3rd, ... pair)
    is the cosine branch, "even" the sine branch.  `norm` is the L2
    normalization denominator, so f(z) = cos(omega z)/norm or
    sin(omega z)/norm has unit norm on [-a, a].
    """

    omega: float
    eigenvalue: float
    parity: str
    norm: float


@dataclass(frozen=True)
class KlExpansion2D:
    """Sorted tensor-product eigenpairs on the square [-a, a]^2.

    The 2D kernel factorizes into two 1D kernels each carrying one factor
    of the process standard deviation, so `pairs_1d` holds the tensor
    factors (eigenvalues scaled by sqrt(variance)); their pairwise products
    then carry the full variance.  `terms[k] = (eigenvalue, ix, iy)` with
    1-based indices into `pairs_1d`; eigenvalues are non-increasing and
    exact products pairs_1d[ix-1].eigenvalue * pairs_1d[iy-1].eigenvalue.
    Equal eigenvalues are ordered by (ix, iy).
    """

    half_width: float
    corr_length: float
    variance: float
    pairs_1d: tuple
    terms: tuple

    def eigenvalues(self):
        return np.array([t[0] for t in self.terms])


def _bisect(func, lo, hi, tol=1e-12):
    flo, fhi = func(lo), func(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise ArithmeticError(
            f"no sign change while bracketing a root in [{lo:.12g}, {hi:.12g}] "
            f"(f(lo)={flo:.3g}, f(hi)={fhi:.3g})"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fmid = func(mid)
        if fmid == 0.0:
            return mid
        if flo * fmid < 0:
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def _polish(func, dfunc, x, lo, hi):
    # two clamped Newton steps tighten the bisection result to near machine
    # accuracy; large roots need this for small branch-equation residuals
    for _ in range(2):
        step = func(x) / dfunc(x)
        x_new = x - step
        if not lo < x_new < hi:
            break
        x = x_new
    return x


def solve_omegas(half_width, corr_length, count):
    """First `count` positive roots of the transcendental frequency equations.

    Roots of 1/b - w*tan(w*a) = 0 (cosine branch, odd positions) alternate
    with roots of w + tan(w*a)/b = 0 (sine branch, even positions) in
    ascending order: one cosine root below pi/(2a), then one sine and one
    cosine root between each consecutive pair of tan asymptotes.  Each root
    is bracketed away from the asymptotes and bisected to 1e-12, then
    Newton-polished.

    Returns an array of `count` ascending frequencies; position parity
    (1-based) identifies the branch.
    """
    a, b = float(half_width), float(corr_length)
    if a <= 0 or b <= 0:
        raise ValueError("half_width and corr_length must be positive")
    if count < 1:
        raise ValueError(f"need count >= 1, got {count}")

    def f_odd(w):
        return 1.0 / b - w * np.tan(w * a)

    def df_odd(w):
        t = np.tan(w * a)
        return -t - w * a * (1.0 + t * t)

    def f_even(w):
        return w + np.tan(w * a) / b

    def df_even(w):
        t = np.tan(w * a)
        return 1.0 + a * (1.0 + t * t) / b

    margin = 1e-9
    roots = []
    lo, hi = margin, np.pi / (2 * a) - margin
    root = _polish(f_odd, df_odd, _bisect(f_odd, lo, hi), lo, hi)
    roots.append(root)
    interval = 1
    while len(roots) < count:
        lo = (2 * interval - 1) * np.pi / (2 * a) + margin
        mid = interval * np.pi / a
        hi = (2 * interval + 1) * np.pi / (2 * a) - margin
        root = _polish(f_even, df_even, _bisect(f_even, lo, mid - margin), lo, mid - margin)
        roots.append(root)
        if len(roots) < count:
            root = _polish(f_odd, df_odd, _bisect(f_odd, mid + margin, hi), mid + margin, hi)
            roots.append(root)
        interval += 1
    return np.array(roots[:count])


def eigen_1d(half_width, corr_length, variance, count):
    """First `count` 1D eigenpairs, eigenvalues strictly decreasing.

    lambda_i = variance * 2b / (1 + b^2 omega_i^2); eigenfunctions are the
    unit-norm cosine/sine branches.
    """
    a, b = float(half_width), float(corr_length)
    omegas = solve_omegas(a, b, count)
    pairs = []
    for pos, omega in enumerate(omegas, start=1):
        eigenvalue = variance * 2.0 * b / (1.0 + (b * omega) ** 2)
        sin_term = np.sin(2 * omega * a) / (2 * omega)
        if pos % 2 == 1:
            parity, norm_sq = "odd", a + sin_term
        else:
            parity, norm_sq = "even", a - sin_term
        pairs.append(Eigenpair1D(float(omega), float(eigenvalue), parity, float(np.sqrt(norm_sq))))
    return pairs


def eigen_2d(half_width, corr_length, variance, n_terms):
    """First `n_terms` tensor-product eigenpairs, sorted descending.

    The candidate set is grown until the largest product involving an
    uncomputed 1D mode is strictly below the n_terms-th best candidate, so
    the returned prefix is guaranteed complete.  The stored 1D factors are
    scaled by sqrt(variance) so that their products sum to the 2D kernel
    trace variance * (2a)^2.
    """
    if n_terms < 1:
        raise ValueError(f"need n_terms >= 1, got {n_terms}")
    if variance <= 0.0:
        raise ValueError(f"process variance must be positive, got {variance}")
    m = max(4, int(ceil(sqrt(n_terms))) + 2)
    while True:
        pairs = eigen_1d(half_width, corr_length, sqrt(variance), m)
        lam = [p.eigenvalue for p in pairs]
        candidates = [
            (lam[i] * lam[j], i + 1, j + 1) for i in range(m) for j in range(m)
        ]
        candidates.sort(key=lambda t: (-t[0], t[1], t[2]))
        if len(candidates) >= n_terms and lam[m - 1] * lam[0] < candidates[n_terms - 1][0]:
            break
        m *= 2
    return KlExpansion2D(
        float(half_width),
        float(corr_length),
        float(variance),
        tuple(pairs),
        tuple(candidates[:n_terms]),
    )


def _eval_mode_1d(pair, z):
    if pair.parity == "odd":
        return np.cos(pair.omega * z) / pair.norm
    return np.sin(pair.omega * z) / pair.norm


def eigenfunction_2d(expansion, k, point):
    """Evaluate the k-th (1-based) 2D eigenfunction at a point in [-a, a]^2."""
    if not 1 <= k <= len(expansion.terms):
        raise IndexError(f"term index {k} out of range [1, {len(expansion.terms)}]")
    x, y = float(point[0]), float(point[1])
    a = expansion.half_width
    if abs(x) > a + 1e-12 or abs(y) > a + 1e-12:
        raise ValueError(f"point ({x}, {y}) outside the domain [-{a}, {a}]^2")
    _, ix, iy = expansion.terms[k - 1]
    return float(
        _eval_mode_1d(expansion.pairs_1d[ix - 1], x) * _eval_mode_1d(expansion.pairs_1d[iy - 1], y)
    )


def partial_sum_ratio(lambdas, k, n):
    """Ratio of the k-term to the n-term eigenvalue partial sum."""
    lambdas = np.asarray(lambdas, dtype=float)
    if lambdas.size == 0:
        raise ValueError("empty eigenvalue sequence")
    if not 1 <= k <= n <= lambdas.size:
        raise ValueError(f"need 1 <= k <= n <= {lambdas.size}, got k={k}, n={n}")
    return float(lambdas[:k].sum() / lambdas[:n].sum())


def gaussian_modes(expansion, mesh_nodes, mean_log, n_modes):
    """Nodal values of the truncated Gaussian field modes.

    Returns an (n_modes + 1, n_nodes) array: row 0 is the constant mean of
    the log field, row j is sqrt(lambda_j) * f_j evaluated at the mesh
    nodes.  Mesh coordinates in [0, 1]^2 are shifted to the kernel's
    [-a, a]^2 frame before evaluation.
    """
    if n_modes > len(expansion.terms):
        raise ValueError(
            f"requested {n_modes} modes but expansion holds {len(expansion.terms)} terms"
        )
    nodes = np.asarray(mesh_nodes, dtype=float)
    shifted = nodes - 0.5
    a = expansion.half_width
    if np.any(np.abs(shifted) > a + 1e-12):
        raise ValueError("mesh node outside the unit square covered by the expansion")
    modes = np.empty((n_modes + 1, nodes.shape[0]))
    modes[0] = mean_log
    for j in range(1, n_modes + 1):
        eigenvalue, ix, iy = expansion.terms[j - 1]
        fx = _eval_mode_1d(expansion.pairs_1d[ix - 1], shifted[:, 0])
        fy = _eval_mode_1d(expansion.pairs_1d[iy - 1], shifted[:, 1])
        modes[j] = np.sqrt(eigenvalue) * fx * fy
    return modes
