"""Index-dependent squared-exponential kernel and factored-covariance numerics.

The kernel matrix over index values t_1..t_n has entries

    C[i, j] = gamma * exp(-(t_i - t_j)^2),

with the range absorbed into the scale of the index vector, so the amplitude
``gamma`` is the only kernel hyperparameter.  All inverses of C + D (D a
non-negative diagonal) go through one lower-Cholesky factorization, wrapped in
:class:`FactoredCovariance` together with its log-determinant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve, solve_triangular
from scipy.linalg.lapack import dpotrf

__all__ = [
    "FactorizationError",
    "KernelParams",
    "FactoredCovariance",
    "single_index",
    "build_kernel",
    "build_cross_kernel",
    "factor_covariance",
    "collapsed_gaussian_logpdf",
    "gp_condition",
    "gp_predict",
]


class FactorizationError(np.linalg.LinAlgError):
    """Cholesky failure; ``pivot`` is the 1-based index of the bad leading minor."""

    def __init__(self, pivot: int):
        super().__init__(f"leading minor {pivot} is not positive definite")
        self.pivot = pivot


@dataclass(frozen=True)
class KernelParams:
    """Kernel amplitude and the diagonal stabilizer added before factorizing."""

    gamma: float
    jitter: float = 0.0

    def __post_init__(self):
        if not self.gamma > 0.0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if not self.jitter >= 0.0:
            raise ValueError(f"jitter must be non-negative, got {self.jitter}")


def single_index(X, beta) -> np.ndarray:
    """Vector of inner products x_i' beta."""
    X = np.asarray(X, dtype=float)
    beta = np.asarray(beta, dtype=float)
    if X.ndim != 2 or beta.ndim != 1 or X.shape[1] != beta.shape[0]:
        raise ValueError(
            f"dimension mismatch: X is {X.shape}, beta has length {beta.shape}"
        )
    return X @ beta


def build_kernel(index, gamma: float) -> np.ndarray:
    """Symmetric matrix gamma * exp(-(t_i - t_j)^2) with diagonal gamma."""
    if not gamma > 0.0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    t = np.asarray(index, dtype=float)
    d = t[:, None] - t[None, :]
    return gamma * np.exp(-(d * d))


def build_cross_kernel(index_a, index_b, gamma: float) -> np.ndarray:
    """Cross-kernel gamma * exp(-(a_i - b_j)^2), shape (len(a), len(b))."""
    a = np.asarray(index_a, dtype=float)
    b = np.asarray(index_b, dtype=float)
    d = a[:, None] - b[None, :]
    return gamma * np.exp(-(d * d))


class FactoredCovariance:
    """Lower-Cholesky factor of C + diag(d) + jitter*I with cached log-determinant.

    Immutable after construction; safe to share read-only.
    """

    __slots__ = ("lower", "log_det")

    def __init__(self, lower: np.ndarray):
        self.lower = lower
        self.log_det = 2.0 * float(np.sum(np.log(np.diag(lower))))

    @property
    def n(self) -> int:
        return self.lower.shape[0]

    def solve(self, b) -> np.ndarray:
        """(C + D)^{-1} b for a vector or matrix right-hand side."""
        return cho_solve((self.lower, True), b, check_finite=False)

    def half_solve(self, v) -> np.ndarray:
        """L^{-1} v, so that ||half_solve(v)||^2 = quad_form(v)."""
        return solve_triangular(self.lower, v, lower=True, check_finite=False)

    def quad_form(self, v) -> float:
        """v' (C + D)^{-1} v, evaluated through the triangular factor."""
        w = self.half_solve(v)
        return float(w @ w)


def factor_covariance(C, diag, jitter: float = 0.0) -> FactoredCovariance:
    """Factor C + diag(diag) + jitter*I.

    Raises :class:`FactorizationError` carrying the failing pivot index when
    the matrix is not numerically positive definite; callers may retry with a
    larger jitter.
    """
    C = np.asarray(C, dtype=float)
    n = C.shape[0]
    A = np.array(C, order="F", copy=True)
    A.flat[:: n + 1] += diag
    if jitter:
        A.flat[:: n + 1] += jitter
    lower, info = dpotrf(A, lower=1, clean=1, overwrite_a=1)
    if info != 0:
        raise FactorizationError(pivot=int(info))
    return FactoredCovariance(lower)


def collapsed_gaussian_logpdf(r, fc: FactoredCovariance) -> float:
    """-1/2 * logdet(C + D) - 1/2 * r'(C + D)^{-1} r.

    The (2*pi)^(-n/2) constant is omitted; every use is inside a ratio at
    fixed n, where it cancels.
    """
    r = np.asarray(r, dtype=float)
    if r.shape != (fc.n,):
        raise ValueError(f"dimension mismatch: r has shape {r.shape}, factor is {fc.n}")
    return -0.5 * (fc.log_det + fc.quad_form(r))


def gp_condition(fc: FactoredCovariance, C, r):
    """Conditional mean and covariance of the latent values given residual r.

    With fc factoring C + E, returns

        mu    = C (C + E)^{-1} r,
        Sigma = C (C + E)^{-1} E   (computed as C - C (C + E)^{-1} C),

    with Sigma symmetrized as (Sigma + Sigma')/2 before use.
    """
    C = np.asarray(C, dtype=float)
    r = np.asarray(r, dtype=float)
    if C.shape != (fc.n, fc.n) or r.shape != (fc.n,):
        raise ValueError("dimension mismatch between factor, kernel and residual")
    U = fc.solve(C)  # (C + E)^{-1} C
    mu = U.T @ r
    sigma = C - U.T @ C
    sigma = 0.5 * (sigma + sigma.T)
    return mu, sigma


def gp_predict(fc: FactoredCovariance, index_train, index_new, gamma: float, r):
    """Conditional mean and pointwise variance of the link at new index values.

    mean = Cs'(C + E)^{-1} r and var = gamma - diag(Cs'(C + E)^{-1} Cs), with
    Cs the train-by-new cross-kernel; variances are clipped at zero.
    """
    r = np.asarray(r, dtype=float)
    cross = build_cross_kernel(index_train, index_new, gamma)
    mean = cross.T @ fc.solve(r)
    V = fc.solve(cross)
    var = gamma - np.einsum("ij,ij->j", cross, V)
    return mean, np.maximum(var, 0.0)
