"""Posterior summaries, normalized index estimates, MSE, ACF/ESS and link curves.

Conventions, applied uniformly:

* quantiles use linear interpolation between order statistics;
* standard deviations use the n-1 denominator;
* index draws are normalized per draw (unit Euclidean norm, sign fixed so the
  first component above 1e-10 in magnitude is positive) before computing
  summary tables, while the raw scale is kept for the distribution of
  d = 1 / ||beta||^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._blas import single_thread_blas
from .ald import mixture_constants
from .kernel import build_kernel, factor_covariance, gp_predict, single_index

__all__ = [
    "PosteriorSummary",
    "NormalizedIndex",
    "normalize_index",
    "normalize_draws",
    "summarize",
    "mse_against_truth",
    "acf",
    "effective_sample_size",
    "fitted_link",
]

SIGN_COMPONENT_FLOOR = 1e-10


@dataclass(frozen=True)
class PosteriorSummary:
    mean: float
    median: float
    sd: float
    q2_5: float
    q97_5: float


@dataclass(frozen=True)
class NormalizedIndex:
    """Unit-norm index vector with the documented sign rule, and d = 1/||beta||^2."""

    vector: np.ndarray
    d: float


def _fix_sign(v: np.ndarray) -> np.ndarray:
    """Flip so the first component with |v_j| >= 1e-10 is positive."""
    for x in v:
        if abs(x) >= SIGN_COMPONENT_FLOOR:
            return -v if x < 0.0 else v
    return v


def normalize_index(beta_raw) -> NormalizedIndex:
    """Unit-norm, sign-fixed version of an unconstrained index vector."""
    beta_raw = np.asarray(beta_raw, dtype=float)
    norm = float(np.linalg.norm(beta_raw))
    if norm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return NormalizedIndex(vector=_fix_sign(beta_raw / norm), d=1.0 / norm**2)


def normalize_draws(draws) -> np.ndarray:
    """Per-row unit-norm, sign-fixed copy of a (draws, p) array."""
    draws = np.asarray(draws, dtype=float)
    out = np.empty_like(draws)
    for i, row in enumerate(draws):
        out[i] = normalize_index(row).vector
    return out


def summarize(draws) -> PosteriorSummary:
    """Mean, median, sd and central 95% interval of a scalar draw sequence."""
    draws = np.asarray(draws, dtype=float)
    if draws.ndim != 1 or draws.shape[0] < 2:
        raise ValueError("need a 1-d sequence of at least 2 draws")
    q2_5, median, q97_5 = np.quantile(draws, [0.025, 0.5, 0.975])
    return PosteriorSummary(
        mean=float(np.mean(draws)),
        median=float(median),
        sd=float(np.std(draws, ddof=1)),
        q2_5=float(q2_5),
        q97_5=float(q97_5),
    )


def mse_against_truth(estimates, truth) -> np.ndarray:
    """Componentwise mean over replications of (estimate_j - truth_j)^2."""
    estimates = np.atleast_2d(np.asarray(estimates, dtype=float))
    truth = np.asarray(truth, dtype=float)
    if estimates.shape[1] != truth.shape[0]:
        raise ValueError(
            f"dimension mismatch: estimates have {estimates.shape[1]} components, "
            f"truth has {truth.shape[0]}"
        )
    return np.mean((estimates - truth) ** 2, axis=0)


def acf(series, max_lag: int) -> np.ndarray:
    """Sample autocorrelation at lags 0..max_lag (lag 0 is exactly 1)."""
    x = np.asarray(series, dtype=float)
    n = x.shape[0]
    if n <= max_lag:
        raise ValueError(f"series of length {n} too short for max_lag {max_lag}")
    x = x - x.mean()
    denom = float(x @ x)
    if denom == 0.0:
        raise ValueError("zero-variance series has no autocorrelation")
    m = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(x, m)
    autocov = np.fft.irfft(f * np.conj(f), m)[: max_lag + 1]
    rho = autocov / denom
    rho[0] = 1.0
    return rho


def effective_sample_size(series) -> float:
    """ESS = N / (1 + 2 * sum of autocorrelations).

    The sum is truncated by Geyer's initial-positive rule: consecutive lag
    pairs (rho_2m + rho_2m+1) are accumulated while positive.  The implied
    integrated autocorrelation time is floored at 1/N, so strongly antithetic
    series report ESS above N rather than a division by zero.
    """
    x = np.asarray(series, dtype=float)
    n = x.shape[0]
    if n < 4:
        raise ValueError("need at least 4 points")
    rho = acf(x, max_lag=n - 1 if n % 2 == 0 else n - 2)
    pair_sums = rho[0::2][: rho[1::2].shape[0]] + rho[1::2]
    positive = 0.0
    for g in pair_sums:
        if g <= 0.0:
            break
        positive += g
    iact = max(2.0 * positive - 1.0, 1.0 / n)
    return n / iact


def fitted_link(draws, data, grid, max_draws=None):
    """Pointwise mean and 2.5%/97.5% band of the link over an index grid.

    For each retained draw, the link's conditional mean is evaluated on the
    grid with that draw's kernel and latent covariance; the curves are then
    aggregated pointwise across draws.  Requires the chain to have retained
    its latent exponentials.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("empty grid")
    if draws.e is None:
        raise ValueError("chain draws must retain the latent exponentials")
    X = np.asarray(data.X, dtype=float)
    y = np.asarray(data.y, dtype=float)
    mc = mixture_constants(draws.tau)

    idx = np.arange(draws.n_kept)
    if max_draws is not None and max_draws < idx.shape[0]:
        idx = np.linspace(0, idx.shape[0] - 1, max_draws).round().astype(int)

    curves = np.empty((idx.shape[0], grid.shape[0]))
    with single_thread_blas():
        for row, k in enumerate(idx):
            t = single_index(X, draws.beta[k])
            K = build_kernel(t, draws.gamma[k])
            E = mc.k2 * draws.sigma[k] * draws.e[k]
            fc = factor_covariance(K, E)
            r = y - mc.k1 * draws.e[k]
            curves[row], _ = gp_predict(fc, t, grid, draws.gamma[k], r)

    lower, upper = np.quantile(curves, [0.025, 0.975], axis=0)
    return curves.mean(axis=0), lower, upper
